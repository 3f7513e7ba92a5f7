import { ApiClient } from "./api.js";
import { createRecognition, finalTranscript, isSpeechSupported } from "./speech.js";

export interface ChatMessage {
  author: "user" | "assistant";
  text: string;
  confidence?: number;
  source?: string;
  rejected: boolean;
  error: boolean;
}

/**
 * Single-page chat widget. One request is in flight at a time; the input is
 * disabled until the response (or its error bubble) has been appended, so the
 * conversation log is append-only and stays in request order.
 */
export class ChatUi {
  readonly messages: ChatMessage[] = [];

  private log!: HTMLElement;
  private input!: HTMLInputElement;
  private sendButton!: HTMLButtonElement;
  private examplesList!: HTMLElement;
  private inFlight = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    private readonly scope: typeof globalThis = globalThis,
  ) {}

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  mount(): void {
    this.root.innerHTML = "";
    this.root.classList.add("chat");

    this.log = this.doc.createElement("div");
    this.log.className = "chat-log";
    this.root.appendChild(this.log);

    this.examplesList = this.doc.createElement("ul");
    this.examplesList.className = "examples loading";
    this.examplesList.textContent = "Loading example questions…";
    this.root.appendChild(this.examplesList);

    const form = this.doc.createElement("form");
    form.className = "chat-form";
    this.input = this.doc.createElement("input");
    this.input.type = "text";
    this.input.className = "chat-input";
    this.input.placeholder = "Ask a question…";
    this.sendButton = this.doc.createElement("button");
    this.sendButton.type = "submit";
    this.sendButton.className = "send";
    this.sendButton.textContent = "Send";
    form.appendChild(this.input);
    form.appendChild(this.sendButton);
    if (isSpeechSupported(this.scope)) {
      form.appendChild(this.buildMicButton());
    }
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.sendQuestion(this.input.value);
    });
    this.root.appendChild(form);

    void this.loadExamples();
  }

  private buildMicButton(): HTMLButtonElement {
    const mic = this.doc.createElement("button");
    mic.type = "button";
    mic.className = "mic";
    mic.textContent = "🎤";
    mic.addEventListener("click", () => {
      const recognition = createRecognition(this.scope);
      if (!recognition) return;
      recognition.onresult = (event) => {
        const transcript = finalTranscript(event);
        if (!transcript) return;
        this.input.value = transcript;
        void this.sendQuestion(transcript);
      };
      recognition.start();
    });
    return mic;
  }

  async loadExamples(): Promise<void> {
    let questions: string[];
    try {
      questions = await this.client.questions();
    } catch {
      this.examplesList.textContent = "Example questions unavailable.";
      this.examplesList.classList.remove("loading");
      return;
    }
    this.examplesList.classList.remove("loading");
    this.examplesList.textContent = "";
    for (const question of questions) {
      const item = this.doc.createElement("li");
      const button = this.doc.createElement("button");
      button.type = "button";
      button.className = "example";
      button.textContent = question;
      button.addEventListener("click", () => {
        this.input.value = question;
        void this.sendQuestion(question);
      });
      item.appendChild(button);
      this.examplesList.appendChild(item);
    }
  }

  async sendQuestion(text: string): Promise<void> {
    const question = text.trim();
    if (!question || this.inFlight) return;
    this.setInFlight(true);
    this.append({ author: "user", text: question, rejected: false, error: false });
    this.input.value = "";
    try {
      const response = await this.client.ask(question);
      this.append({
        author: "assistant",
        text: response.answer,
        confidence: response.confidence,
        source: response.rejected ? undefined : response.source,
        rejected: response.rejected,
        error: false,
      });
    } catch {
      this.appendError(question);
    } finally {
      this.setInFlight(false);
    }
  }

  private setInFlight(value: boolean): void {
    this.inFlight = value;
    this.input.disabled = value;
    this.sendButton.disabled = value;
  }

  private append(message: ChatMessage): void {
    this.messages.push(message);
    const bubble = this.doc.createElement("div");
    bubble.className = `bubble ${message.author}`;
    if (message.rejected) bubble.classList.add("rejected");
    const body = this.doc.createElement("p");
    body.className = "text";
    body.textContent = message.text;
    bubble.appendChild(body);
    if (message.author === "assistant" && !message.rejected && message.source) {
      const meta = this.doc.createElement("p");
      meta.className = "meta";
      const confidence =
        message.confidence !== undefined
          ? ` · confidence ${(message.confidence * 100).toFixed(1)}%`
          : "";
      meta.textContent = `source: ${message.source}${confidence}`;
      bubble.appendChild(meta);
    }
    this.log.appendChild(bubble);
  }

  private appendError(question: string): void {
    this.messages.push({
      author: "assistant",
      text: "The service could not be reached.",
      rejected: false,
      error: true,
    });
    const bubble = this.doc.createElement("div");
    bubble.className = "bubble assistant error";
    const body = this.doc.createElement("p");
    body.className = "text";
    body.textContent = "The service could not be reached.";
    const retry = this.doc.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      bubble.remove();
      void this.sendQuestion(question);
    });
    bubble.appendChild(body);
    bubble.appendChild(retry);
    this.log.appendChild(bubble);
  }
}
