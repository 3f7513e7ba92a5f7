export interface AskResponse {
  answer: string;
  matched_question?: string;
  confidence?: number;
  source: string;
  rejected: boolean;
}

export interface HealthResponse {
  ready: boolean;
  mode: string;
  error: string | null;
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

/** Thin typed client for the faqwise HTTP service. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async ask(question: string, threshold?: number): Promise<AskResponse> {
    const body: Record<string, unknown> = { question };
    if (threshold !== undefined) body.threshold = threshold;
    const response = await fetch(this.url("/ask"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(`ask failed with status ${response.status}`, response.status);
    }
    return (await response.json()) as AskResponse;
  }

  async questions(): Promise<string[]> {
    const response = await fetch(this.url("/questions"));
    if (!response.ok) {
      throw new ApiError(`questions failed with status ${response.status}`, response.status);
    }
    return (await response.json()) as string[];
  }

  async health(): Promise<HealthResponse> {
    const response = await fetch(this.url("/health"));
    if (!response.ok) {
      throw new ApiError(`health failed with status ${response.status}`, response.status);
    }
    return (await response.json()) as HealthResponse;
  }
}
