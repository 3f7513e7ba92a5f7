import { ApiClient } from "./api.js";
import { ChatUi } from "./chat.js";

function backendUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("backend") ?? "http://127.0.0.1:8000";
}

const root = document.getElementById("app");
if (root) {
  new ChatUi(root, new ApiClient(backendUrl())).mount();
}
