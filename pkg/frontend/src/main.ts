import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const meta = document.querySelector('meta[name="olg-api-base"]');
  const baseUrl = meta?.getAttribute("content") ?? "";
  createApp(root, new ApiClient(baseUrl, (input, init) => window.fetch(input, init)));
}
