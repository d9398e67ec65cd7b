import { ApiClient } from "./api.js";
import { App } from "./app.js";

const baseUrl = new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000";
const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new App(root, new ApiClient(baseUrl));
app.start().catch((err) => {
  root.textContent = `Could not reach the ledger service at ${baseUrl}: ${err}`;
});
