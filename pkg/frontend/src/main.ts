import { makeClient } from "./api.js";
import { createApp } from "./app.js";

async function boot() {
  const root = document.getElementById("app");
  if (!root) throw new Error("#app container missing");
  const client = makeClient();
  try {
    const modes = await client.modes();
    createApp(root, client, modes);
  } catch (err) {
    root.textContent = `service unavailable: ${err instanceof Error ? err.message : err}`;
  }
}

void boot();
