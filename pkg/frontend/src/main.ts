import { HubApi } from "./api.js";
import { mountPanel } from "./panel.js";
import { PanelStore } from "./state.js";

export const POLL_INTERVAL_MS = 2000;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

// Same-origin: the hub serves these assets itself.
const store = new PanelStore(new HubApi(""));
mountPanel(root, store);
setInterval(() => void store.refresh(), POLL_INTERVAL_MS);
