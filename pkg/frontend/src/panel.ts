/**
 * DOM rendering for the control panel. All behavior lives in PanelStore;
 * this layer draws the current ViewState and forwards user input.
 */

import type { PanelStore, ViewState } from "./state.js";
import type { StatusPair } from "./packets.js";

const TEMP_WIRE_OFFSET = 50;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function isSensor(device: string): boolean {
  return (
    device.startsWith("Temp_") ||
    device.startsWith("Gas_") ||
    device.startsWith("Motion_")
  );
}

function sensorLabel(device: string, status: number): string {
  if (device.startsWith("Temp_")) {
    return `${status - TEMP_WIRE_OFFSET} °C`;
  }
  return status === 0 ? "clear" : "TRIGGERED";
}

export function mountPanel(root: HTMLElement, store: PanelStore): void {
  store.subscribe((state) => render(root, store, state));
  render(root, store, store.state);
}

function render(root: HTMLElement, store: PanelStore, state: ViewState): void {
  root.innerHTML = "";
  root.appendChild(state.phase === "login" ? loginView(store, state) : mainView(store, state));
}

function loginView(store: PanelStore, state: ViewState): HTMLElement {
  const box = el("div", "login-box");
  box.appendChild(el("h1", "", "Smart Home"));
  box.appendChild(el("p", "hint", "Enter the hub password to connect."));

  const form = el("form");
  const password = el("input");
  password.type = "password";
  password.placeholder = "password";
  password.autofocus = true;
  const submit = el("button", "primary", "Login");
  submit.type = "submit";
  form.append(password, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void store.login(password.value);
  });
  box.appendChild(form);

  if (state.loginError) {
    box.appendChild(el("p", "error login-error", state.loginError));
  }
  return box;
}

function mainView(store: PanelStore, state: ViewState): HTMLElement {
  const page = el("div", "main-page");

  if (store.sirenOn()) {
    const banner = el("div", "alarm-banner", "ALARM — siren is sounding ");
    const silence = el("button", "silence", "Silence");
    silence.addEventListener("click", () => void store.silenceSiren());
    banner.appendChild(silence);
    page.appendChild(banner);
  }
  if (state.stale) {
    page.appendChild(
      el("div", "stale-banner", "connection lost — data may be stale"),
    );
  }
  if (state.notice) {
    page.appendChild(el("div", "notice", state.notice));
  }

  page.appendChild(el("h1", "", "Smart Home"));
  page.appendChild(deviceGrid(store, state));
  page.appendChild(commandBox(store, state));
  page.appendChild(passwordDialog(store, state));
  return page;
}

function deviceGrid(store: PanelStore, state: ViewState): HTMLElement {
  const grid = el("div", "device-grid");
  for (const [device, status] of state.statuses) {
    grid.appendChild(deviceCard(store, state, device, status));
  }
  return grid;
}

function deviceCard(
  store: PanelStore,
  state: ViewState,
  device: string,
  status: number,
): HTMLElement {
  const card = el("div", "device-card");
  card.dataset.device = device;
  card.appendChild(el("div", "device-name", device.replace(/_/g, " ")));
  const pending = state.pending.includes(device);

  if (device === "FanSpeed") {
    const row = el("div", "speed-row");
    for (const speed of [0, 1, 2, 3]) {
      const btn = el("button", speed === status ? "speed active" : "speed", String(speed));
      btn.disabled = pending;
      btn.addEventListener("click", () => void store.sendCommand("FanSpeed", String(speed)));
      row.appendChild(btn);
    }
    card.appendChild(row);
  } else if (isSensor(device)) {
    card.appendChild(el("div", "sensor-value", sensorLabel(device, status)));
  } else {
    const on = status === 1;
    card.appendChild(el("div", on ? "state on" : "state off", on ? "ON" : "OFF"));
    const toggle = el("button", "toggle", on ? "Turn Off" : "Turn On");
    toggle.disabled = pending;
    toggle.addEventListener("click", () =>
      void store.sendCommand(device, on ? "Off" : "On"),
    );
    card.appendChild(toggle);
  }
  return card;
}

function commandBox(store: PanelStore, state: ViewState): HTMLElement {
  const box = el("div", "command-box");
  box.appendChild(el("h2", "", "Command"));
  const form = el("form");
  const input = el("input");
  input.type = "text";
  input.placeholder = 'e.g. "turn on light one"';
  const send = el("button", "primary", "Send");
  send.type = "submit";
  form.append(input, send);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void store.sendPhrase(input.value);
  });
  box.appendChild(form);
  if (state.commandError) {
    box.appendChild(el("p", "error command-error", state.commandError));
  }
  return box;
}

function passwordDialog(store: PanelStore, state: ViewState): HTMLElement {
  const details = el("details", "password-dialog");
  details.appendChild(el("summary", "", "Change password"));
  const form = el("form");
  const oldPw = el("input");
  oldPw.type = "password";
  oldPw.placeholder = "old password";
  const newPw = el("input");
  newPw.type = "password";
  newPw.placeholder = "new password";
  const confirm = el("input");
  confirm.type = "password";
  confirm.placeholder = "confirm new password";
  const submit = el("button", "primary", "Change");
  submit.type = "submit";
  form.append(oldPw, newPw, confirm, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void store.changePassword(oldPw.value, newPw.value, confirm.value);
  });
  details.appendChild(form);
  if (state.passwordError) {
    details.open = true;
    details.appendChild(el("p", "error password-error", state.passwordError));
  }
  return details;
}
