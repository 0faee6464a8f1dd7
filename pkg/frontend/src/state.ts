/**
 * Panel view state and transitions. Pure logic, no DOM: the store calls
 * the hub API and notifies listeners; rendering subscribes.
 *
 * Invariants kept here:
 *  - phase becomes "main" only after an application-code-200 response;
 *  - rendered statuses always come from the last server response, never
 *    from optimistic local state;
 *  - at most one in-flight command per device (later clicks coalesce);
 *  - the password lives in memory for the session only.
 */

import { HubUnreachable, type HubApi } from "./api.js";
import { mapPhrase, UnmappedPhrase } from "./phrases.js";
import type { StatusPair } from "./packets.js";

export type Phase = "login" | "main";

export interface ViewState {
  phase: Phase;
  statuses: StatusPair[];
  loginError: string | null;
  notice: string | null;
  commandError: string | null;
  passwordError: string | null;
  stale: boolean;
  pending: string[];
}

export const INVALID_PASSWORD = "invalid password";
export const CONNECTION_FAILED = "cannot reach the hub, check the address and retry";
export const NO_COMMAND = "no command captured, please try again";
export const LOGIN_OK = "login successful";
export const PASSWORD_CHANGED = "password changed";
export const PASSWORD_MISMATCH = "new passwords do not match";
export const STALE_AFTER_FAILURES = 2;

type Listener = (state: ViewState) => void;

export class PanelStore {
  private password = "";
  private pollFailures = 0;
  private pendingTargets = new Set<string>();
  private listeners: Listener[] = [];

  state: ViewState = {
    phase: "login",
    statuses: [],
    loginError: null,
    notice: null,
    commandError: null,
    passwordError: null,
    stale: false,
    pending: [],
  };

  constructor(private readonly api: HubApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<ViewState>): void {
    this.state = {
      ...this.state,
      ...patch,
      pending: [...this.pendingTargets],
    };
    for (const listener of this.listeners) listener(this.state);
  }

  sirenOn(): boolean {
    return this.state.statuses.some(([device, status]) => device === "Siren" && status === 1);
  }

  async login(password: string): Promise<void> {
    try {
      const result = await this.api.sendCommand(password, "Status", "All");
      if (result.code === 200) {
        this.password = password;
        this.pollFailures = 0;
        this.update({
          phase: "main",
          statuses: result.statuses,
          loginError: null,
          notice: LOGIN_OK,
          stale: false,
        });
      } else {
        this.update({ loginError: INVALID_PASSWORD });
      }
    } catch (err) {
      if (err instanceof HubUnreachable) {
        this.update({ loginError: CONNECTION_FAILED });
      } else {
        throw err;
      }
    }
  }

  /** One poll turn; swallows connection errors and flags staleness. */
  async refresh(): Promise<void> {
    if (this.state.phase !== "main") return;
    try {
      const result = await this.api.sendCommand(this.password, "Status", "All");
      if (result.code === 200) {
        this.pollFailures = 0;
        this.update({ statuses: result.statuses, stale: false });
      } else {
        // Credential no longer valid (changed elsewhere): back to login.
        this.update({ phase: "login", loginError: INVALID_PASSWORD, notice: null });
      }
    } catch (err) {
      if (!(err instanceof HubUnreachable)) throw err;
      this.pollFailures += 1;
      if (this.pollFailures >= STALE_AFTER_FAILURES) {
        this.update({ stale: true });
      }
    }
  }

  /**
   * Send one device command; resolves to the application code, or null
   * when coalesced behind an in-flight command for the same target.
   */
  async sendCommand(target: string, action: string): Promise<number | null> {
    if (this.pendingTargets.has(target)) return null;
    this.pendingTargets.add(target);
    this.update({});
    try {
      const result = await this.api.sendCommand(this.password, target, action);
      if (result.code === 200) {
        this.pendingTargets.delete(target);
        this.update({ statuses: result.statuses, commandError: null, stale: false });
      } else {
        this.pendingTargets.delete(target);
        this.update({ commandError: `command rejected (${result.code})` });
      }
      return result.code;
    } catch (err) {
      this.pendingTargets.delete(target);
      if (err instanceof HubUnreachable) {
        this.update({ commandError: CONNECTION_FAILED });
        return null;
      }
      this.update({});
      throw err;
    }
  }

  /** Text command box: keyword-map the phrase, then send it. */
  async sendPhrase(phrase: string): Promise<number | null> {
    let target: string;
    let action: string;
    try {
      [target, action] = mapPhrase(phrase);
    } catch (err) {
      if (err instanceof UnmappedPhrase) {
        this.update({ commandError: NO_COMMAND });
        return null;
      }
      throw err;
    }
    this.update({ commandError: null });
    return this.sendCommand(target, action);
  }

  async silenceSiren(): Promise<void> {
    await this.sendCommand("Siren", "Off");
  }

  /**
   * Old + new + confirm; a mismatch blocks submission client-side. On
   * 201 the session password switches to the new one so polling keeps
   * working.
   */
  async changePassword(
    oldPassword: string,
    newPassword: string,
    confirm: string,
  ): Promise<boolean> {
    if (newPassword !== confirm) {
      this.update({ passwordError: PASSWORD_MISMATCH });
      return false;
    }
    try {
      const result = await this.api.sendCommand(oldPassword, "ChangePass", newPassword);
      if (result.code === 201) {
        this.password = newPassword;
        this.update({ passwordError: null, notice: PASSWORD_CHANGED });
        return true;
      }
      this.update({ passwordError: INVALID_PASSWORD });
      return false;
    } catch (err) {
      if (err instanceof HubUnreachable) {
        this.update({ passwordError: CONNECTION_FAILED });
        return false;
      }
      throw err;
    }
  }
}
