/**
 * HTTP access to the hub's /cmd endpoint. The JSON envelope's `raw`
 * field carries the normative response packet text; it is re-parsed
 * through the packet grammar rather than trusting the JSON mirror.
 */

import {
  parseResponse,
  serializeCommand,
  type ResponseFields,
} from "./packets.js";

export interface CommandResult extends ResponseFields {
  raw: string;
}

export class HubUnreachable extends Error {}

export class HubApi {
  constructor(private readonly base: string = "") {}

  async sendCommand(
    auth: string,
    target: string,
    action: string,
  ): Promise<CommandResult> {
    const packet = serializeCommand({ auth, target, action });
    let envelope: { raw?: unknown };
    try {
      const resp = await fetch(`${this.base}/cmd`, {
        method: "POST",
        headers: { "Content-Type": "text/plain" },
        body: packet,
      });
      envelope = await resp.json();
    } catch (err) {
      throw new HubUnreachable(String(err));
    }
    if (typeof envelope.raw !== "string") {
      throw new HubUnreachable("response envelope missing raw packet");
    }
    return { ...parseResponse(envelope.raw), raw: envelope.raw };
  }
}
