/**
 * Wire grammar for hub packets, mirrored from the protocol doc.
 *
 * Command:  $<auth>$<target>_<action>   (split at the LAST underscore)
 * Response: <code> <device>:<status> ...
 *
 * The panel never builds wire text anywhere else; the golden packet
 * corpus exported by the hub codec is replayed over these functions in
 * the unit tests.
 */

export interface CommandFields {
  auth: string;
  target: string;
  action: string;
}

export type StatusPair = [device: string, status: number];

export interface ResponseFields {
  code: number;
  statuses: StatusPair[];
}

export const RESPONSE_CODES = [200, 201, 404];

export class MalformedPacket extends Error {}
export class InvalidField extends Error {}

function fieldOk(text: string, extraForbidden = ""): boolean {
  if (text.length === 0) return false;
  for (const ch of text) {
    const code = ch.charCodeAt(0);
    if (code < 0x21 || code > 0x7e) return false;
    if (ch === "$" || extraForbidden.includes(ch)) return false;
  }
  return true;
}

export function serializeCommand(fields: CommandFields): string {
  if (!fieldOk(fields.auth)) throw new InvalidField(`auth: ${fields.auth}`);
  if (!fieldOk(fields.target)) throw new InvalidField(`target: ${fields.target}`);
  if (!fieldOk(fields.action, "_")) throw new InvalidField(`action: ${fields.action}`);
  return `$${fields.auth}$${fields.target}_${fields.action}`;
}

export function parseResponse(raw: string): ResponseFields {
  const tokens = raw.split(" ");
  if (tokens.length === 0 || tokens[0] === "") {
    throw new MalformedPacket(`empty response: ${JSON.stringify(raw)}`);
  }
  if (!/^[0-9]+$/.test(tokens[0])) {
    throw new MalformedPacket(`non-numeric code: ${JSON.stringify(raw)}`);
  }
  const code = parseInt(tokens[0], 10);
  if (!RESPONSE_CODES.includes(code)) {
    throw new MalformedPacket(`unknown response code ${code}`);
  }
  const statuses: StatusPair[] = [];
  const seen = new Set<string>();
  for (const token of tokens.slice(1)) {
    const colon = token.indexOf(":");
    if (colon <= 0) throw new MalformedPacket(`bad token: ${JSON.stringify(token)}`);
    const device = token.slice(0, colon);
    const statusText = token.slice(colon + 1);
    if (!/^[0-9]+$/.test(statusText)) {
      throw new MalformedPacket(`bad status: ${JSON.stringify(token)}`);
    }
    if (seen.has(device)) throw new MalformedPacket(`duplicate device: ${device}`);
    seen.add(device);
    statuses.push([device, parseInt(statusText, 10)]);
  }
  return { code, statuses };
}
