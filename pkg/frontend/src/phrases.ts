/**
 * Keyword mapping for the text command box; the same rules as the CLI's
 * `say` subcommand: one on/off word picks the action, a device word
 * picks the target, ordinals choose numbered devices, and "fan speed
 * <n>" maps to the FanSpeed target.
 */

export class UnmappedPhrase extends Error {}

const ORDINALS: Record<string, number> = {
  zero: 0, "0": 0,
  one: 1, first: 1, "1": 1,
  two: 2, second: 2, "2": 2,
  three: 3, third: 3, "3": 3,
};

const NUMBERED: Record<string, string> = { light: "Light", plug: "Plug" };
const SINGLETONS: Record<string, string> = {
  fan: "Fan",
  siren: "Siren",
  heater: "Heater",
  auto: "Auto",
  automatic: "Auto",
};

function tokenize(phrase: string): string[] {
  return phrase
    .toLowerCase()
    .replace(/[^a-z0-9\s]/g, " ")
    .split(/\s+/)
    .filter((t) => t.length > 0);
}

export function mapPhrase(phrase: string): [target: string, action: string] {
  const tokens = tokenize(phrase);
  if (tokens.length === 0) throw new UnmappedPhrase("empty phrase");

  if (tokens.includes("fan") && tokens.includes("speed")) {
    const numbers = tokens.filter((t) => t in ORDINALS).map((t) => ORDINALS[t]);
    if (numbers.length !== 1) {
      throw new UnmappedPhrase(`no single fan speed in: ${phrase}`);
    }
    return ["FanSpeed", String(numbers[0])];
  }

  const on = tokens.includes("on");
  const off = tokens.includes("off");
  if (on === off) throw new UnmappedPhrase(`need exactly one of on/off: ${phrase}`);
  const action = on ? "On" : "Off";

  for (let i = 0; i < tokens.length; i++) {
    const token = tokens[i];
    if (token in NUMBERED) {
      let ordinal = 1;
      for (const later of tokens.slice(i + 1)) {
        if (later in ORDINALS) {
          ordinal = ORDINALS[later];
          break;
        }
      }
      return [`${NUMBERED[token]}_${ordinal}`, action];
    }
    if (token in SINGLETONS) {
      return [SINGLETONS[token], action];
    }
  }
  throw new UnmappedPhrase(`no device named in: ${phrase}`);
}
