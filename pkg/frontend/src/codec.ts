// Client-side half of the record pipeline: DNA -> bits -> envelope bytes ->
// chunk decryption -> guarded digits -> text. Mirrors the server wire format
// exactly so owners can decrypt locally without the key leaving the page.

import { DomainParams, decryptChunk } from "./crypto.js";

const PUNCTUATION = "!\"#%&'()*+,-./:;<=>?@$^_[\\]`~{|}";
const DIGITS = "0123456789";
const UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
const LOWER = "abcdefghijklmnopqrstuvwxyz";
const ALPHABET = DIGITS + UPPER + LOWER + " " + PUNCTUATION;

const CODE_TO_CHAR = new Map<string, string>();
const CHAR_TO_CODE = new Map<string, string>();
for (let i = 0; i < ALPHABET.length; i++) {
  const code = String(i + 1).padStart(2, "0");
  CODE_TO_CHAR.set(code, ALPHABET[i]);
  CHAR_TO_CODE.set(ALPHABET[i], code);
}

export function encodeText(text: string): string {
  let out = "";
  for (const ch of text) {
    const code = CHAR_TO_CODE.get(ch);
    if (code === undefined) throw new Error(`unsupported character ${JSON.stringify(ch)}`);
    out += code;
  }
  return out;
}

export function decodeDigits(digits: string): string {
  if (digits.length % 2 !== 0) throw new Error("truncated digit stream");
  let out = "";
  for (let i = 0; i < digits.length; i += 2) {
    const ch = CODE_TO_CHAR.get(digits.slice(i, i + 2));
    if (ch === undefined) throw new Error(`invalid code at pair ${i / 2}`);
    out += ch;
  }
  return out;
}

const BASE_TO_PAIR: Record<string, string> = { A: "11", T: "10", C: "01", G: "00" };
const PAIR_TO_BASE: Record<string, string> = { "11": "A", "10": "T", "01": "C", "00": "G" };

export function dnaToBits(dna: string): string {
  let bits = "";
  for (let i = 0; i < dna.length; i++) {
    const pair = BASE_TO_PAIR[dna[i]];
    if (pair === undefined) throw new Error(`invalid base ${dna[i]} at ${i}`);
    bits += pair;
  }
  return bits;
}

export function bitsToDna(bits: string): string {
  if (bits.length % 2 !== 0) throw new Error("odd bit count");
  let dna = "";
  for (let i = 0; i < bits.length; i += 2) dna += PAIR_TO_BASE[bits.slice(i, i + 2)];
  return dna;
}

export function bitsToBytes(bits: string): Uint8Array {
  if (bits.length % 8 !== 0) throw new Error("ragged bit stream");
  const out = new Uint8Array(bits.length / 8);
  for (let i = 0; i < out.length; i++) out[i] = parseInt(bits.slice(8 * i, 8 * i + 8), 2);
  return out;
}

export interface Envelope {
  chunkDigits: number;
  plaintextChars: number;
  keyBytes: number;
  ciphertexts: { y1: bigint; y2: bigint }[];
}

export function parseEnvelope(data: Uint8Array): Envelope {
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const magic = String.fromCharCode(...data.slice(0, 4));
  if (magic !== "LRC1") throw new Error("bad envelope magic");
  if (view.getUint8(4) !== 1) throw new Error("unsupported envelope version");
  const chunkDigits = view.getUint16(5);
  const plaintextChars = view.getUint32(7);
  const chunkCount = view.getUint32(11);
  const keyBytes = view.getUint16(15);
  if (data.length !== 21 + chunkCount * 2 * keyBytes) throw new Error("envelope length mismatch");
  const ciphertexts = [];
  let off = 21;
  const readInt = (width: number) => {
    let acc = 0n;
    for (let i = 0; i < width; i++) acc = (acc << 8n) | BigInt(data[off + i]);
    off += width;
    return acc;
  };
  for (let i = 0; i < chunkCount; i++) {
    ciphertexts.push({ y1: readInt(keyBytes), y2: readInt(keyBytes) });
  }
  return { chunkDigits, plaintextChars, keyBytes, ciphertexts };
}

/** Full retrieval pipeline; throws on a wrong key instead of returning garbage. */
export function decryptRecord(params: DomainParams, privateA: bigint, dna: string): string {
  const env = parseEnvelope(bitsToBytes(dnaToBits(dna)));
  let digits = "";
  let remaining = 2 * env.plaintextChars;
  for (let i = 0; i < env.ciphertexts.length; i++) {
    const { y1, y2 } = env.ciphertexts[i];
    const value = decryptChunk(params, privateA, y1, y2).toString();
    const expected = Math.min(env.chunkDigits, remaining);
    if (value.length !== expected + 1 || value[0] !== "1") {
      throw new Error(`chunk ${i} lost its guard digit (wrong key or corrupted record)`);
    }
    digits += value.slice(1);
    remaining -= expected;
  }
  return decodeDigits(digits).slice(0, env.plaintextChars);
}
