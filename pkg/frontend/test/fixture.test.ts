// Cross-language fixture: a record encrypted by the Python service must
// decrypt in this client to the identical plaintext.

import { describe, expect, it } from "vitest";

import { decryptRecord } from "../src/codec.js";
import fixture from "./fixture_record.json";

const params = { p: BigInt(fixture.p), alpha: BigInt(fixture.alpha) };

describe("server-encrypted record", () => {
  it("decrypts to the exact canonical plaintext", () => {
    const text = decryptRecord(params, BigInt(fixture.private_a), fixture.dna);
    expect(text).toBe(fixture.plaintext);
  });

  it("fails loudly with the wrong private key instead of emitting garbage", () => {
    expect(() => decryptRecord(params, BigInt(fixture.private_a) + 1n, fixture.dna)).toThrow(
      /guard digit/,
    );
  });

  it("is pure ACGT on the wire", () => {
    expect(fixture.dna).toMatch(/^[ACGT]+$/);
  });
});
