import { describe, expect, it } from "vitest";

import {
  decryptChunk,
  digestToInt,
  keypairFromPrivate,
  modInv,
  modPow,
  randomBigIntBetween,
  sha256,
  sign,
  verify,
} from "../src/crypto.js";
import fixture from "./fixture_record.json";

const SMALL = { p: 23n, alpha: 5n };
const BIG = { p: BigInt(fixture.p), alpha: BigInt(fixture.alpha) };

describe("modular arithmetic", () => {
  it("modPow matches known values", () => {
    expect(modPow(5n, 6n, 23n)).toBe(8n);
    expect(modPow(5n, 3n, 23n)).toBe(10n);
    expect(modPow(2n, 0n, 7n)).toBe(1n);
  });

  it("modInv inverts across the small field", () => {
    for (let v = 1n; v < 23n; v++) expect((v * modInv(v, 23n)) % 23n).toBe(1n);
    expect(() => modInv(0n, 23n)).toThrow(/invertible/);
  });
});

describe("elgamal at p=23", () => {
  it("decrypts the worked ciphertext (y1=10, y2=8, a=6) to 9", () => {
    expect(decryptChunk(SMALL, 6n, 10n, 8n)).toBe(9n);
  });

  it("decrypt is a left inverse of encrypt for all x, k", () => {
    const a = 6n;
    const beta = modPow(SMALL.alpha, a, SMALL.p);
    for (let x = 2n; x <= 21n; x++) {
      for (let k = 2n; k <= 20n; k++) {
        const y1 = modPow(SMALL.alpha, k, SMALL.p);
        const y2 = (x * modPow(beta, k, SMALL.p)) % SMALL.p;
        expect(decryptChunk(SMALL, a, y1, y2)).toBe(x);
      }
    }
  });
});

describe("signatures", () => {
  it("round-trips sign/verify at 256-bit group size", async () => {
    const a = randomBigIntBetween(2n, BIG.p - 2n);
    const beta = keypairFromPrivate(BIG, a);
    const digest = await sha256(new TextEncoder().encode("deed body"));
    const sig = sign(BIG, a, digest);
    expect(verify(BIG, beta, digest, sig)).toBe(true);
  });

  it("rejects a signature over a different digest", async () => {
    const a = randomBigIntBetween(2n, BIG.p - 2n);
    const beta = keypairFromPrivate(BIG, a);
    const sig = sign(BIG, a, await sha256(new TextEncoder().encode("one")));
    expect(verify(BIG, beta, await sha256(new TextEncoder().encode("two")), sig)).toBe(false);
  });

  it("rejects out-of-range signature components", async () => {
    const digest = await sha256(new Uint8Array(4));
    expect(verify(BIG, 2n, digest, { r: 0n, s: 1n })).toBe(false);
    expect(verify(BIG, 2n, digest, { r: 2n, s: BIG.p - 1n })).toBe(false);
  });

  it("reduces digests modulo p-1 big-endian", async () => {
    const digest = new Uint8Array(32);
    digest[31] = 7;
    expect(digestToInt(digest, BIG)).toBe(7n);
  });
});

describe("randomBigIntBetween", () => {
  it("stays inside the requested range", () => {
    for (let i = 0; i < 200; i++) {
      const v = randomBigIntBetween(10n, 17n);
      expect(v >= 10n && v <= 17n).toBe(true);
    }
  });
});
