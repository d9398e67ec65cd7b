import { describe, expect, it } from "vitest";

import {
  bitsToBytes,
  bitsToDna,
  decodeDigits,
  dnaToBits,
  encodeText,
  parseEnvelope,
} from "../src/codec.js";

describe("character codec", () => {
  it("matches the published code points", () => {
    expect(encodeText("0")).toBe("01");
    expect(encodeText("9")).toBe("10");
    expect(encodeText("A")).toBe("11");
    expect(encodeText("Z")).toBe("36");
    expect(encodeText("a")).toBe("37");
    expect(encodeText("z")).toBe("62");
    expect(encodeText(" ")).toBe("63");
    expect(encodeText("!")).toBe("64");
    expect(encodeText("|")).toBe("94");
  });

  it("round-trips every printable ASCII character", () => {
    let all = "";
    for (let c = 0x20; c < 0x7f; c++) all += String.fromCharCode(c);
    expect(decodeDigits(encodeText(all))).toBe(all);
    expect(encodeText(all)).toHaveLength(2 * all.length);
  });

  it("rejects unsupported characters and bad codes", () => {
    expect(() => encodeText("\t")).toThrow(/unsupported/);
    expect(() => decodeDigits("00")).toThrow(/invalid code/);
    expect(() => decodeDigits("123")).toThrow(/truncated/);
  });
});

describe("dna codec", () => {
  it("matches the golden bit mapping", () => {
    expect(bitsToDna("1000011001100100")).toBe("TGCTCTCG");
    expect(dnaToBits("TGCTCTCG")).toBe("1000011001100100");
  });

  it("round-trips random bit strings", () => {
    for (let trial = 0; trial < 50; trial++) {
      let bits = "";
      for (let i = 0; i < 64; i++) bits += Math.random() < 0.5 ? "1" : "0";
      expect(dnaToBits(bitsToDna(bits))).toBe(bits);
    }
  });

  it("rejects non-ACGT input", () => {
    expect(() => dnaToBits("ACGU")).toThrow(/invalid base/);
  });
});

describe("envelope parsing", () => {
  it("rejects a wrong magic", () => {
    const bytes = bitsToBytes("0".repeat(21 * 8));
    expect(() => parseEnvelope(bytes)).toThrow(/magic/);
  });
});
