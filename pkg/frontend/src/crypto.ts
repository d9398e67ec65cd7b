// ElGamal over a shared safe-prime group, reimplemented on BigInt so
// signing and record decryption happen entirely in the browser. Private
// keys never leave this module except inside signature values.

export interface DomainParams {
  p: bigint;
  alpha: bigint;
}

export interface ElGamalSignature {
  r: bigint;
  s: bigint;
}

export function modPow(base: bigint, exponent: bigint, modulus: bigint): bigint {
  if (modulus <= 1n) throw new Error("modulus must be > 1");
  let acc = 1n;
  let b = ((base % modulus) + modulus) % modulus;
  let e = exponent;
  while (e > 0n) {
    if (e & 1n) acc = (acc * b) % modulus;
    b = (b * b) % modulus;
    e >>= 1n;
  }
  return acc;
}

export function modInv(value: bigint, modulus: bigint): bigint {
  let [r0, r1] = [modulus, ((value % modulus) + modulus) % modulus];
  let [x0, x1] = [0n, 1n];
  while (r1 !== 0n) {
    const q = r0 / r1;
    [r0, r1] = [r1, r0 - q * r1];
    [x0, x1] = [x1, x0 - q * x1];
  }
  if (r0 !== 1n) throw new Error("value is not invertible");
  return ((x0 % modulus) + modulus) % modulus;
}

function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) [a, b] = [b, a % b];
  return a;
}

export function bytesToBigInt(bytes: Uint8Array): bigint {
  let acc = 0n;
  for (const b of bytes) acc = (acc << 8n) | BigInt(b);
  return acc;
}

/** Uniform random BigInt in [min, max] from the platform CSPRNG. */
export function randomBigIntBetween(min: bigint, max: bigint): bigint {
  const span = max - min + 1n;
  const bits = span.toString(2).length;
  const bytes = Math.ceil(bits / 8);
  for (;;) {
    const buf = new Uint8Array(bytes);
    crypto.getRandomValues(buf);
    const candidate = bytesToBigInt(buf) >> BigInt(8 * bytes - bits);
    if (candidate < span) return min + candidate;
  }
}

export async function sha256(data: Uint8Array): Promise<Uint8Array> {
  const digest = await crypto.subtle.digest("SHA-256", data as BufferSource);
  return new Uint8Array(digest);
}

export function digestToInt(digest: Uint8Array, params: DomainParams): bigint {
  return bytesToBigInt(digest) % (params.p - 1n);
}

/** Classic ElGamal signature over a 32-byte digest; matches the server's scheme. */
export function sign(params: DomainParams, privateA: bigint, digest: Uint8Array): ElGamalSignature {
  if (digest.length !== 32) throw new Error("digest must be 32 bytes");
  const { p } = params;
  const h = digestToInt(digest, params);
  for (;;) {
    const k = randomBigIntBetween(2n, p - 2n);
    if (gcd(k, p - 1n) !== 1n) continue;
    const r = modPow(params.alpha, k, p);
    const s = (((modInv(k, p - 1n) * (h - privateA * r)) % (p - 1n)) + (p - 1n)) % (p - 1n);
    if (s !== 0n) return { r, s };
  }
}

export function verify(
  params: DomainParams,
  beta: bigint,
  digest: Uint8Array,
  sig: ElGamalSignature,
): boolean {
  const { p } = params;
  if (!(0n < sig.r && sig.r < p) || !(0n <= sig.s && sig.s < p - 1n)) return false;
  const h = digestToInt(digest, params);
  return modPow(params.alpha, h, p) === (modPow(beta, sig.r, p) * modPow(sig.r, sig.s, p)) % p;
}

export function decryptChunk(params: DomainParams, privateA: bigint, y1: bigint, y2: bigint): bigint {
  return (y2 * modInv(modPow(y1, privateA, params.p), params.p)) % params.p;
}

export function keypairFromPrivate(params: DomainParams, privateA: bigint): bigint {
  return modPow(params.alpha, privateA, params.p);
}

export function hexToBytes(hex: string): Uint8Array {
  const out = new Uint8Array(hex.length / 2);
  for (let i = 0; i < out.length; i++) out[i] = parseInt(hex.slice(2 * i, 2 * i + 2), 16);
  return out;
}
