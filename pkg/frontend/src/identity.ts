// A local identity: keypair generated in the browser, certificate issued by
// the service CA, sessions opened via challenge-response. Only the public
// beta and signatures are ever handed to the ApiClient.

import { ApiClient, CertificateJson, SessionJson } from "./api.js";
import {
  DomainParams,
  ElGamalSignature,
  hexToBytes,
  keypairFromPrivate,
  modPow,
  randomBigIntBetween,
  sha256,
  sign,
} from "./crypto.js";

export class Identity {
  constructor(
    public readonly subjectId: string,
    public readonly params: DomainParams,
    public readonly privateA: bigint,
    public readonly beta: bigint,
    public cert: CertificateJson | null = null,
    public session: SessionJson | null = null,
  ) {}

  static generate(subjectId: string, params: DomainParams): Identity {
    const a = randomBigIntBetween(2n, params.p - 2n);
    return new Identity(subjectId, params, a, keypairFromPrivate(params, a));
  }

  /** Rebuild an identity from a known private key (fixtures, saved keys). */
  static fromPrivate(subjectId: string, params: DomainParams, privateA: bigint): Identity {
    return new Identity(subjectId, params, privateA, modPow(params.alpha, privateA, params.p));
  }

  async enroll(api: ApiClient): Promise<CertificateJson> {
    this.cert = await api.issueCertificate(this.subjectId, this.beta);
    return this.cert;
  }

  async signDigest(digest: Uint8Array): Promise<ElGamalSignature> {
    return sign(this.params, this.privateA, digest);
  }

  /** Challenge-response login; returns a bearer token for subsequent calls. */
  async login(api: ApiClient): Promise<string> {
    if (!this.cert) throw new Error(`${this.subjectId} has no certificate yet`);
    const challenge = await api.issueChallenge(this.subjectId);
    const digest = await sha256(hexToBytes(challenge.nonce));
    const sig = await this.signDigest(digest);
    this.session = await api.createSession(challenge.challenge_id, this.cert.serial, sig);
    return this.session.token;
  }

  get token(): string {
    if (!this.session || this.session.expires_at * 1000 < Date.now()) {
      throw new Error(`${this.subjectId} is not logged in`);
    }
    return this.session.token;
  }
}
