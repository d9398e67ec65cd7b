// Typed client for the land-ledger HTTP service. Every request goes through
// one wrapper that keeps a transcript of outgoing bodies, so tests (and the
// privacy-conscious) can assert that no private key ever crosses the wire.

export interface ApiError {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export interface SystemParams {
  p: string;
  alpha: string;
  key_bits: number;
  chunk_digits: number;
  bank_id: string;
  ca_id: string;
  ca_beta: string;
}

export interface CertificateJson {
  serial: number;
  subject_id: string;
  p: string;
  alpha: string;
  beta: string;
  issuer_id: string;
  issued_at: number;
  expires_at: number;
  ca_signature: { r: string; s: string };
}

export interface ChallengeJson {
  challenge_id: string;
  nonce: string;
  subject_id: string;
  expires_at: number;
}

export interface SessionJson {
  token: string;
  subject_id: string;
  expires_at: number;
}

export interface RecordJson {
  owner_id: string;
  dna: string;
  key_fingerprint: string;
  block_id: number;
}

export interface ListingJson {
  listing_id: string;
  seller_id: string;
  dag_number: number;
  khatiayan_number: number;
  area: string;
  unit: string;
  asking_price: string;
  currency: string;
  status: string;
  created_at: number;
}

export interface DeedJson {
  deed_id: string;
  listing_id: string;
  seller_id: string;
  buyer_id: string;
  dag_number: number;
  khatiayan_number: number;
  area: string;
  unit: string;
  price: string;
  transaction_id: string;
  created_at: number;
  state: string;
  digest: string;
  signed_roles: string[];
}

export interface TxJson {
  tx_id: string;
  kind: string;
  owner_id: string;
  dna_payload: string;
  key_fingerprint: string;
  deed_hash: string;
  created_at: number;
}

export interface BlockJson {
  block_id: number;
  prev_hash: string;
  tx_count: number;
  nonce: number;
  merkle_root: string;
  timestamp: number;
  hash: string;
  transactions: TxJson[];
}

export interface SentRequest {
  method: string;
  path: string;
  body: string | null;
}

export class ApiClient {
  /** Transcript of everything this client has sent; inspected by tests. */
  readonly sent: SentRequest[] = [];

  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown; token?: string; query?: Record<string, string> } = {},
  ): Promise<T> {
    let url = this.baseUrl + path;
    if (options.query && Object.keys(options.query).length > 0) {
      url += "?" + new URLSearchParams(options.query).toString();
    }
    const headers: Record<string, string> = {};
    if (options.token) headers["Authorization"] = `Bearer ${options.token}`;
    let body: string | null = null;
    if (options.body !== undefined) {
      body = JSON.stringify(options.body);
      headers["Content-Type"] = "application/json";
    }
    this.sent.push({ method, path, body });
    const res = await this.fetchImpl(url, { method, headers, body: body ?? undefined });
    const payload = await res.json();
    if (!res.ok) throw new ApiRequestError(res.status, payload as ApiError);
    return payload as T;
  }

  health(): Promise<{ status: string; tip: number }> {
    return this.request("GET", "/health");
  }

  systemParams(): Promise<SystemParams> {
    return this.request("GET", "/ca/params");
  }

  issueCertificate(subjectId: string, beta: bigint): Promise<CertificateJson> {
    return this.request("POST", "/ca/certificates", {
      body: { subject_id: subjectId, beta: beta.toString() },
    });
  }

  getCertificate(serial: number): Promise<CertificateJson> {
    return this.request("GET", `/ca/certificates/${serial}`);
  }

  issueChallenge(subjectId: string): Promise<ChallengeJson> {
    return this.request("POST", "/auth/challenges", { body: { subject_id: subjectId } });
  }

  createSession(
    challengeId: string,
    certSerial: number,
    sig: { r: bigint; s: bigint },
  ): Promise<SessionJson> {
    return this.request("POST", "/auth/sessions", {
      body: {
        challenge_id: challengeId,
        cert_serial: certSerial,
        signature: { r: sig.r.toString(), s: sig.s.toString() },
      },
    });
  }

  retrieveRecord(token: string, owner: string): Promise<RecordJson> {
    return this.request("GET", "/lrd/records", { token, query: { owner } });
  }

  registerRecord(body: {
    cert_serial: number;
    dag_number: number;
    khatiayan_number: number;
    area: string;
    unit?: string;
    seller_name: string;
    buyer_name: string;
    tx_label: string;
  }): Promise<{ block_id: number; owner_id: string }> {
    return this.request("POST", "/lrd/records", { body });
  }

  searchListings(query: Record<string, string> = {}): Promise<ListingJson[]> {
    return this.request("GET", "/listings", { query });
  }

  postListing(
    token: string,
    body: {
      cert_serial: number;
      dag_number: number;
      khatiayan_number: number;
      area: string;
      unit?: string;
      asking_price: string;
    },
  ): Promise<ListingJson> {
    return this.request("POST", "/listings", { token, body });
  }

  withdrawListing(token: string, listingId: string): Promise<ListingJson> {
    return this.request("POST", `/listings/${listingId}/withdraw`, { token });
  }

  createDeed(token: string, listingId: string, agreedPrice: string): Promise<DeedJson> {
    return this.request("POST", "/deeds", {
      token,
      body: { listing_id: listingId, agreed_price: agreedPrice },
    });
  }

  getDeed(deedId: string): Promise<DeedJson> {
    return this.request("GET", `/deeds/${deedId}`);
  }

  signDeed(
    deedId: string,
    role: "seller" | "buyer" | "bank",
    certSerial: number,
    sig: { r: bigint; s: bigint },
  ): Promise<DeedJson> {
    return this.request("POST", `/deeds/${deedId}/signatures`, {
      body: {
        role,
        cert_serial: certSerial,
        signature: { r: sig.r.toString(), s: sig.s.toString() },
      },
    });
  }

  abandonDeed(token: string, deedId: string): Promise<DeedJson> {
    return this.request("POST", `/deeds/${deedId}/abandon`, { token });
  }

  settleDeed(deedId: string): Promise<{ block_id: number; deed_id: string }> {
    return this.request("POST", `/deeds/${deedId}/settle`);
  }

  getBlock(blockId: number): Promise<BlockJson> {
    return this.request("GET", `/chain/blocks/${blockId}`);
  }

  chainTip(): Promise<{ block_id: number; hash: string }> {
    return this.request("GET", "/chain/tip");
  }

  chainVerify(): Promise<{ ok: boolean; position?: number; reason?: string }> {
    return this.request("GET", "/chain/verify");
  }
}
