// The four screens: login, marketplace, deed room, chain explorer.
// Rendering is deliberately dumb — every mutation round-trips to the server
// and the screen is rebuilt from the refetched state, so what the operator
// sees is always the server's view of the world.

import { ApiClient, ApiRequestError, BlockJson, DeedJson, ListingJson, SystemParams } from "./api.js";
import { decryptRecord } from "./codec.js";
import { hexToBytes } from "./crypto.js";
import { Identity } from "./identity.js";

type Screen = "login" | "marketplace" | "deed" | "explorer";

const DEED_STATES = ["DRAFT", "PARTIALLY_SIGNED", "PARTIES_SIGNED", "BANK_SIGNED", "REGISTERED"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  node.append(...children);
  return node;
}

export class App {
  api: ApiClient;
  params: SystemParams | null = null;
  identity: Identity | null = null;
  screen: Screen = "login";
  listings: ListingJson[] = [];
  filters: Record<string, string> = {};
  deed: DeedJson | null = null;
  block: BlockJson | null = null;
  lastError = "";
  notice = "";
  decrypted = "";

  constructor(
    private root: HTMLElement,
    api: ApiClient,
  ) {
    this.api = api;
  }

  async start(): Promise<void> {
    this.params = await this.api.systemParams();
    this.render();
  }

  private async guard<T>(op: () => Promise<T>): Promise<T | null> {
    this.lastError = "";
    try {
      return await op();
    } catch (err) {
      this.lastError = err instanceof ApiRequestError ? `${err.body.code}: ${err.body.message}` : String(err);
      return null;
    } finally {
      this.render();
    }
  }

  // --- actions (each refetches before rendering) ----------------------------

  async loginAs(subjectId: string, privateKey?: string): Promise<void> {
    await this.guard(async () => {
      if (!this.params) throw new Error("system params not loaded");
      const domain = { p: BigInt(this.params.p), alpha: BigInt(this.params.alpha) };
      const identity = privateKey
        ? Identity.fromPrivate(subjectId, domain, BigInt(privateKey))
        : Identity.generate(subjectId, domain);
      await identity.enroll(this.api);
      await identity.login(this.api);
      this.identity = identity;
      this.notice = `Signed in as ${subjectId} (cert #${identity.cert!.serial})`;
      this.screen = "marketplace";
      await this.refreshListings();
    });
  }

  async refreshListings(): Promise<void> {
    this.listings = await this.api.searchListings(this.filters);
  }

  async applyFilters(filters: Record<string, string>): Promise<void> {
    this.filters = Object.fromEntries(Object.entries(filters).filter(([, v]) => v !== ""));
    await this.guard(() => this.refreshListings());
  }

  async postListing(dag: number, khatiayan: number, area: string, price: string): Promise<void> {
    await this.guard(async () => {
      const me = this.requireIdentity();
      await this.api.postListing(me.token, {
        cert_serial: me.cert!.serial,
        dag_number: dag,
        khatiayan_number: khatiayan,
        area,
        asking_price: price,
      });
      this.notice = "Listing posted";
      await this.refreshListings();
    });
  }

  async withdrawListing(listingId: string): Promise<void> {
    await this.guard(async () => {
      await this.api.withdrawListing(this.requireIdentity().token, listingId);
      this.notice = "Listing withdrawn";
      await this.refreshListings();
    });
  }

  async createDeed(listingId: string, agreedPrice: string): Promise<void> {
    await this.guard(async () => {
      this.deed = await this.api.createDeed(this.requireIdentity().token, listingId, agreedPrice);
      this.notice = `Deed ${this.deed.deed_id} opened`;
      this.screen = "deed";
    });
  }

  async openDeed(deedId: string): Promise<void> {
    await this.guard(async () => {
      this.deed = await this.api.getDeed(deedId);
      this.screen = "deed";
    });
  }

  /** Sign the current deed in the given role with the local key. */
  async signDeed(role: "seller" | "buyer" | "bank"): Promise<void> {
    await this.guard(async () => {
      const me = this.requireIdentity();
      const deed = this.requireDeed();
      const sig = await me.signDigest(hexToBytes(deed.digest));
      this.deed = await this.api.signDeed(deed.deed_id, role, me.cert!.serial, sig);
      this.notice = `Signed as ${role}`;
    });
  }

  async settleDeed(): Promise<void> {
    await this.guard(async () => {
      const deed = this.requireDeed();
      const { block_id } = await this.api.settleDeed(deed.deed_id);
      this.deed = await this.api.getDeed(deed.deed_id);
      this.notice = `Registered in block ${block_id}`;
    });
  }

  async abandonDeed(): Promise<void> {
    await this.guard(async () => {
      const deed = this.requireDeed();
      this.deed = await this.api.abandonDeed(this.requireIdentity().token, deed.deed_id);
      this.notice = "Deed abandoned; listing reopened";
    });
  }

  async loadBlock(blockId: number): Promise<void> {
    await this.guard(async () => {
      this.block = await this.api.getBlock(blockId);
      this.decrypted = "";
      this.screen = "explorer";
    });
  }

  async loadTip(): Promise<void> {
    await this.guard(async () => {
      const tip = await this.api.chainTip();
      this.block = await this.api.getBlock(tip.block_id);
      this.decrypted = "";
      this.screen = "explorer";
    });
  }

  /** Decrypt a displayed DNA payload entirely client-side. */
  decryptLocally(privateKey: string, dna: string): void {
    this.lastError = "";
    try {
      if (!this.params) throw new Error("system params not loaded");
      const domain = { p: BigInt(this.params.p), alpha: BigInt(this.params.alpha) };
      this.decrypted = decryptRecord(domain, BigInt(privateKey), dna);
    } catch (err) {
      this.decrypted = "";
      this.lastError = String(err);
    }
    this.render();
  }

  goTo(screen: Screen): void {
    this.screen = screen;
    this.render();
  }

  private requireIdentity(): Identity {
    if (!this.identity) throw new Error("sign in first");
    return this.identity;
  }

  private requireDeed(): DeedJson {
    if (!this.deed) throw new Error("no deed open");
    return this.deed;
  }

  // --- rendering -------------------------------------------------------------

  render(): void {
    this.root.replaceChildren(
      this.renderNav(),
      this.lastError ? el("p", { class: "error", id: "error-banner" }, this.lastError) : "",
      this.notice ? el("p", { class: "notice", id: "notice-banner" }, this.notice) : "",
      this.renderScreen(),
    );
  }

  private renderNav(): HTMLElement {
    const who = this.identity ? `${this.identity.subjectId}` : "not signed in";
    const nav = el("nav", {});
    for (const s of ["login", "marketplace", "deed", "explorer"] as Screen[]) {
      const btn = el("button", { "data-nav": s }, s);
      btn.addEventListener("click", () => this.goTo(s));
      if (s === this.screen) btn.classList.add("active");
      nav.append(btn);
    }
    nav.append(el("span", { id: "whoami" }, who));
    return nav;
  }

  private renderScreen(): HTMLElement {
    switch (this.screen) {
      case "login":
        return this.renderLogin();
      case "marketplace":
        return this.renderMarketplace();
      case "deed":
        return this.renderDeedRoom();
      case "explorer":
        return this.renderExplorer();
    }
  }

  private renderLogin(): HTMLElement {
    const name = el("input", { id: "login-name", placeholder: "subject id" });
    const key = el("input", { id: "login-key", placeholder: "private key (blank = generate)" });
    const go = el("button", { id: "login-submit" }, "Sign in");
    go.addEventListener("click", () => void this.loginAs(name.value, key.value || undefined));
    return el("section", { id: "screen-login" }, el("h2", {}, "Login"), name, key, go);
  }

  private renderMarketplace(): HTMLElement {
    const section = el("section", { id: "screen-marketplace" }, el("h2", {}, "Marketplace"));

    const dag = el("input", { id: "filter-dag", placeholder: "dag" });
    const khatiayan = el("input", { id: "filter-khatiayan", placeholder: "khatiayan" });
    const apply = el("button", { id: "filter-apply" }, "Filter");
    apply.addEventListener("click", () =>
      void this.applyFilters({ dag: dag.value, khatiayan: khatiayan.value }),
    );
    section.append(el("div", { class: "filters" }, dag, khatiayan, apply));

    const grid = el("table", { id: "listing-grid" });
    grid.append(
      el("tr", {}, ...["listing", "seller", "dag", "khatiayan", "area", "price", "status", ""].map((h) => el("th", {}, h))),
    );
    for (const l of this.listings) {
      const actions = el("td", {});
      if (l.status === "OPEN" && this.identity && this.identity.subjectId !== l.seller_id) {
        const price = el("input", { class: "offer", placeholder: "offer", value: l.asking_price });
        const buy = el("button", { "data-buy": l.listing_id }, "Open deed");
        buy.addEventListener("click", () => void this.createDeed(l.listing_id, price.value));
        actions.append(price, buy);
      }
      if (l.status === "OPEN" && this.identity?.subjectId === l.seller_id) {
        const withdraw = el("button", { "data-withdraw": l.listing_id }, "Withdraw");
        withdraw.addEventListener("click", () => void this.withdrawListing(l.listing_id));
        actions.append(withdraw);
      }
      grid.append(
        el(
          "tr",
          { "data-listing": l.listing_id },
          el("td", {}, l.listing_id),
          el("td", {}, l.seller_id),
          el("td", {}, String(l.dag_number)),
          el("td", {}, String(l.khatiayan_number)),
          el("td", {}, `${l.area} ${l.unit}`),
          el("td", {}, `${l.asking_price} ${l.currency}`),
          el("td", { class: "status" }, l.status),
          actions,
        ),
      );
    }
    section.append(grid);

    const pDag = el("input", { id: "post-dag", placeholder: "dag" });
    const pKh = el("input", { id: "post-khatiayan", placeholder: "khatiayan" });
    const pArea = el("input", { id: "post-area", placeholder: "area" });
    const pPrice = el("input", { id: "post-price", placeholder: "asking price" });
    const post = el("button", { id: "post-submit" }, "Post listing");
    post.addEventListener("click", () =>
      void this.postListing(Number(pDag.value), Number(pKh.value), pArea.value, pPrice.value),
    );
    section.append(el("h3", {}, "Sell your land"), pDag, pKh, pArea, pPrice, post);
    return section;
  }

  private renderDeedRoom(): HTMLElement {
    const section = el("section", { id: "screen-deed" }, el("h2", {}, "Deed room"));
    const lookup = el("input", { id: "deed-lookup", placeholder: "deed id" });
    const open = el("button", { id: "deed-open" }, "Open");
    open.addEventListener("click", () => void this.openDeed(lookup.value));
    section.append(lookup, open);
    const d = this.deed;
    if (!d) {
      section.append(el("p", {}, "No deed open."));
      return section;
    }

    const badge = el("span", { id: "deed-state-badge", class: `badge state-${d.state}` }, d.state);
    const trail = el(
      "p",
      { id: "deed-state-trail" },
      DEED_STATES.map((s) => (s === d.state ? `[${s}]` : s)).join(" → "),
    );
    section.append(
      el("h3", {}, `Deed ${d.deed_id} `, badge),
      trail,
      el(
        "dl",
        {},
        el("dt", {}, "Parties"),
        el("dd", { id: "deed-parties" }, `${d.seller_id} → ${d.buyer_id}`),
        el("dt", {}, "Land"),
        el("dd", {}, `dag ${d.dag_number}, khatiayan ${d.khatiayan_number}, ${d.area} ${d.unit}`),
        el("dt", {}, "Price"),
        el("dd", {}, d.price),
        el("dt", {}, "Transaction"),
        el("dd", { id: "deed-txid" }, d.transaction_id),
        el("dt", {}, "Signed"),
        el("dd", { id: "deed-signed" }, d.signed_roles.join(", ") || "nobody yet"),
      ),
    );

    const me = this.identity?.subjectId;
    const canSign = ["DRAFT", "PARTIALLY_SIGNED", "PARTIES_SIGNED"].includes(d.state);
    for (const role of ["seller", "buyer", "bank"] as const) {
      const expected = role === "seller" ? d.seller_id : role === "buyer" ? d.buyer_id : this.params?.bank_id;
      const btn = el("button", { "data-sign": role }, `Sign as ${role}`);
      const bankGate = role === "bank" && d.state !== "PARTIES_SIGNED";
      const partyGate = role !== "bank" && (!canSign || d.state === "PARTIES_SIGNED");
      if (me !== expected || d.signed_roles.includes(role) || bankGate || partyGate) {
        btn.setAttribute("disabled", "disabled");
      }
      btn.addEventListener("click", () => void this.signDeed(role));
      section.append(btn);
    }

    const settle = el("button", { id: "deed-settle" }, "Settle & register");
    if (d.state !== "BANK_SIGNED") settle.setAttribute("disabled", "disabled");
    settle.addEventListener("click", () => void this.settleDeed());
    const abandon = el("button", { id: "deed-abandon" }, "Abandon");
    if (!["DRAFT", "PARTIALLY_SIGNED", "PARTIES_SIGNED"].includes(d.state)) {
      abandon.setAttribute("disabled", "disabled");
    }
    abandon.addEventListener("click", () => void this.abandonDeed());
    section.append(settle, abandon);

    if (d.state === "REGISTERED") {
      const link = el("button", { id: "deed-block-link" }, "View registration block");
      link.addEventListener("click", () => void this.loadTip());
      section.append(link);
    }
    return section;
  }

  private renderExplorer(): HTMLElement {
    const section = el("section", { id: "screen-explorer" }, el("h2", {}, "Chain explorer"));
    const idInput = el("input", { id: "explorer-block-id", placeholder: "block id" });
    const load = el("button", { id: "explorer-load" }, "Load");
    load.addEventListener("click", () => void this.loadBlock(Number(idInput.value)));
    const tip = el("button", { id: "explorer-tip" }, "Tip");
    tip.addEventListener("click", () => void this.loadTip());
    section.append(idInput, load, tip);

    const b = this.block;
    if (!b) {
      section.append(el("p", {}, "No block loaded."));
      return section;
    }
    section.append(
      el("h3", { id: "block-title" }, `Block ${b.block_id}`),
      el(
        "dl",
        {},
        el("dt", {}, "Hash"),
        el("dd", { id: "block-hash" }, b.hash),
        el("dt", {}, "Previous"),
        el("dd", {}, b.prev_hash),
        el("dt", {}, "Merkle root"),
        el("dd", {}, b.merkle_root),
        el("dt", {}, "Timestamp"),
        el("dd", {}, String(b.timestamp)),
      ),
    );
    for (const tx of b.transactions) {
      section.append(
        el(
          "div",
          { class: "tx", "data-tx": tx.tx_id },
          el("p", {}, `${tx.kind} — owner ${tx.owner_id}`),
          el("pre", { class: "dna" }, tx.dna_payload || "(none)"),
        ),
      );
    }

    const key = el("input", { id: "decrypt-key", placeholder: "private key (stays local)" });
    const which = el("input", { id: "decrypt-tx-index", placeholder: "tx index", value: "0" });
    const run = el("button", { id: "decrypt-run" }, "Decrypt locally");
    run.addEventListener("click", () => {
      const tx = b.transactions[Number(which.value)];
      this.decryptLocally(key.value, tx ? tx.dna_payload : "");
    });
    section.append(
      el("h3", {}, "Decrypt locally"),
      key,
      which,
      run,
      el("pre", { id: "decrypt-output" }, this.decrypted),
    );
    return section;
  }
}
