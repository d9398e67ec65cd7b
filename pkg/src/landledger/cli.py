"""Operator CLI: keys, certificates, record codecs, chain inspection,
service launch, the C2I benchmark, and the scripted end-to-end trade.

Exit codes: 0 ok, 2 usage, 3 api error, 4 verification failure.
"""

from __future__ import annotations

import hashlib
import json
import random
import secrets
import string
import sys
import time
from pathlib import Path

import click
import httpx

from . import c2i, elgamal, keyfiles, ledger, pipeline
from .errors import LandLedgerError

EXIT_API_ERROR = 3
EXIT_VERIFY_FAILURE = 4


def _emit(ctx: click.Context, text_lines: list[str], payload: dict) -> None:
    if ctx.obj.get("json"):
        click.echo(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            click.echo(line)


def _fail(code: str, message: str, exit_code: int = EXIT_API_ERROR) -> None:
    click.echo(f"error [{code}]: {message}", err=True)
    sys.exit(exit_code)


def _api(resp: httpx.Response) -> dict:
    if resp.status_code >= 400:
        try:
            body = resp.json()
            _fail(body.get("code", "http-error"), body.get("message", resp.text))
        except ValueError:
            _fail("http-error", f"{resp.status_code}: {resp.text}")
    return resp.json()


@click.group()
@click.option("--json", "json_output", is_flag=True, help="structured output")
@click.pass_context
def main(ctx, json_output):
    ctx.ensure_object(dict)
    ctx.obj["json"] = json_output


@main.command()
@click.option("--bits", default=elgamal.DEFAULT_KEY_BITS, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--pub-out", type=click.Path(dir_okay=False), default=None)
@click.option("--role", default="owner", show_default=True)
@click.pass_context
def keygen(ctx, bits, out, pub_out, role):
    """Generate domain parameters and an ElGamal keypair into a key file."""
    try:
        params = elgamal.generate_domain_params(bits)
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)
    pair = elgamal.keygen(params)
    keyfiles.write_key_file(out, pair, role=role)
    if pub_out:
        keyfiles.write_key_file(pub_out, pair, role=role, include_private=False)
    _emit(ctx, [f"wrote {bits}-bit key to {out}"], {"out": out, "bits": bits})


# --- cert ------------------------------------------------------------------

@main.group()
def cert():
    """Certificate operations against a running service."""


@cert.command("issue")
@click.option("--url", required=True)
@click.option("--key", "key_path", required=True, type=click.Path(exists=True))
@click.option("--subject", required=True)
@click.option("--days", default=365, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def cert_issue(ctx, url, key_path, subject, days, out):
    _params, _a, beta, _role = keyfiles.read_key_file(key_path)
    body = {"subject_id": subject, "beta": str(beta), "validity_days": days}
    data = _api(httpx.post(f"{url}/ca/certificates", json=body))
    if out:
        Path(out).write_text(json.dumps(data, indent=2))
    _emit(ctx, [f"issued certificate serial {data['serial']} for {subject}"], data)


@cert.command("show")
@click.option("--url", required=True)
@click.option("--serial", required=True, type=int)
@click.pass_context
def cert_show(ctx, url, serial):
    data = _api(httpx.get(f"{url}/ca/certificates/{serial}"))
    lines = [f"{k}: {v}" for k, v in data.items()]
    _emit(ctx, lines, data)


@cert.command("verify")
@click.option("--url", required=True)
@click.option("--serial", required=True, type=int)
@click.pass_context
def cert_verify(ctx, url, serial):
    from . import certs as certs_mod

    info = _api(httpx.get(f"{url}/ca/params"))
    data = _api(httpx.get(f"{url}/ca/certificates/{serial}"))
    params = elgamal.DomainParams(p=int(info["p"]), alpha=int(info["alpha"]))
    cert_obj = certs_mod.Certificate(
        serial=data["serial"],
        subject_id=data["subject_id"],
        subject_params=elgamal.DomainParams(p=int(data["p"]), alpha=int(data["alpha"])),
        subject_beta=int(data["beta"]),
        issuer_id=data["issuer_id"],
        issued_at=data["issued_at"],
        expires_at=data["expires_at"],
        ca_signature=elgamal.Signature(
            r=int(data["ca_signature"]["r"]), s=int(data["ca_signature"]["s"])
        ),
    )
    ok = certs_mod.verify_certificate(params, int(info["ca_beta"]), cert_obj)
    _emit(ctx, [f"certificate {serial}: {'valid' if ok else 'INVALID'}"], {"serial": serial, "valid": ok})
    if not ok:
        sys.exit(EXIT_VERIFY_FAILURE)


# --- record ------------------------------------------------------------------

def _read_input(in_path: str | None, text: str | None) -> str:
    if text is not None:
        return text
    if in_path:
        return Path(in_path).read_text()
    return sys.stdin.read()


def _write_output(out_path: str | None, data: str) -> None:
    if out_path:
        Path(out_path).write_text(data)
    else:
        click.echo(data)


@main.group()
def record():
    """Encode, decode, encrypt, and decrypt land-record text."""


@record.command("encode")
@click.option("--in", "in_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.argument("text", required=False)
def record_encode(in_path, out_path, text):
    try:
        _write_output(out_path, c2i.encode_text(_read_input(in_path, text)))
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)


@record.command("decode")
@click.option("--in", "in_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.argument("digits", required=False)
def record_decode(in_path, out_path, digits):
    try:
        _write_output(out_path, c2i.decode_digits(_read_input(in_path, digits).strip()))
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)


@record.command("encrypt")
@click.option("--key", "key_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--chunk-digits", default=pipeline.DEFAULT_CHUNK_DIGITS, show_default=True)
@click.argument("text", required=False)
def record_encrypt(key_path, in_path, out_path, chunk_digits, text):
    params, _a, beta, _role = keyfiles.read_key_file(key_path)
    try:
        ct = pipeline.encrypt_record(params, beta, _read_input(in_path, text), chunk_digits)
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)
    _write_output(out_path, ct.dna)


@record.command("decrypt")
@click.option("--key", "key_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.argument("dna_text", required=False)
def record_decrypt(key_path, in_path, out_path, dna_text):
    params, private_a, _beta, _role = keyfiles.read_key_file(key_path)
    if private_a is None:
        _fail("invalid-parameter", "key file holds no private key")
    ct_text = _read_input(in_path, dna_text).strip()
    try:
        ct = pipeline.DnaCiphertext(dna=ct_text, key_fingerprint=bytes(32))
        _write_output(out_path, pipeline.decrypt_record(params, private_a, ct))
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)


# --- chain ------------------------------------------------------------------

@main.group()
def chain():
    """Local chain-file operations."""


@chain.command("init")
@click.option("--data-dir", required=True, type=click.Path(file_okay=False))
@click.pass_context
def chain_init(ctx, data_dir):
    try:
        c = ledger.Chain.create(data_dir)
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)
    _emit(ctx, [f"initialized chain with genesis block at {data_dir}"],
          {"data_dir": data_dir, "tip": c.tip.header.block_id})


@chain.command("verify")
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.pass_context
def chain_verify(ctx, data_dir):
    violation = ledger.verify_chain_dir(data_dir)
    if violation is None:
        _emit(ctx, ["chain ok"], {"ok": True})
        return
    _emit(ctx, [f"chain VIOLATION at block {violation.position}: {violation.reason}"],
          {"ok": False, "position": violation.position, "reason": violation.reason})
    sys.exit(EXIT_VERIFY_FAILURE)


@chain.command("show")
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--block", "block_id", type=int, default=None)
@click.option("--tip", "show_tip", is_flag=True)
@click.pass_context
def chain_show(ctx, data_dir, block_id, show_tip):
    from .service import block_json

    try:
        c = ledger.Chain.load(data_dir)
        block = c.tip if show_tip or block_id is None else c.get_block(block_id)
    except LandLedgerError as exc:
        _fail(exc.code, exc.message)
    data = block_json(block)
    lines = [
        f"block {data['block_id']}  hash {data['hash']}",
        f"  prev {data['prev_hash']}",
        f"  merkle {data['merkle_root']}  txs {data['tx_count']}  ts {data['timestamp']}",
    ] + [f"  tx {t['kind']} owner={t['owner_id']!r} payload[{len(t['dna_payload'])}]"
         for t in data["transactions"]]
    _emit(ctx, lines, data)


# --- serve ------------------------------------------------------------------

@main.command()
@click.option("--port", default=8080, show_default=True, envvar="LANDLEDGER_PORT")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="LANDLEDGER_HOST")
@click.option("--data-dir", required=True, envvar="LANDLEDGER_DATA_DIR",
              type=click.Path(file_okay=False))
@click.option("--key-bits", default=elgamal.DEFAULT_KEY_BITS, show_default=True,
              envvar="LANDLEDGER_KEY_BITS")
@click.option("--chunk-digits", default=pipeline.DEFAULT_CHUNK_DIGITS, show_default=True,
              envvar="LANDLEDGER_CHUNK_DIGITS")
@click.option("--bank-id", default="Bn", show_default=True, envvar="LANDLEDGER_BANK_ID")
def serve(port, host, data_dir, key_bits, chunk_digits, bank_id):
    """Launch the HTTP service (refuses to start on a corrupt chain)."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        data_dir=Path(data_dir), key_bits=key_bits, chunk_digits=chunk_digits, bank_id=bank_id
    )
    try:
        app = create_app(config)
    except LandLedgerError as exc:
        _fail(exc.code, exc.message, EXIT_VERIFY_FAILURE)
    uvicorn.run(app, host=host, port=port, log_level="warning")


# --- bench ------------------------------------------------------------------

@main.group()
def bench():
    """Micro-benchmarks."""


@bench.command("c2i")
@click.option("--size", default=1024, show_default=True, help="input size in characters")
@click.pass_context
def bench_c2i(ctx, size):
    """Compare C2I digit counts against 3-digit ASCII-decimal encoding."""
    rng = random.Random(20260823)
    text = "".join(rng.choice(sorted(c2i.FORWARD)) for _ in range(size))
    c2i_digits = len(c2i.encode_text(text))
    ascii_digits = 3 * len(text)
    reduction = 100.0 * (ascii_digits - c2i_digits) / ascii_digits
    _emit(
        ctx,
        [
            f"input characters:     {size}",
            f"C2I digits:           {c2i_digits}",
            f"ASCII-decimal digits: {ascii_digits}",
            f"reduction:            {reduction:.2f}%",
        ],
        {
            "characters": size,
            "c2i_digits": c2i_digits,
            "ascii_digits": ascii_digits,
            "reduction_percent": round(reduction, 2),
        },
    )


# --- scenario ------------------------------------------------------------------

def _login(client: httpx.Client, subject: str, serial: int,
           params: elgamal.DomainParams, private_a: int) -> str:
    ch = _api(client.post("/auth/challenges", json={"subject_id": subject}))
    digest = hashlib.sha256(bytes.fromhex(ch["nonce"])).digest()
    sig = elgamal.sign(params, private_a, digest)
    session = _api(client.post("/auth/sessions", json={
        "challenge_id": ch["challenge_id"],
        "cert_serial": serial,
        "signature": {"r": str(sig.r), "s": str(sig.s)},
    }))
    return session["token"]


@main.group()
def scenario():
    """Scripted multi-party workflows against a running service."""


@scenario.command("full-trade")
@click.option("--url", required=True)
@click.pass_context
def scenario_full_trade(ctx, url):
    """Run the whole trade: certificates, listing, deed, three signatures, transfer."""
    client = httpx.Client(base_url=url, timeout=120)
    info = _api(client.get("/ca/params"))
    params = elgamal.DomainParams(p=int(info["p"]), alpha=int(info["alpha"]))
    bank_id = info["bank_id"]
    suffix = "".join(secrets.choice(string.ascii_uppercase) for _ in range(6))
    seller_id, buyer_id = f"Mr. X {suffix}", f"Mr. Y {suffix}"
    click.echo(f"[1] issuing certificates for {seller_id!r}, {buyer_id!r}, and the bank")
    keys, serials = {}, {}
    for subject in (seller_id, buyer_id, bank_id):
        pair = elgamal.keygen(params)
        keys[subject] = pair
        data = _api(client.post("/ca/certificates", json={
            "subject_id": subject, "beta": str(pair.public_beta), "validity_days": 30,
        }))
        serials[subject] = data["serial"]

    # fresh parcel so repeated runs never collide
    dag = secrets.randbelow(10_000_000) + 10_000
    khatiayan = secrets.randbelow(10_000_000) + 10_000
    click.echo(f"[2] registering parcel dag={dag} khatiayan={khatiayan} to {seller_id!r}")
    reg = _api(client.post("/lrd/records", json={
        "cert_serial": serials[seller_id],
        "dag_number": dag, "khatiayan_number": khatiayan,
        "area": "2000", "unit": "Shotangsho",
        "seller_name": seller_id, "buyer_name": seller_id,
        "tx_label": "BN" + suffix,
    }))
    click.echo(f"    stored in block {reg['block_id']}")

    click.echo("[3] seller logs in and retrieves the record")
    seller_token = _login(client, seller_id, serials[seller_id], params, keys[seller_id].private_a)
    rec = _api(client.get("/lrd/records", params={"owner": seller_id},
                          headers={"Authorization": f"Bearer {seller_token}"}))
    ct = pipeline.DnaCiphertext(dna=rec["dna"], key_fingerprint=bytes.fromhex(rec["key_fingerprint"]))
    plaintext = pipeline.decrypt_record(params, keys[seller_id].private_a, ct)
    click.echo(f"    decrypted locally: {plaintext[:60]}...")

    click.echo("[4] seller posts the listing on the advertising agency")
    listing = _api(client.post("/listings", json={
        "cert_serial": serials[seller_id],
        "dag_number": dag, "khatiayan_number": khatiayan,
        "area": "2000", "unit": "Shotangsho", "asking_price": "500000",
    }, headers={"Authorization": f"Bearer {seller_token}"}))

    click.echo("[5] buyer logs in and finds the listing")
    buyer_token = _login(client, buyer_id, serials[buyer_id], params, keys[buyer_id].private_a)
    found = _api(client.get("/listings", params={"dag": dag, "status": "OPEN"}))
    assert any(l["listing_id"] == listing["listing_id"] for l in found)

    click.echo("[6] advertising agency creates the deed")
    deed = _api(client.post("/deeds", json={
        "listing_id": listing["listing_id"], "agreed_price": "480000",
    }, headers={"Authorization": f"Bearer {buyer_token}"}))
    digest = bytes.fromhex(deed["digest"])

    click.echo("[7] seller, buyer, then bank sign the deed")
    for role, subject in (("seller", seller_id), ("buyer", buyer_id), ("bank", bank_id)):
        sig = elgamal.sign(params, keys[subject].private_a, digest)
        deed = _api(client.post(f"/deeds/{deed['deed_id']}/signatures", json={
            "role": role, "cert_serial": serials[subject],
            "signature": {"r": str(sig.r), "s": str(sig.s)},
        }))
        click.echo(f"    {role} signed, deed state {deed['state']}")

    click.echo("[8] deed goes to the registration department for settlement")
    settled = _api(client.post(f"/deeds/{deed['deed_id']}/settle"))
    click.echo(f"    TRANSFER block appended: {settled['block_id']}")

    click.echo("[9] verifying the outcome")
    rec = _api(client.get("/lrd/records", params={"owner": buyer_id},
                          headers={"Authorization": f"Bearer {buyer_token}"}))
    ct = pipeline.DnaCiphertext(dna=rec["dna"], key_fingerprint=bytes.fromhex(rec["key_fingerprint"]))
    plaintext = pipeline.decrypt_record(params, keys[buyer_id].private_a, ct)
    seller_gone = client.get("/lrd/records", params={"owner": seller_id},
                             headers={"Authorization": f"Bearer {seller_token}"})
    verify = _api(client.get("/chain/verify"))
    if seller_gone.status_code != 404 or not verify["ok"]:
        _fail("verification-failure", "post-trade state is inconsistent", EXIT_VERIFY_FAILURE)
    click.echo(f"    chain verifies; seller retrieval now returns {seller_gone.json()['code']}")
    click.echo(f"    new owner: {buyer_id}")
    click.echo(f"    record: {plaintext}")
    _emit(ctx, ["full trade completed"], {
        "new_owner": buyer_id, "block_id": settled["block_id"], "record": plaintext,
    })


if __name__ == "__main__":
    main()
