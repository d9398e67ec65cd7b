"""Human-inspectable key files: one "name: decimal" line per field.

A private file carries p, alpha, a, beta; a public file omits a.
"""

from __future__ import annotations

from pathlib import Path

from . import elgamal
from .errors import InvalidParameterError


def write_key_file(path: str | Path, keypair: elgamal.KeyPair, role: str = "owner",
                   include_private: bool = True) -> None:
    lines = [
        f"role: {role}",
        f"p: {keypair.params.p}",
        f"alpha: {keypair.params.alpha}",
    ]
    if include_private:
        lines.append(f"a: {keypair.private_a}")
    lines.append(f"beta: {keypair.public_beta}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_key_file(path: str | Path) -> tuple[elgamal.DomainParams, int | None, int, str]:
    """Returns (params, private_a or None, beta, role)."""
    fields: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise InvalidParameterError(f"malformed key file line: {line!r}")
        name, _, value = line.partition(":")
        fields[name.strip()] = value.strip()
    try:
        params = elgamal.DomainParams(p=int(fields["p"]), alpha=int(fields["alpha"]))
        beta = int(fields["beta"])
    except (KeyError, ValueError) as exc:
        raise InvalidParameterError(f"key file {path} is missing fields: {exc}") from exc
    private_a = int(fields["a"]) if "a" in fields else None
    return params, private_a, beta, fields.get("role", "owner")
