"""Permissioned land-record ledger with ElGamal-encrypted, DNA-encoded records."""

__version__ = "0.1.0"
