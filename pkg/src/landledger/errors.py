"""Error hierarchy shared by all modules.

Every error carries a stable machine-readable ``code`` so the HTTP layer
and the CLI can map failures without string matching on messages.
"""

from __future__ import annotations


class LandLedgerError(Exception):
    """Base for all domain errors."""

    code = "error"

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.message = message
        self.detail = detail or None


# --- crypto ---------------------------------------------------------------

class InvalidParameterError(LandLedgerError):
    code = "invalid-parameter"


class MessageTooLargeError(LandLedgerError):
    code = "message-too-large"


class InvalidEphemeralError(LandLedgerError):
    code = "invalid-ephemeral"


class CorruptCiphertextError(LandLedgerError):
    code = "corrupt-ciphertext"


class NotInvertibleError(LandLedgerError):
    code = "not-invertible"


# --- codecs ---------------------------------------------------------------

class UnsupportedCharacterError(LandLedgerError):
    code = "unsupported-character"


class InvalidCodeError(LandLedgerError):
    code = "invalid-code"


class TruncatedStreamError(LandLedgerError):
    code = "truncated-stream"


class OddLengthBitstreamError(LandLedgerError):
    code = "odd-length-bitstream"


class InvalidBaseError(LandLedgerError):
    code = "invalid-base"


class RaggedBitstreamError(LandLedgerError):
    code = "ragged-bitstream"


# --- record pipeline ------------------------------------------------------

class InvalidChunkingError(LandLedgerError):
    code = "invalid-chunking"


class GuardDigitMissingError(LandLedgerError):
    code = "guard-digit-missing"


class EnvelopeFormatError(LandLedgerError):
    code = "envelope-format"


# --- ledger ---------------------------------------------------------------

class EmptyBlockError(LandLedgerError):
    code = "empty-block"


class BlockNotFoundError(LandLedgerError):
    code = "not-found"


class ChainCorruptError(LandLedgerError):
    code = "chain-corrupt"


# --- registry / trading ---------------------------------------------------

class InvalidCertificateError(LandLedgerError):
    code = "invalid-certificate"


class InvalidPublicKeyError(LandLedgerError):
    code = "invalid-public-key"


class DuplicateActiveRecordError(LandLedgerError):
    code = "duplicate-active-record"


class ExpiredChallengeError(LandLedgerError):
    code = "expired-challenge"


class ReplayedChallengeError(LandLedgerError):
    code = "replayed-challenge"


class BadSignatureError(LandLedgerError):
    code = "bad-signature"


class NoActiveRecordError(LandLedgerError):
    code = "no-active-record"


class UnauthorizedError(LandLedgerError):
    code = "unauthorized"


class NotOwnerError(LandLedgerError):
    code = "not-owner"


class SellerNotOwnerError(LandLedgerError):
    code = "seller-not-owner"


class DeedNotFinalizedError(LandLedgerError):
    code = "deed-not-finalized"


class SignatureInvalidError(LandLedgerError):
    code = "signature-invalid"


class ListingNotOpenError(LandLedgerError):
    code = "listing-not-open"


class SelfDealingError(LandLedgerError):
    code = "self-dealing"


class WrongPartyError(LandLedgerError):
    code = "wrong-party"


class PrematureBankSignatureError(LandLedgerError):
    code = "premature-bank-signature"


class AlreadySignedError(LandLedgerError):
    code = "already-signed"


class DeedNotFoundError(LandLedgerError):
    code = "deed-not-found"


class ListingNotFoundError(LandLedgerError):
    code = "listing-not-found"
