"""Character-to-integer codec: 95 printable ASCII characters, two decimal digits each.

Codes: digits '0'-'9' take 01-10, 'A'-'Z' 11-36, 'a'-'z' 37-62, space 63,
then the remaining punctuation through 95. Two cells of the published
mapping are blank; set-difference against printable ASCII pins them:
code 63 is the space (it appears at every inter-word position in the
worked traces) and code 94 is '|', the only printable character left.

Unmapped input is a hard error, never substituted: these are legal records.
"""

from __future__ import annotations

import string

from .errors import InvalidCodeError, TruncatedStreamError, UnsupportedCharacterError

# order 64..95; includes '|' at 94
_PUNCTUATION = "!\"#%&'()*+,-./:;<=>?@$^_[\\]`~{|}"

_ALPHABET = string.digits + string.ascii_uppercase + string.ascii_lowercase + " " + _PUNCTUATION

FORWARD: dict[str, str] = {c: f"{i + 1:02d}" for i, c in enumerate(_ALPHABET)}
REVERSE: dict[str, str] = {v: k for k, v in FORWARD.items()}

# build-time self-check: bijection over exactly the printable ASCII range
assert len(FORWARD) == len(REVERSE) == 95
assert set(FORWARD) == {chr(c) for c in range(0x20, 0x7F)}


def char_to_code(c: str) -> str:
    """Map one character to its zero-padded two-digit code ("01".."95")."""
    try:
        return FORWARD[c]
    except KeyError:
        raise UnsupportedCharacterError(
            f"character U+{ord(c):04X} is not in the 95-character table",
            codepoint=ord(c),
        ) from None


def code_to_char(code: str) -> str:
    """Inverse of char_to_code; accepts exactly "01".."95"."""
    if len(code) != 2 or not code.isdigit() or code not in REVERSE:
        raise InvalidCodeError(f"no character has code {code!r}", code=code)
    return REVERSE[code]


def encode_text(text: str) -> str:
    """Concatenate per-character codes; output length is exactly 2*len(text)."""
    out = []
    for i, c in enumerate(text):
        if c not in FORWARD:
            raise UnsupportedCharacterError(
                f"unsupported character U+{ord(c):04X} at position {i}",
                codepoint=ord(c),
                position=i,
            )
        out.append(FORWARD[c])
    return "".join(out)


def decode_digits(digits: str) -> str:
    """Inverse of encode_text; rejects odd-length streams and unknown codes."""
    if len(digits) % 2 != 0:
        raise TruncatedStreamError(f"digit stream has odd length {len(digits)}")
    out = []
    for i in range(0, len(digits), 2):
        pair = digits[i : i + 2]
        if pair not in REVERSE:
            raise InvalidCodeError(
                f"invalid code {pair!r} at pair index {i // 2}", code=pair, pair_index=i // 2
            )
        out.append(REVERSE[pair])
    return "".join(out)
