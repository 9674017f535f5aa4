"""Small shared helpers: finite words over ``{0..m-1}``, the digit-string
format used on the CLI and in JSON files, and exact-rational lifting."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

Word = tuple[int, ...]


class Verdict(Enum):
    """Tri-state outcome of a finite-depth uniqueness test."""

    UNIQUE = "UNIQUE"
    NOT_UNIQUE = "NOT_UNIQUE"
    INDETERMINATE = "INDETERMINATE"


def word_to_code(word: Word, m: int) -> int:
    """Encode a word as an integer, first symbol most significant.

    Fixed-length lexicographic order coincides with numeric order of codes.
    """
    code = 0
    for s in word:
        if not 0 <= s < m:
            raise ValueError(f"symbol {s} outside alphabet of size {m}")
        code = code * m + s
    return code


def code_to_word(code: int, m: int, length: int) -> Word:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        code, out[i] = divmod(code, m)
    return tuple(out)


def format_word(word: Word, m: int) -> str:
    """Digit string for small alphabets, bracketed comma list beyond 9."""
    if m <= 10:
        return "".join(str(s) for s in word)
    return "[" + ",".join(str(s) for s in word) + "]"


def parse_word(text: str, m: int | None = None) -> Word:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unbalanced brackets in word {text!r}")
        body = text[1:-1].strip()
        word = tuple(int(t) for t in body.split(",")) if body else ()
    else:
        word = tuple(int(c) for c in text)
    if m is not None:
        for s in word:
            if not 0 <= s < m:
                raise ValueError(f"digit {s} outside alphabet of size {m}")
    return word


def parse_expansion(text: str) -> tuple[Word, Word]:
    """Parse ``"111(00001)"`` into preperiod and period words.

    The parenthesised period is optional; digits beyond 9 use the bracketed
    comma form, e.g. ``"[11,0]([3,2])"``.
    """
    text = text.strip()
    if "(" in text:
        head, _, tail = text.partition("(")
        if not tail.endswith(")"):
            raise ValueError(f"unbalanced parentheses in expansion {text!r}")
        return parse_word(head) if head else (), parse_word(tail[:-1])
    return parse_word(text), ()


def format_expansion(preperiod: Word, period: Word, m: int) -> str:
    head = format_word(preperiod, m)
    if period:
        return f"{head}({format_word(period, m)})"
    return head


def frac(x: float | int | Fraction) -> Fraction:
    """Exact rational value of a float (floats are dyadic rationals)."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)
