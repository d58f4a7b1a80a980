"""Exact rational arithmetic.

Every geometric computation in this package runs over arbitrary-precision
signed rationals, always in lowest terms with positive denominator. gmpy2's
mpq is used when available (markedly faster); fractions.Fraction otherwise.
Both expose .numerator/.denominator and exact arithmetic, so nothing above
this module cares which one is active.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rat

    RAT_IMPL = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat

    RAT_IMPL = "fractions"

ZERO = Rat(0)
ONE = Rat(1)


def rat(value) -> "Rat":
    """Coerce an int, string ("p/q" or "p"), or rational to a Rat."""
    if isinstance(value, str):
        return Rat(value.strip())
    return Rat(value)


def rat_str(value) -> str:
    """Canonical text form: "p/q", or just "p" when the denominator is 1."""
    q = Rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_point(text: str) -> tuple:
    """Parse a comma-separated tuple of rationals, e.g. "2/5,2/5,0"."""
    parts = [p for p in text.split(",") if p.strip() != ""]
    return tuple(rat(p) for p in parts)


def point_str(point) -> str:
    return ",".join(rat_str(c) for c in point)
