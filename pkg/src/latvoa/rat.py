"""Exact rational arithmetic helpers.

Everything in this package computes over exact rationals.  ``Rat`` is the
working type: ``gmpy2.mpq`` when available (several times faster), otherwise
``fractions.Fraction``.  The two are hash- and equality-compatible, so values
of either kind can share dict keys and compare cleanly in tests.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)
HALF = Rat(1, 2)


def rat(p, q=1):
    """Build an exact rational from integers (or pass one through)."""
    return Rat(p, q)


def is_integral(x) -> bool:
    """True when the exact rational x is an integer."""
    return x == int(x)


def format_rat(x) -> str:
    """Serialize an exact rational as "p/q" in lowest terms (q > 0), or "p"."""
    f = Fraction(int(x.numerator), int(x.denominator))
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s: str):
    """Inverse of :func:`format_rat`."""
    if "/" in s:
        p, q = s.split("/")
        return Rat(int(p), int(q))
    return Rat(int(s))
