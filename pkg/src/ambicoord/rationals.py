"""Strict string form for exact rationals used in all JSON files."""

from __future__ import annotations

import re
from fractions import Fraction

# "p" or "p/q" with integer p and positive integer q; no whitespace, no floats
_RATIONAL_RE = re.compile(r"-?(?:0|[1-9][0-9]*)(?:/[1-9][0-9]*)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" into a Fraction; reject anything else."""
    if not isinstance(text, str) or _RATIONAL_RE.match(text) is None:
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Canonical string for a Fraction: "p" when integral, else "p/q"."""
    return str(Fraction(value))
