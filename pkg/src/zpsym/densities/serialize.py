"""JSON-friendly encodings of exact rationals and intervals."""

from __future__ import annotations

from fractions import Fraction

from .intervals import Interval


def rational_to_json(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def interval_to_json(iv: Interval) -> dict:
    return {"lower": rational_to_json(iv.lower), "upper": rational_to_json(iv.upper)}


def interval_from_json(d: dict) -> Interval:
    return Interval(rational_from_json(d["lower"]), rational_from_json(d["upper"]))


def to_json(x):
    """Recursively encode Fractions and Intervals inside dicts/lists."""
    if isinstance(x, Interval):
        return interval_to_json(x)
    if isinstance(x, Fraction):
        return rational_to_json(x)
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    return x
