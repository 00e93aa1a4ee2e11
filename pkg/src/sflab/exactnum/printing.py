"""Rendering of exact values in the manifest expression syntax."""

from __future__ import annotations

from .field import FieldElement, format_field

POLY_NAMES = ("t", "s")


def _coeff(c: FieldElement) -> str:
    text = format_field(c)
    if any(op in text[1:] for op in (" + ", " - ")) or "/" in text:
        return f"({text})"
    return text


def format_fourier(f) -> str:
    if not f.terms:
        return "0"
    nt = f.dim - f.npoly
    pieces = []
    for k in sorted(f.terms):
        factors = []
        if any(k[:nt]):
            factors.append("exp(" + ",".join(str(x) for x in k[:nt]) + ")")
        for j in range(f.npoly):
            factors.extend([POLY_NAMES[j]] * k[nt + j])
        c = f.terms[k]
        if factors:
            pieces.append(_coeff(c) + "*" + "*".join(factors))
        else:
            pieces.append(_coeff(c))
    return " + ".join(pieces)
