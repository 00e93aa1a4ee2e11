"""Truncated leafwise cohomology of the linear foliation of slope lambda on T^2.

The leafwise differential along d_1 + lambda d_2 multiplies the Fourier mode
exp(i(m th1 + n th2)) by i(m + lambda n).  On the square box |m|, |n| <= N the
kernel (functions) and the cokernel (leafwise one-forms, identified with
functions through the leaf frame d_1 + lambda d_2) both have dimension equal to
the number of modes with vanishing divisor.  The three-torus example
T^2 x S^1 assembles its second cohomology as 2 h1 + h0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InexactSlope
from .exactnum import FieldElement, format_field, radical


@dataclass(frozen=True)
class Slope:
    """lambda as an exact rational, an exact real quadratic number, or a list of rational approximants."""

    kind: str  # "rational" | "quadratic" | "approximants"
    value: FieldElement | None = None
    approximants: tuple[Fraction, ...] = ()
    label: str = ""

    @classmethod
    def rational(cls, q) -> "Slope":
        q = Fraction(q)
        return cls("rational", FieldElement(q), label=str(q))

    @classmethod
    def exact(cls, x) -> "Slope":
        x = FieldElement.coerce(x)
        if not x.is_real():
            raise ValueError("slopes must be real")
        if x.is_rational():
            return cls("rational", x, label=format_field(x))
        return cls("quadratic", x, label=format_field(x))

    @classmethod
    def from_approximants(cls, qs: Sequence, label: str = "") -> "Slope":
        qs = tuple(Fraction(q) for q in qs)
        if len(qs) < 2:
            raise ValueError("need at least two approximants")
        return cls("approximants", approximants=qs, label=label or "approximants")

    @classmethod
    def liouville(cls, terms: int = 6) -> "Slope":
        """Partial sums of sum_k 10^(-k!) for k = 1..terms."""
        qs, acc = [], Fraction(0)
        for k in range(1, terms + 1):
            acc += Fraction(1, 10 ** math.factorial(k))
            qs.append(acc)
        return cls.from_approximants(qs, label=f"liouville({terms})")

    @property
    def is_exact(self) -> bool:
        return self.kind != "approximants"

    def as_fraction(self) -> Fraction:
        if self.kind != "rational":
            raise InexactSlope("not a rational slope")
        return Fraction(int(self.value.a.numerator), int(self.value.a.denominator))

    def approx(self) -> float:
        if self.kind == "approximants":
            return float(self.approximants[-1])
        v = self.value
        return float(v.a) + float(v.c) * math.sqrt(radical())


def divisor(mode: tuple[int, int], slope: Slope) -> FieldElement:
    """m + lambda n."""
    if not slope.is_exact:
        raise InexactSlope("approximant slopes have no exact divisors; use divisor_profile")
    m, n = mode
    return slope.value * n + m


def _exact_integer(x: FieldElement) -> int | None:
    if not x.is_rational():
        return None
    q = Fraction(int(x.a.numerator), int(x.a.denominator))
    return q.numerator if q.denominator == 1 else None


def obstructed_modes(slope: Slope, N: int) -> list[tuple[int, int]]:
    """Modes (m, n) in the box with m + lambda n = 0."""
    if not slope.is_exact:
        raise InexactSlope("obstructed modes need an exact slope")
    out = []
    for n in range(-N, N + 1):
        m = _exact_integer(-(slope.value * n))
        if m is not None and abs(m) <= N:
            out.append((m, n))
    return sorted(out)


def _nearest_modes(slope: Slope, n: int, N: int) -> list[int]:
    x = -slope.approx() * n
    base = math.floor(x)
    return [m for m in range(base - 1, base + 3) if abs(m) <= N]


def max_inverse_divisor(slope: Slope, N: int) -> tuple[FieldElement | None, tuple[int, int] | None]:
    """max 1/|m + lambda n| over nonzero modes of the box; None signals an exact zero (infinity)."""
    best, arg = None, None
    for n in range(-N, N + 1):
        cands = _nearest_modes(slope, n, N) + ([1] if n == 0 else [])
        for m in cands:
            if (m, n) == (0, 0):
                continue
            d = divisor((m, n), slope)
            if not d:
                return None, (m, n)
            inv = FieldElement(1) / d.abs_real()
            if best is None or inv > best:
                best, arg = inv, (m, n)
    return best, arg


@dataclass
class TruncatedCohomologyReport:
    slope: Slope
    cutoff: int
    h0_leaf: int
    h1_leaf: int
    h1_foliated: int
    h2_foliated: int
    h2_poisson: int
    obstructed: list[tuple[int, int]]
    max_inverse_divisor: FieldElement | None  # None: an obstructed nonzero mode exists
    truncation: str = "square box |m| <= N, |n| <= N"
    leaf_frame: str = "d1 + lambda d2"


def truncated_cohomology(slope: Slope, N: int) -> TruncatedCohomologyReport:
    obst = obstructed_modes(slope, N)
    h0 = len(obst)
    h1 = h0
    inv, _ = max_inverse_divisor(slope, N) if N > 0 else (None, None)
    return TruncatedCohomologyReport(
        slope, N, h0, h1,
        h1_foliated=h1 + h0,
        h2_foliated=h1,
        h2_poisson=h2_assembly_dims(h0, h1),
        obstructed=obst,
        max_inverse_divisor=inv,
    )


def h2_assembly_dims(h0: int, h1: int) -> int:
    return 2 * h1 + h0


def h2_assembly(report: TruncatedCohomologyReport) -> int:
    """dim H^2 = dim H^2(F) + dim H^1(F) = h1 + (h1 + h0)."""
    return report.h2_foliated + report.h1_foliated


# growth of inverse divisors

@dataclass
class ProfileRow:
    cutoff: int
    value: FieldElement | Fraction | None  # None: infinite (exact zero divisor)
    mode: tuple[int, int] | None


@dataclass
class DivisorProfile:
    slope: Slope
    rows: list[ProfileRow] = field(default_factory=list)
    note: str = ""

    def exceeds_power(self, k: int) -> list[int]:
        """Cutoffs N at which the profile is larger than N^k."""
        return [r.cutoff for r in self.rows
                if r.value is None or r.value > r.cutoff ** k]

    def bounded_by(self, bound: Callable[[int], object]) -> bool:
        return all(r.value is not None and r.value <= bound(r.cutoff) for r in self.rows)


def continued_fraction(q: Fraction) -> list[int]:
    out = []
    while True:
        a = math.floor(q)
        out.append(a)
        q -= a
        if not q:
            return out
        q = 1 / q


def convergents(q: Fraction) -> list[Fraction]:
    h0, h1, k0, k1 = 0, 1, 1, 0
    out = []
    for a in continued_fraction(q):
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
    return out


def _distance_to_integer(x: Fraction) -> tuple[Fraction, int]:
    m = round(x)
    return abs(x - m), m


def reliable_convergents(slope: Slope) -> list[Fraction]:
    """Convergents of the finest approximant with denominator at most that of the previous one.

    Those are convergents of every finer approximation as well, so the profile they
    produce does not depend on where the approximation was cut.
    """
    fine, coarse = slope.approximants[-1], slope.approximants[-2]
    return [c for c in convergents(fine) if c.denominator <= coarse.denominator]


def divisor_profile(slope: Slope, cutoffs: Sequence[int] | int) -> DivisorProfile:
    """max 1/|m + lambda n| over nonzero modes of the box, for each cutoff."""
    if isinstance(cutoffs, int):
        cutoffs = list(range(1, cutoffs + 1))
    prof = DivisorProfile(slope)
    if slope.is_exact:
        prof.note = "exact slope, square box"
        for N in cutoffs:
            v, mode = max_inverse_divisor(slope, N)
            prof.rows.append(ProfileRow(N, v, mode))
        return prof
    lam = slope.approximants[-1]
    conv = reliable_convergents(slope)
    prof.note = (f"slope given by {len(slope.approximants)} approximants; best approximations "
                 "from continued-fraction convergents (observed growth, not a classification)")
    for N in cutoffs:
        best, arg = Fraction(1), (1, 0)
        for c in conv:
            q = c.denominator
            if q > N:
                break
            dist, m = _distance_to_integer(lam * q)
            if abs(m) > N or not dist:
                continue
            if 1 / dist > best:
                best, arg = 1 / dist, (-m, q)
        prof.rows.append(ProfileRow(N, best, arg))
    return prof


def brute_force_profile(lam: Fraction, N: int) -> Fraction | None:
    """max 1/|m + lam n| over the whole box by enumeration (rational lam)."""
    best = None
    for n in range(-N, N + 1):
        for m in range(-N, N + 1):
            if (m, n) == (0, 0):
                continue
            d = abs(m + lam * n)
            if not d:
                return None
            if best is None or 1 / d > best:
                best = 1 / d
    return best


def bound_violations(slope: Slope, N: int, bound: Callable[[int, int], FieldElement]) -> list[tuple[int, int]]:
    """Nonzero modes of the box with 1/|m + lambda n| > bound(m, n), checked exactly."""
    out = []
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            if (m, n) == (0, 0):
                continue
            d = divisor((m, n), slope).abs_real()
            if not d or d * bound(m, n) < 1:
                out.append((m, n))
    return out


def naive_sqrt2_bound(m: int, n: int) -> FieldElement:
    """|m| + |n| + 1."""
    return FieldElement(abs(m) + abs(n) + 1)


def liouville_sqrt2_bound(m: int, n: int) -> FieldElement:
    """|m| + sqrt(2)|n|, from |m^2 - 2n^2| >= 1 and |m + sqrt2 n||m - sqrt2 n| = |m^2 - 2n^2|."""
    return FieldElement(abs(m)) + FieldElement.rt() * abs(n)


def rational_obstruction_count(p: int, q: int, N: int) -> int:
    """Lattice-line count 2 floor(N / max(|p|, |q|)) + 1 for lambda = p/q in lowest terms."""
    return 2 * (N // max(abs(p), abs(q))) + 1
