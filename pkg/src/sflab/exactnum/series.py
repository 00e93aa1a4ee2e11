"""Truncated power series in a formal parameter epsilon."""

from __future__ import annotations

import itertools
import operator
from typing import Callable, Sequence

from ..errors import NonUnitLeadingTerm


def _is_zero(x) -> bool:
    f = getattr(x, "is_zero", None)
    if f is not None:
        return f()
    return x == 0


class EpsSeries:
    """Coefficients t_0..t_K of a fixed carrier type, truncated at order K."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None, zero=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        if len(coeffs) < order + 1:
            if zero is None:
                if not coeffs:
                    raise ValueError("need a zero to pad an empty series")
                zero = coeffs[0] * 0 if not hasattr(coeffs[0], "zero_like") else coeffs[0].zero_like()
            coeffs += [zero] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    def __getitem__(self, j: int):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _same(self, o: "EpsSeries") -> None:
        if o.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {o.order}")

    def __add__(self, o):
        self._same(o)
        return EpsSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    def __sub__(self, o):
        self._same(o)
        return EpsSeries([a - b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    def __neg__(self):
        return EpsSeries([-a for a in self.coeffs], self.order)

    def map(self, f: Callable) -> "EpsSeries":
        return EpsSeries([f(a) for a in self.coeffs], self.order)

    def scale(self, c) -> "EpsSeries":
        return EpsSeries([a * c for a in self.coeffs], self.order)

    def __mul__(self, o):
        if isinstance(o, EpsSeries):
            return lift_bilinear(operator.mul, self, o)
        return self.scale(o)

    def __rmul__(self, o):
        return EpsSeries([o * a for a in self.coeffs], self.order)

    def __matmul__(self, o):
        return lift_bilinear(operator.matmul, self, o)

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def lowest_order(self) -> int | None:
        """Smallest j with t_j != 0, or None for the zero series."""
        for j, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return j
        return None

    def shift(self, j: int, zero) -> "EpsSeries":
        """Multiply by eps^j."""
        return EpsSeries([zero] * j + list(self.coeffs[: self.order + 1 - j]), self.order)

    def truncate(self, order: int, zero=None) -> "EpsSeries":
        return EpsSeries(self.coeffs, order, zero=zero if zero is not None else self.coeffs[0] * 0)

    def evaluate(self, eps):
        """Sum t_j * eps^j for a concrete scalar eps."""
        total = None
        power = 1
        for c in self.coeffs:
            term = c * power
            total = term if total is None else total + term
            power = power * eps
        return total

    def __eq__(self, o):
        if not isinstance(o, EpsSeries):
            return NotImplemented
        return self.order == o.order and all(
            _is_zero(a - b) for a, b in zip(self.coeffs, o.coeffs))

    def __repr__(self):
        return f"EpsSeries(order={self.order}, coeffs={list(self.coeffs)!r})"


def lift_bilinear(f: Callable, a: EpsSeries, b: EpsSeries) -> EpsSeries:
    """Apply a bilinear map order by order: (f(a,b))_k = sum_{i+j=k} f(a_i, b_j)."""
    a._same(b)
    return lift_multilinear(f, a, b)


def lift_multilinear(f: Callable, *series: EpsSeries, zero=None) -> EpsSeries:
    """Extend a multilinear map to truncated series in every argument."""
    K = series[0].order
    for s in series[1:]:
        if s.order != K:
            raise ValueError("truncation orders differ")
    out = [None] * (K + 1)
    nonzero = [[j for j, c in enumerate(s.coeffs) if not _is_zero(c)] for s in series]
    for combo in itertools.product(*nonzero):
        k = sum(combo)
        if k > K:
            continue
        v = f(*(s.coeffs[j] for s, j in zip(series, combo)))
        out[k] = v if out[k] is None else out[k] + v
    if zero is None:
        probe = next((v for v in out if v is not None), None)
        if probe is None:
            probe = f(*(s.coeffs[0] for s in series))
        zero = probe * 0 if not hasattr(probe, "zero_like") else probe.zero_like()
    return EpsSeries([zero if v is None else v for v in out], K)


def series_geometric_inverse(A: EpsSeries, K: int | None = None) -> EpsSeries:
    """Invert id + N, where A = id + N and N has no eps^0 term.

    Returns sum_{j<=K} (-N)^j.  ``A`` is an operator series whose carrier
    supports ``@``, ``+``, ``-`` and ``identity_like()``.
    """
    if K is not None and K != A.order:
        A = EpsSeries(A.coeffs, K, zero=A.coeffs[0].zero_like())
    lead = A.coeffs[0]
    ident = lead.identity_like()
    if not _is_zero(lead - ident):
        raise NonUnitLeadingTerm("order-0 part of the operator series is not the identity")
    zero = lead.zero_like()
    minus_n = EpsSeries([zero] + [-c for c in A.coeffs[1:]], A.order)
    result = EpsSeries([ident], A.order, zero=zero)
    power = result
    for _ in range(A.order):
        power = power @ minus_n
        if power.is_zero():
            break
        result = result + power
    return result
