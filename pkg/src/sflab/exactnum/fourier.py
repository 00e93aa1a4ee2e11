"""Trigonometric polynomials on a torus, optionally times polynomials in extra variables.

A :class:`FourierScalar` is a finite sum  c_k * exp(i k.theta) * t^a  stored as a
mapping from the concatenated exponent tuple (k, a) to a field element.  The
first ``dim - npoly`` axes are periodic angles; the trailing ``npoly`` axes are
polynomial (used for time-like parameters).  Real functions satisfy
c_{-k,a} = conj(c_{k,a}).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..errors import AxisOutOfRange, DimensionMismatch, NotReal
from .field import ONE, ZERO, FieldElement, I

_HALF = FieldElement(1) / 2


class FourierScalar:
    __slots__ = ("dim", "npoly", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None,
                 npoly: int = 0, real: bool = False):
        self.dim = dim
        self.npoly = npoly
        clean: dict[tuple, FieldElement] = {}
        if terms:
            for k, c in terms.items():
                k = tuple(int(x) for x in k)
                if len(k) != dim:
                    raise DimensionMismatch(f"frequency {k} has length {len(k)}, expected {dim}")
                if any(x < 0 for x in k[dim - npoly:]):
                    raise ValueError(f"negative polynomial exponent in {k}")
                c = FieldElement.coerce(c)
                if c:
                    clean[k] = clean[k] + c if k in clean else c
            clean = {k: c for k, c in clean.items() if c}
        self.terms = clean
        if real and not self.is_real():
            raise NotReal("coefficients violate c_{-k} = conj(c_k)")

    @classmethod
    def _raw(cls, dim: int, npoly: int, terms: dict) -> "FourierScalar":
        obj = object.__new__(cls)
        obj.dim = dim
        obj.npoly = npoly
        obj.terms = terms
        return obj

    # constructors
    @classmethod
    def zero(cls, dim: int, npoly: int = 0) -> "FourierScalar":
        return cls._raw(dim, npoly, {})

    @classmethod
    def constant(cls, c, dim: int, npoly: int = 0) -> "FourierScalar":
        c = FieldElement.coerce(c)
        return cls._raw(dim, npoly, {(0,) * dim: c} if c else {})

    @classmethod
    def exp(cls, k: Sequence[int], dim: int | None = None, npoly: int = 0, coeff=1) -> "FourierScalar":
        k = tuple(k) + (0,) * (0 if dim is None else dim - len(k))
        return cls(len(k), {k: coeff}, npoly)

    @classmethod
    def cos(cls, k: Sequence[int], dim: int | None = None, npoly: int = 0) -> "FourierScalar":
        k = tuple(k) + (0,) * (0 if dim is None else dim - len(k))
        mk = tuple(-x for x in k[: len(k) - npoly]) + k[len(k) - npoly:]
        return cls(len(k), {k: _HALF, mk: _HALF}, npoly)

    @classmethod
    def sin(cls, k: Sequence[int], dim: int | None = None, npoly: int = 0) -> "FourierScalar":
        k = tuple(k) + (0,) * (0 if dim is None else dim - len(k))
        mk = tuple(-x for x in k[: len(k) - npoly]) + k[len(k) - npoly:]
        return cls(len(k), {k: -I * _HALF, mk: I * _HALF}, npoly)

    @classmethod
    def variable(cls, axis: int, dim: int, npoly: int) -> "FourierScalar":
        """The polynomial coordinate on ``axis`` (0-based, must be a polynomial axis)."""
        if not dim - npoly <= axis < dim:
            raise AxisOutOfRange(f"axis {axis} is not a polynomial axis")
        k = [0] * dim
        k[axis] = 1
        return cls._raw(dim, npoly, {tuple(k): ONE})

    # predicates
    @property
    def ntorus(self) -> int:
        return self.dim - self.npoly

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        z = (0,) * self.dim
        return all(k == z for k in self.terms)

    def constant_term(self) -> FieldElement:
        return self.terms.get((0,) * self.dim, ZERO)

    def is_real(self) -> bool:
        t = self.terms
        return all(t.get(self._neg(k), ZERO) == c.conj() for k, c in t.items())

    def _neg(self, k: tuple) -> tuple:
        nt = self.dim - self.npoly
        if not self.npoly:
            return tuple(-x for x in k)
        return tuple(-x for x in k[:nt]) + k[nt:]

    def _check(self, o: "FourierScalar") -> None:
        if o.dim != self.dim or o.npoly != self.npoly:
            raise DimensionMismatch(
                f"rings differ: ({self.dim},{self.npoly}) vs ({o.dim},{o.npoly})")

    # ring operations
    def __add__(self, o):
        if not isinstance(o, FourierScalar):
            return self + FourierScalar.constant(o, self.dim, self.npoly)
        self._check(o)
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for k, c in o.terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return FourierScalar._raw(self.dim, self.npoly, out)

    __radd__ = __add__

    def __neg__(self):
        return FourierScalar._raw(self.dim, self.npoly, {k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        if not isinstance(o, FourierScalar):
            return self + (-FieldElement.coerce(o))
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def scale(self, c) -> "FourierScalar":
        c = FieldElement.coerce(c)
        if not c:
            return FourierScalar._raw(self.dim, self.npoly, {})
        if c == ONE:
            return self
        return FourierScalar._raw(self.dim, self.npoly, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, FourierScalar):
            if isinstance(o, (FieldElement, int)) or hasattr(o, "numerator"):
                return self.scale(o)
            return NotImplemented
        self._check(o)
        st, ot = self.terms, o.terms
        if not st or not ot:
            return FourierScalar._raw(self.dim, self.npoly, {})
        if len(st) > len(ot):
            st, ot = ot, st
        out: dict[tuple, FieldElement] = {}
        get = out.get
        for k1, c1 in st.items():
            for k2, c2 in ot.items():
                k = tuple([x + y for x, y in zip(k1, k2)])
                v = get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return FourierScalar._raw(self.dim, self.npoly, {k: c for k, c in out.items() if c})

    def __rmul__(self, o):
        return self.__mul__(o)

    def __pow__(self, n: int) -> "FourierScalar":
        result = FourierScalar.constant(1, self.dim, self.npoly)
        for _ in range(n):
            result = result * self
        return result

    def partial(self, axis: int) -> "FourierScalar":
        """Derivative along a 0-based axis."""
        if not 0 <= axis < self.dim:
            raise AxisOutOfRange(f"axis {axis} outside 0..{self.dim - 1}")
        out = {}
        if axis < self.dim - self.npoly:
            for k, c in self.terms.items():
                kj = k[axis]
                if kj:
                    out[k] = c * (I * kj)
        else:
            for k, c in self.terms.items():
                a = k[axis]
                if a:
                    k2 = k[:axis] + (a - 1,) + k[axis + 1:]
                    out[k2] = c * a
        return FourierScalar._raw(self.dim, self.npoly, out)

    def conj(self) -> "FourierScalar":
        return FourierScalar._raw(
            self.dim, self.npoly, {self._neg(k): c.conj() for k, c in self.terms.items()})

    def extend(self, extra_torus: int = 0, extra_poly: int = 0) -> "FourierScalar":
        """Embed into a ring with more axes (new torus axes appended before polynomial ones)."""
        nt = self.dim - self.npoly
        zt, zp = (0,) * extra_torus, (0,) * extra_poly
        return FourierScalar._raw(
            self.dim + extra_torus + extra_poly, self.npoly + extra_poly,
            {k[:nt] + zt + k[nt:] + zp: c for k, c in self.terms.items()})

    def poly_coefficients(self, axis: int) -> dict[int, "FourierScalar"]:
        """Split by the exponent on a polynomial axis; exponents become zero."""
        out: dict[int, dict] = {}
        for k, c in self.terms.items():
            a = k[axis]
            out.setdefault(a, {})[k[:axis] + (0,) + k[axis + 1:]] = c
        return {a: FourierScalar._raw(self.dim, self.npoly, t) for a, t in out.items()}

    def poly_degree(self, axis: int) -> int:
        return max((k[axis] for k in self.terms), default=-1)

    def evaluate(self, units: Sequence[FieldElement], values: Sequence[FieldElement] = ()) -> FieldElement:
        """Value at a point given exp(i*theta_j) for torus axes and plain values for polynomial axes."""
        nt = self.dim - self.npoly
        if len(units) != nt or len(values) != self.npoly:
            raise DimensionMismatch("wrong number of coordinates")
        total = ZERO
        for k, c in self.terms.items():
            v = c
            for j in range(nt):
                if k[j]:
                    v = v * units[j] ** k[j]
            for j in range(self.npoly):
                if k[nt + j]:
                    v = v * FieldElement.coerce(values[j]) ** k[nt + j]
            total = total + v
        return total

    def support(self) -> list[tuple]:
        return sorted(self.terms)

    def __eq__(self, o):
        if isinstance(o, FourierScalar):
            return self.dim == o.dim and self.npoly == o.npoly and self.terms == o.terms
        try:
            c = FieldElement.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == ({(0,) * self.dim: c} if c else {})

    def __hash__(self):
        return hash((self.dim, self.npoly, frozenset(self.terms.items())))

    def __repr__(self):
        from .printing import format_fourier

        return f"FourierScalar({format_fourier(self)})"


def fourier_mul(f: FourierScalar, g: FourierScalar) -> FourierScalar:
    return f * g


def fourier_partial(f: FourierScalar, j: int) -> FourierScalar:
    """Derivative along the 1-based axis j."""
    if not 1 <= j <= f.dim:
        raise AxisOutOfRange(f"axis {j} outside 1..{f.dim}")
    return f.partial(j - 1)


def fourier_sum(items: Iterable[FourierScalar], dim: int, npoly: int = 0) -> FourierScalar:
    acc: dict[tuple, FieldElement] = {}
    for f in items:
        for k, c in f.terms.items():
            v = acc.get(k)
            acc[k] = c if v is None else v + c
    return FourierScalar._raw(dim, npoly, {k: c for k, c in acc.items() if c})
