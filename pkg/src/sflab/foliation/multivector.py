"""Multivector fields on a torus with Fourier-polynomial coefficients.

A degree-d multivector is a mapping from increasing index tuples (0-based
frame indices) to coefficient functions.  Contractions act from the left:
    iota_a (X_1 ^ ... ^ X_d) = sum_j (-1)^(j-1) dtheta^a(X_j) X_1 ^ .. ^ X_j-hat ^ .. ^ X_d.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from ..errors import DegreeError, DimensionMismatch
from ..exactnum import FieldElement, FourierScalar, Matrix
from ..exactnum.printing import format_fourier


def merge_sign(a: tuple, b: tuple) -> tuple[int, tuple]:
    """Sign and sorted union for the wedge of basis words a and b (0 if they overlap)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if not sa.isdisjoint(b):
        return 0, ()
    inv = 0
    for x in a:
        for y in b:
            if y < x:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


class MultiVector:
    __slots__ = ("n", "degree", "comps", "dim", "npoly")

    def __init__(self, n: int, degree: int, comps: Mapping[tuple, FourierScalar] | None = None,
                 dim: int | None = None, npoly: int = 0):
        self.n = n
        self.degree = degree
        self.dim = n if dim is None else dim
        self.npoly = npoly
        clean = {}
        for idx, f in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeError(f"index {idx} does not have length {degree}")
            if any(not 0 <= i < n for i in idx):
                raise DimensionMismatch(f"frame index out of range in {idx}")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index {idx} is not strictly increasing")
            if not isinstance(f, FourierScalar):
                f = FourierScalar.constant(f, self.dim, npoly)
            elif f.dim != self.dim or f.npoly != npoly:
                raise DimensionMismatch("coefficient ring mismatch")
            if f:
                clean[idx] = f
        self.comps = clean

    @classmethod
    def _raw(cls, n, degree, comps, dim, npoly) -> "MultiVector":
        obj = object.__new__(cls)
        obj.n = n
        obj.degree = degree
        obj.comps = comps
        obj.dim = dim
        obj.npoly = npoly
        return obj

    def _new(self, degree: int, comps: dict) -> "MultiVector":
        return MultiVector._raw(self.n, degree, comps, self.dim, self.npoly)

    # constructors
    @classmethod
    def zero(cls, n: int, degree: int, dim: int | None = None, npoly: int = 0) -> "MultiVector":
        return cls._raw(n, degree, {}, n if dim is None else dim, npoly)

    @classmethod
    def function(cls, f: FourierScalar, n: int) -> "MultiVector":
        return cls._raw(n, 0, {(): f} if f else {}, f.dim, f.npoly)

    @classmethod
    def basis(cls, n: int, idx: Sequence[int], dim: int | None = None, npoly: int = 0,
              coeff: FourierScalar | None = None) -> "MultiVector":
        dim = n if dim is None else dim
        f = coeff if coeff is not None else FourierScalar.constant(1, dim, npoly)
        sign, word = 1, ()
        for i in idx:
            s, word = merge_sign(word, (i,))
            sign *= s
        if not sign:
            return cls._raw(n, len(idx), {}, dim, npoly)
        return cls._raw(n, len(idx), {word: f if sign > 0 else -f}, dim, npoly)

    @classmethod
    def vector(cls, comps: Sequence[FourierScalar]) -> "MultiVector":
        f0 = comps[0]
        return cls._raw(len(comps), 1, {(i,): f for i, f in enumerate(comps) if f}, f0.dim, f0.npoly)

    def zero_like(self, degree: int | None = None) -> "MultiVector":
        return self._new(self.degree if degree is None else degree, {})

    def scalar_zero(self) -> FourierScalar:
        return FourierScalar.zero(self.dim, self.npoly)

    def scalar_one(self) -> FourierScalar:
        return FourierScalar.constant(1, self.dim, self.npoly)

    # linear structure
    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def _compat(self, o: "MultiVector") -> None:
        if o.n != self.n or o.dim != self.dim or o.npoly != self.npoly:
            raise DimensionMismatch("multivectors live on different spaces")

    def __add__(self, o: "MultiVector") -> "MultiVector":
        self._compat(o)
        if not o.comps:
            return self
        if not self.comps:
            return o
        if o.degree != self.degree:
            raise DegreeError(f"cannot add degrees {self.degree} and {o.degree}")
        out = dict(self.comps)
        for k, f in o.comps.items():
            if k in out:
                s = out[k] + f
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = f
        return self._new(self.degree, out)

    def __neg__(self) -> "MultiVector":
        return self._new(self.degree, {k: -f for k, f in self.comps.items()})

    def __sub__(self, o: "MultiVector") -> "MultiVector":
        return self + (-o)

    def __mul__(self, c) -> "MultiVector":
        """Multiply by a field scalar or a function."""
        if isinstance(c, FourierScalar):
            out = {}
            for k, f in self.comps.items():
                g = f * c
                if g:
                    out[k] = g
            return self._new(self.degree, out)
        c = FieldElement.coerce(c)
        if not c:
            return self._new(self.degree, {})
        return self._new(self.degree, {k: f.scale(c) for k, f in self.comps.items()})

    __rmul__ = __mul__

    def map_coeffs(self, f: Callable[[FourierScalar], FourierScalar]) -> "MultiVector":
        out = {}
        for k, g in self.comps.items():
            h = f(g)
            if h:
                out[k] = h
        return self._new(self.degree, out)

    def partial(self, axis: int) -> "MultiVector":
        """Coefficient-wise derivative along a coordinate axis of the coefficient ring."""
        return self.map_coeffs(lambda g: g.partial(axis))

    def __eq__(self, o):
        if not isinstance(o, MultiVector):
            return NotImplemented
        if self.n != o.n or self.dim != o.dim or self.npoly != o.npoly:
            return False
        if not self.comps and not o.comps:
            return True
        return self.degree == o.degree and self.comps == o.comps

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.comps.items())))

    def component(self, idx: Sequence[int]) -> FourierScalar:
        return self.comps.get(tuple(idx), self.scalar_zero())

    def vector_components(self) -> list[FourierScalar]:
        if self.degree != 1 and self.comps:
            raise DegreeError("not a vector field")
        z = self.scalar_zero()
        return [self.comps.get((i,), z) for i in range(self.n)]

    def reframe(self, n: int) -> "MultiVector":
        """Same components viewed on a frame of size n (n >= every index used)."""
        return MultiVector._raw(n, self.degree, dict(self.comps), self.dim, self.npoly)

    def extend_ring(self, extra_torus: int = 0, extra_poly: int = 0) -> "MultiVector":
        comps = {k: f.extend(extra_torus, extra_poly) for k, f in self.comps.items()}
        return MultiVector._raw(self.n, self.degree, comps, self.dim + extra_torus + extra_poly,
                                self.npoly + extra_poly)

    def __repr__(self):
        return f"MultiVector({format_multivector(self)})"


def format_multivector(P: MultiVector, names: Sequence[str] | None = None) -> str:
    if not P.comps:
        return "0"
    parts = []
    for idx in sorted(P.comps):
        coeff = format_fourier(P.comps[idx])
        if idx:
            frame = "^".join(names[i] if names else f"e{i + 1}" for i in idx)
            parts.append(f"({coeff}) * {frame}")
        else:
            parts.append(f"({coeff})")
    return " + ".join(parts)


def wedge(P: MultiVector, Q: MultiVector) -> MultiVector:
    P._compat(Q)
    out: dict[tuple, FourierScalar] = {}
    for a, f in P.comps.items():
        for b, g in Q.comps.items():
            sign, idx = merge_sign(a, b)
            if not sign:
                continue
            h = f * g
            if sign < 0:
                h = -h
            if idx in out:
                h = out[idx] + h
                if h:
                    out[idx] = h
                else:
                    del out[idx]
            elif h:
                out[idx] = h
    return P._new(P.degree + Q.degree, out)


def wedge_all(items: Sequence[MultiVector]) -> MultiVector:
    acc = items[0]
    for x in items[1:]:
        acc = wedge(acc, x)
    return acc


def interior(a: int, P: MultiVector) -> MultiVector:
    """Contraction with the coordinate covector dtheta^a."""
    out = {}
    for idx, f in P.comps.items():
        for pos, i in enumerate(idx):
            if i == a:
                out[idx[:pos] + idx[pos + 1:]] = -f if pos & 1 else f
                break
    return P._new(P.degree - 1, out) if P.degree > 0 else P._new(0, {})


def contract(alpha: Sequence[FourierScalar], P: MultiVector) -> MultiVector:
    """iota_alpha P for a 1-form alpha = sum_a alpha[a] dtheta^a."""
    if P.degree == 0:
        return P._new(0, {})
    acc = P._new(P.degree - 1, {})
    for a, f in enumerate(alpha):
        if f:
            acc = acc + interior(a, P) * f
    return acc


def right_derivative(a: int, P: MultiVector) -> MultiVector:
    """Odd right derivative d/dzeta_a of P viewed as a superfunction."""
    out = {}
    d = P.degree
    for idx, f in P.comps.items():
        for pos, i in enumerate(idx):
            if i == a:
                out[idx[:pos] + idx[pos + 1:]] = -f if (d - 1 - pos) & 1 else f
                break
    return P._new(max(d - 1, 0), out)


def schouten(P: MultiVector, Q: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket via the superfunction formula.

    [P,Q] = sum_i (P d<_i) (d_i Q) - (-1)^{(p-1)(q-1)} (Q d<_i)(d_i P),
    with d<_i the right odd derivative and d_i the coordinate derivative.
    """
    P._compat(Q)
    p, q = P.degree, Q.degree
    out = P._new(p + q - 1 if p + q > 0 else 0, {})
    if p + q == 0:
        return out
    sign2 = -1 if ((p - 1) * (q - 1)) & 1 else 1
    for i in range(P.n):
        dP = right_derivative(i, P) if p else None
        if dP is not None and dP.comps:
            out = out + wedge(dP, Q.partial(i))
        dQ = right_derivative(i, Q) if q else None
        if dQ is not None and dQ.comps:
            term = wedge(dQ, P.partial(i))
            out = out - term if sign2 > 0 else out + term
    return out


def vector_apply(X: Sequence[FourierScalar], f: FourierScalar) -> FourierScalar:
    """X(f) = sum_k X^k d_k f."""
    acc = None
    for k, c in enumerate(X):
        if c:
            t = c * f.partial(k)
            acc = t if acc is None else acc + t
    return acc if acc is not None else f * 0


def lie_bracket(X: Sequence[FourierScalar], Y: Sequence[FourierScalar]) -> list[FourierScalar]:
    """Components of [X, Y] for vector fields given by component lists."""
    return [vector_apply(X, Y[j]) - vector_apply(Y, X[j]) for j in range(len(X))]


def anchored_bracket(P: MultiVector, Q: MultiVector,
                     anchor: Sequence[Sequence[FourierScalar]],
                     structure: Mapping[tuple[int, int], MultiVector]) -> MultiVector:
    """Gerstenhaber extension of an anchored bracket on the coordinate frame.

    ``anchor[i]`` are the components of rho(e_i); ``structure[(i, j)]`` for
    i < j is the vector field [e_i, e_j] (missing means zero).  The extension
    is the unique one satisfying graded antisymmetry and the Leibniz rule
    [P, Q ^ R] = [P, Q] ^ R + (-1)^{(p-1)q} Q ^ [P, R].
    """
    P._compat(Q)
    p, q = P.degree, Q.degree
    out = P._new(max(p + q - 1, 0), {})
    if p + q == 0:
        return out
    n = P.n
    sgn_pq = -1 if ((p - 1) * (q - 1)) & 1 else 1

    def rho(i: int, g: FourierScalar) -> FourierScalar:
        return vector_apply(anchor[i], g)

    def frame_with_function(I: tuple, g: FourierScalar) -> MultiVector:
        """[e_I, g] = sum_a (-1)^{|I|-1-a} rho_{I[a]}(g) e_{I minus a}."""
        acc = P._new(len(I) - 1, {})
        for a, i in enumerate(I):
            h = rho(i, g)
            if h:
                term = MultiVector.basis(n, I[:a] + I[a + 1:], P.dim, P.npoly, h)
                acc = acc - term if (len(I) - 1 - a) & 1 else acc + term
        return acc

    def frame_frame(I: tuple, J: tuple) -> MultiVector:
        acc = P._new(len(I) + len(J) - 1, {})
        for a, i in enumerate(I):
            for b, j in enumerate(J):
                if i < j:
                    c = structure.get((i, j))
                    neg = False
                elif j < i:
                    c = structure.get((j, i))
                    neg = True
                else:
                    c = None
                if c is None or not c.comps:
                    continue
                rest = wedge(MultiVector.basis(n, I[:a] + I[a + 1:], P.dim, P.npoly),
                             MultiVector.basis(n, J[:b] + J[b + 1:], P.dim, P.npoly))
                term = wedge(c, rest)
                if ((a + b) & 1) ^ neg:
                    acc = acc - term
                else:
                    acc = acc + term
        return acc

    for I, f in P.comps.items():
        eI = MultiVector.basis(n, I, P.dim, P.npoly)
        for J, g in Q.comps.items():
            eJ = MultiVector.basis(n, J, P.dim, P.npoly)
            if I and J:
                ff = frame_frame(I, J)
                if ff.comps:
                    out = out + ff * (f * g)
            if I:
                t = frame_with_function(I, g)
                if t.comps:
                    out = out + wedge(t, eJ) * f
            if J:
                t = frame_with_function(J, f)
                if t.comps:
                    t = wedge(t, eI) * g
                    out = out - t if sgn_pq > 0 else out + t
    return out


def pushforward(P: MultiVector, M: Matrix) -> MultiVector:
    """Apply a bundle map to every vector factor: d_i -> sum_a M[a][i] d_a."""
    n_out = M.nrows
    cols = [MultiVector.vector([M.rows[a][i] for a in range(n_out)]) for i in range(M.ncols)]
    acc = MultiVector._raw(n_out, P.degree, {}, P.dim, P.npoly)
    for idx, f in P.comps.items():
        if not idx:
            acc = acc + MultiVector._raw(n_out, 0, {(): f}, P.dim, P.npoly)
            continue
        term = wedge_all([cols[i] for i in idx])
        acc = acc + term * f
    return acc


def bivector_matrix(Z: MultiVector) -> Matrix:
    """Skew matrix with entries Z^{ij}."""
    if Z.degree != 2 and Z.comps:
        raise DegreeError("not a bivector")
    z = Z.scalar_zero()
    rows = [[z] * Z.n for _ in range(Z.n)]
    for (i, j), f in Z.comps.items():
        rows[i][j] = f
        rows[j][i] = -f
    return Matrix(rows)


def matrix_bivector(m: Matrix, n: int | None = None) -> MultiVector:
    """Bivector from a skew matrix; skewness is checked."""
    n = m.nrows if n is None else n
    f0 = m.rows[0][0]
    comps = {}
    for i in range(m.nrows):
        if m.rows[i][i]:
            raise ValueError("matrix is not skew (nonzero diagonal)")
        for j in range(i + 1, m.ncols):
            if not (m.rows[i][j] + m.rows[j][i]).is_zero():
                raise ValueError(f"matrix is not skew at ({i},{j})")
            if m.rows[i][j]:
                comps[(i, j)] = m.rows[i][j]
    return MultiVector._raw(n, 2, comps, f0.dim, f0.npoly)


def sharp_matrix(Z: MultiVector) -> Matrix:
    """Matrix of Z^sharp(alpha) = iota_alpha Z acting on covector components."""
    return bivector_matrix(Z).T


def wedge_of_sharps(items: Sequence[MultiVector], form: Mapping[tuple, FourierScalar]) -> MultiVector:
    """(P_1^# ^ ... ^ P_m^#) applied to an m-form.

    ``form`` maps ordered index tuples (a_1..a_m) to the values
    form(d_{a_1}, ..., d_{a_m}); all orderings with nonzero value must be
    present.  The result is sum form(d_a..) iota_{a_1}P_1 ^ ... ^ iota_{a_m}P_m.
    """
    P0 = items[0]
    out_deg = sum(P.degree for P in items) - len(items)
    acc = P0._new(max(out_deg, 0), {})
    if any(P.degree == 0 for P in items):
        return acc
    cache: list[dict[int, MultiVector]] = [{} for _ in items]

    def iota(slot: int, a: int) -> MultiVector:
        hit = cache[slot].get(a)
        if hit is None:
            hit = interior(a, items[slot])
            cache[slot][a] = hit
        return hit

    for idx, val in form.items():
        parts = [iota(s, a) for s, a in enumerate(idx)]
        if any(not x.comps for x in parts):
            continue
        acc = acc + wedge_all(parts) * val
    return acc


def full_antisymmetric(values: Mapping[tuple, FourierScalar]) -> dict[tuple, FourierScalar]:
    """Extend values on increasing tuples to all orderings by antisymmetry."""
    import itertools

    from ..graded import Permutation

    out = {}
    for idx, v in values.items():
        if not v:
            continue
        for perm in itertools.permutations(range(len(idx))):
            s = Permutation(perm).sign()
            out[tuple(idx[p] for p in perm)] = v if s > 0 else -v
    return out
