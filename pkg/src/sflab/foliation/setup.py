"""Regular Poisson structures on tori together with a complement to the leaves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import DivisionByZero, NotComplementary, NotPoisson
from ..exactnum import FieldElement, FourierScalar, Matrix, field_rank, unit_inverse
from ..exactnum.field import root_of_unity
from .multivector import (
    MultiVector,
    bivector_matrix,
    contract,
    pushforward,
    schouten,
)


def _as_components(v, n: int) -> list[FourierScalar]:
    if isinstance(v, MultiVector):
        return v.vector_components()
    return list(v)


def sample_units(point: Sequence, ntorus: int) -> list[FieldElement]:
    """exp(i theta_j) at theta_j = 2 pi q_j for rational q_j with supported denominators."""
    from fractions import Fraction

    units = []
    for q in point:
        q = Fraction(q)
        units.append(root_of_unity(q.numerator, q.denominator))
    if len(units) != ntorus:
        raise ValueError(f"sample point needs {ntorus} coordinates")
    return units


def evaluate_matrix(m: Matrix, units, values=()) -> Matrix:
    return m.map(lambda f: f.evaluate(units, values))


@dataclass(frozen=True)
class GoodnessResult:
    good: bool
    witness: tuple | None = None  # (a, b, value): indices of the annihilator covectors

    def __bool__(self):
        return self.good


class TorusPoissonSetup:
    """Poisson bivector of constant rank 2k with a chosen complement G to its leaves.

    The leaf distribution TF and the complement G are given by frames (lists
    of vector fields).  All derived data (projections, leafwise symplectic
    form, its extension gamma by zero on G, an annihilator frame of TF) are
    computed exactly over the Fourier ring.
    """

    def __init__(self, Pi: MultiVector, leaf_frame: Sequence, complement_frame: Sequence,
                 name: str = "", check: bool = True):
        n = Pi.n
        self.n = n
        self.Pi = Pi
        self.name = name
        self.dim, self.npoly = Pi.dim, Pi.npoly
        self.leaf_frame = [_as_components(v, n) for v in leaf_frame]
        self.complement_frame = [_as_components(v, n) for v in complement_frame]
        self.rank = len(self.leaf_frame)
        if self.rank + len(self.complement_frame) != n:
            raise NotComplementary("frames do not have total size n")
        cols = self.leaf_frame + self.complement_frame
        self.frame = Matrix([[cols[j][i] for j in range(n)] for i in range(n)])
        try:
            self.frame_inv = unit_inverse(self.frame)
        except DivisionByZero as exc:
            raise NotComplementary("leaf frame and complement frame are not complementary") from exc
        r = self.rank
        self.leaf_coframe = self.frame_inv.block(0, r, 0, n)
        self.annihilator = self.frame_inv.block(r, n, 0, n)  # rows: covectors vanishing on TF
        F = self.frame.block(0, n, 0, r)
        Gf = self.frame.block(0, n, r, n)
        self.pr_TF = F @ self.leaf_coframe
        self.pr_G = Gf @ self.annihilator
        self.Pi_matrix = bivector_matrix(Pi)
        pi_leaf = self.leaf_coframe @ self.Pi_matrix @ self.leaf_coframe.T
        if check:
            if not (F @ pi_leaf @ F.T - self.Pi_matrix).is_zero():
                raise NotComplementary("Pi is not tangent to the leaf frame")
            if schouten(Pi, Pi).comps:
                raise NotPoisson("[Pi, Pi] does not vanish")
        try:
            self.omega_leaf = -unit_inverse(pi_leaf)
        except DivisionByZero as exc:
            raise NotComplementary("Pi is degenerate on the leaf frame") from exc
        self.gamma = self.leaf_coframe.T @ self.omega_leaf @ self.leaf_coframe
        if check:
            self._check_identities()

    # derived views
    @property
    def leaf_dimension(self) -> int:
        return self.rank

    def sharp(self) -> Matrix:
        """Pi^sharp on covector components."""
        return self.Pi_matrix.T

    def gamma_flat(self) -> Matrix:
        """gamma^flat: X -> iota_X gamma on vector components."""
        return self.gamma.T

    def _check_identities(self) -> None:
        ident = self.pr_TF.identity_like()
        if not (self.pr_TF @ self.pr_TF - self.pr_TF).is_zero():
            raise NotComplementary("leaf projection is not idempotent")
        if not (self.pr_TF + self.pr_G - ident).is_zero():
            raise NotComplementary("projections do not sum to the identity")
        if not (self.gamma_flat() @ self.pr_G).is_zero():
            raise NotComplementary("gamma does not vanish on the complement")
        if not (self.sharp() @ self.gamma_flat() + self.pr_TF).is_zero():
            raise NotComplementary("Pi^sharp o gamma^flat differs from -pr_TF")

    def with_complement(self, complement_frame: Sequence, name: str = "") -> "TorusPoissonSetup":
        return TorusPoissonSetup(self.Pi, self.leaf_frame, complement_frame, name or self.name)

    def extend(self, extra_poly: int) -> "TorusPoissonSetup":
        """Same data over a coefficient ring with extra polynomial variables."""
        ext = lambda vs: [[f.extend(0, extra_poly) for f in v] for v in vs]
        return TorusPoissonSetup(self.Pi.extend_ring(0, extra_poly), ext(self.leaf_frame),
                                 ext(self.complement_frame), self.name, check=False)

    def zero(self, degree: int) -> MultiVector:
        return MultiVector.zero(self.n, degree, self.dim, self.npoly)

    def scalar(self, c) -> FourierScalar:
        return FourierScalar.constant(c, self.dim, self.npoly)

    # regularity witness
    def rank_at(self, point: Sequence, bivector: MultiVector | None = None, values=()) -> int:
        P = self.Pi if bivector is None else bivector
        units = sample_units(point, self.dim - self.npoly)
        return field_rank(evaluate_matrix(bivector_matrix(P), units, values))

    def check_regular(self, points: Sequence[Sequence]) -> bool:
        return all(self.rank_at(p) == self.rank for p in points)

    def __repr__(self):
        return f"TorusPoissonSetup({self.name or 'n=%d' % self.n}, rank={self.rank})"


def validate_projectors(pr_TF: Matrix, pr_G: Matrix) -> None:
    """Reject non-idempotent or non-complementary projection pairs."""
    ident = pr_TF.identity_like()
    if not (pr_TF @ pr_TF - pr_TF).is_zero() or not (pr_G @ pr_G - pr_G).is_zero():
        raise NotComplementary("projection is not idempotent")
    if not (pr_TF + pr_G - ident).is_zero():
        raise NotComplementary("projections do not sum to the identity")


def is_good(W: MultiVector, setup: TorusPoissonSetup) -> GoodnessResult:
    """W is good iff iota_alpha iota_beta W = 0 for all alpha, beta annihilating TF."""
    if W.degree < 2:
        return GoodnessResult(True)
    ann = [list(setup.annihilator.rows[a]) for a in range(setup.annihilator.nrows)]
    singles = [contract(alpha, W) for alpha in ann]
    for a in range(len(ann)):
        for b in range(a + 1, len(ann)):
            val = contract(ann[a], singles[b])
            if val.comps:
                return GoodnessResult(False, (a, b, val))
    return GoodnessResult(True)


def bigrade_decompose(W: MultiVector, setup: TorusPoissonSetup) -> dict[tuple[int, int], MultiVector]:
    """Split W into components in sections of wedge^p TF (x) wedge^q G."""
    r = setup.rank
    in_frame = pushforward(W, setup.frame_inv)
    groups: dict[tuple[int, int], dict] = {}
    for idx, f in in_frame.comps.items():
        q = sum(1 for i in idx if i >= r)
        groups.setdefault((len(idx) - q, q), {})[idx] = f
    out = {}
    for pq, comps in groups.items():
        part = MultiVector._raw(setup.n, W.degree, comps, W.dim, W.npoly)
        out[pq] = pushforward(part, setup.frame)
    return out


# shipped reference setups

def _const(c, n):
    return FourierScalar.constant(c, n)


def kronecker_t3(slope=None, complement: str = "G0") -> TorusPoissonSetup:
    """Pi = (d1 + lambda d2) ^ d3 on T^3; complement span{d2} or span{d2 + d3}."""
    n = 3
    lam = FieldElement.rt() if slope is None else FieldElement.coerce(slope)
    one, zero = _const(1, n), _const(0, n)
    X = [one, _const(lam, n), zero]
    d3 = [zero, zero, one]
    Pi = MultiVector(n, 2, {(0, 1): _const(0, n), (0, 2): one, (1, 2): _const(lam, n)})
    comp = {"G0": [zero, one, zero], "G1": [zero, one, one]}[complement]
    return TorusPoissonSetup(Pi, [X, d3], [comp], name=f"T3-{complement}")


def twisted_t4(complement: str = "G") -> TorusPoissonSetup:
    """Pi = d1 ^ d2 on T^4 with the non-involutive complement span{d3 + sin(theta4) d1, d4}."""
    n = 4
    one, zero = _const(1, n), _const(0, n)
    s4 = FourierScalar.sin((0, 0, 0, 1))
    Pi = MultiVector(n, 2, {(0, 1): one})
    leaves = [[one, zero, zero, zero], [zero, one, zero, zero]]
    if complement == "G":
        comp = [[s4, zero, one, zero], [zero, zero, zero, one]]
    elif complement == "G0":
        comp = [[zero, zero, one, zero], [zero, zero, zero, one]]
    else:
        raise ValueError(f"unknown complement {complement!r}")
    return TorusPoissonSetup(Pi, leaves, comp, name=f"T4-{complement}")
