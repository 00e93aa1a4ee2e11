"""Gauge equivalence of Maurer-Cartan elements through lifts to M x I^2.

Families in a time parameter t are polynomials in t: the coefficient ring of
the base setup is extended by one polynomial axis (t), and the product
M x I^2 carries one more polynomial axis (s).  Frame indices n and n + 1 of
the product are d/dt and d/ds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DegreeBoundExceeded, NonSmallDeformation
from .exactnum import EpsSeries, FieldElement, FourierScalar, Matrix, series_geometric_inverse
from .foliation.brackets import KoszulBrackets
from .foliation.dirac import as_series, gauge_transform_series, series_schouten, series_zero
from .foliation.multivector import MultiVector, bivector_matrix, wedge
from .foliation.setup import TorusPoissonSetup
from .linfty import mc_residual, series_instance


class ProductSetup:
    """The trivial lift of a base setup to M x I^2 with complement G + R d_s + R d_t."""

    def __init__(self, base: TorusPoissonSetup, degree_bound: int = 4):
        if base.npoly:
            raise ValueError("the base setup must have a purely periodic coefficient ring")
        self.base = base
        self.n = base.n
        self.degree_bound = degree_bound
        self.base_t = base.extend(1)  # ring (theta, t)
        n = self.n

        def up(v):
            return [f.extend(0, 2) for f in v] + [FourierScalar.zero(n + 2, 2)] * 2

        def unit(i):
            return [FourierScalar.constant(1 if k == i else 0, n + 2, 2) for k in range(n + 2)]

        Pi = self.to_product(base.Pi.extend_ring(0, 1))
        leaves = [up(v) for v in base.leaf_frame]
        comps = [up(v) for v in base.complement_frame] + [unit(n + 1), unit(n)]
        self.product = TorusPoissonSetup(Pi, leaves, comps, name=f"{base.name}xI2")
        self.t_index, self.s_index = n, n + 1

    @cached_property
    def base_brackets(self) -> KoszulBrackets:
        return KoszulBrackets(self.base_t)

    @cached_property
    def product_brackets(self) -> KoszulBrackets:
        return KoszulBrackets(self.product)

    def to_product(self, P: MultiVector) -> MultiVector:
        """View a multivector over the (theta, t) ring as one on M x I^2."""
        return P.reframe(self.n + 2).extend_ring(0, 1)

    def unit(self, i: int) -> MultiVector:
        return MultiVector.basis(self.n + 2, (i,), self.n + 2, 2)

    def t_degree(self, P: MultiVector) -> int:
        deg = 0
        for f in P.comps.values():
            deg = max(deg, f.poly_degree(self.n))
        return deg

    def check_degree(self, S: EpsSeries) -> None:
        for c in S.coeffs:
            if self.t_degree(c) > self.degree_bound:
                raise DegreeBoundExceeded(
                    f"t-degree {self.t_degree(c)} exceeds the bound {self.degree_bound}")


def d_dt(ps: ProductSetup, S: EpsSeries) -> EpsSeries:
    return S.map(lambda P: P.partial(ps.n))


@dataclass
class LiftedBivector:
    W: EpsSeries
    X: EpsSeries
    assembled: EpsSeries


def lift(ps: ProductSetup, W: EpsSeries, X: EpsSeries) -> LiftedBivector:
    """W~ = W + (d_t + X) ^ d_s; the d_t ^ d_s term sits at eps^0."""
    ps.check_degree(W)
    ps.check_degree(X)
    ds, dt = ps.unit(ps.s_index), ps.unit(ps.t_index)
    coeffs = []
    for j, (w, x) in enumerate(zip(W.coeffs, X.coeffs)):
        vec = ps.to_product(x) if x.comps else MultiVector.zero(ps.n + 2, 1, ps.n + 2, 2)
        if j == 0:
            vec = vec + dt
        coeffs.append(ps.to_product(w) + wedge(vec, ds))
    return LiftedBivector(W, X, as_series(coeffs, W.order))


def _split_ds(ps: ProductSetup, P: MultiVector) -> tuple[MultiVector, MultiVector]:
    """P = A + B ^ d_s with A, B free of d_s, returned over the (theta, t) ring."""
    s = ps.s_index
    a, b = {}, {}
    for idx, f in P.comps.items():
        if f.poly_degree(ps.n + 1) > 0:
            raise ValueError("coefficient depends on s")
        g = _drop_s(f)
        if idx and idx[-1] == s:
            b[idx[:-1]] = g
        else:
            a[idx] = g
    n, dim = ps.n + 2, ps.n + 1

    def mv(comps, degree):
        return MultiVector._raw(n, degree, comps, dim, 1)

    return mv(a, P.degree), mv(b, max(P.degree - 1, 0))


def _drop_s(f: FourierScalar) -> FourierScalar:
    return FourierScalar._raw(f.dim - 1, f.npoly - 1, {k[:-1]: c for k, c in f.terms.items()})


def extract(ps: ProductSetup, lifted: EpsSeries) -> tuple[EpsSeries, EpsSeries]:
    """Recover (W, X) from an assembled lift."""
    Ws, Xs = [], []
    for j, P in enumerate(lifted.coeffs):
        A, B = _split_ds(ps, P)
        if j == 0:
            B = B - MultiVector.basis(ps.n + 2, (ps.t_index,), ps.n + 1, 1)
        if any(ps.t_index in idx for idx in A.comps) or any(ps.t_index in idx for idx in B.comps):
            raise ValueError("not of the lifted form")
        Ws.append(A.reframe(ps.n))
        Xs.append(B.reframe(ps.n) if B.comps else MultiVector.zero(ps.n, 1, ps.n + 1, 1))
    K = lifted.order
    return as_series(Ws, K), as_series(Xs, K)


def _split_series(ps: ProductSetup, R: EpsSeries) -> tuple[EpsSeries, EpsSeries]:
    parts = [_split_ds(ps, P) for P in R.coeffs]
    noS = [a.reframe(ps.n) if not any(ps.t_index in i or ps.s_index in i for i in a.comps) else a
           for a, _ in parts]
    S = [b.reframe(ps.n) if not any(ps.t_index in i for i in b.comps) else b for _, b in parts]
    return as_series(noS, R.order), as_series(S, R.order)


def _product_mc(ps: ProductSetup, Wt: EpsSeries) -> EpsSeries:
    kb = ps.product_brackets
    inst = series_instance(kb.algebra(), lambda d: series_zero(ps.product, d + 2, Wt.order))
    return mc_residual(inst, Wt)


def base_mc_residual(ps: ProductSetup, W: EpsSeries) -> EpsSeries:
    kb = ps.base_brackets
    inst = series_instance(kb.algebra(), lambda d: series_zero(ps.base_t, d + 2, W.order))
    return mc_residual(inst, W)


def gauge_rhs(ps: ProductSetup, W: EpsSeries, X: EpsSeries) -> EpsSeries:
    """l_1(X) + l_2(X, W) + 1/2 l_3(X, W, W)."""
    kb = ps.base_brackets
    inst = series_instance(kb.algebra(), lambda d: series_zero(ps.base_t, d + 2, W.order))
    out = inst.bracket(1, X) + inst.bracket(2, X, W)
    if inst.has(3):
        out = out + inst.bracket(3, X, W, W).scale(FieldElement(1) / 2)
    return out


def square_equivalence_residuals(ps: ProductSetup, lifted: LiftedBivector) -> tuple[EpsSeries, EpsSeries]:
    """Split the product MC residual into its d_s-free part and its d_s coefficient."""
    return _split_series(ps, _product_mc(ps, lifted.assembled))


def koszul_square_residual(ps: ProductSetup, lifted: LiftedBivector) -> tuple[EpsSeries, EpsSeries]:
    """The same split for [Pi~, W~] + 1/2 [W~, W~]."""
    Wt = lifted.assembled
    Pi = ps.product.Pi
    K = Wt.order
    Pis = as_series([Pi], K)
    R = series_schouten(Pis, Wt) + series_schouten(Wt, Wt).scale(FieldElement(1) / 2)
    return _split_series(ps, R)


def koszul_equations(ps: ProductSetup, W: EpsSeries, X: EpsSeries) -> tuple[EpsSeries, EpsSeries]:
    """([Pi, W] + 1/2 [W, W], [Pi + W, X] - dW/dt) on the base."""
    K = W.order
    Pis = as_series([ps.base_t.Pi], K)
    first = series_schouten(Pis, W) + series_schouten(W, W).scale(FieldElement(1) / 2)
    second = series_schouten(Pis + W, X) - d_dt(ps, W)
    return first, second


# block form of the gauge transform on the product

def _sharp_series(S: EpsSeries) -> EpsSeries:
    return EpsSeries([bivector_matrix(c).T for c in S.coeffs], S.order)


def _vec_series(X: EpsSeries) -> EpsSeries:
    return EpsSeries([Matrix([[f] for f in c.vector_components()]) for c in X.coeffs], X.order)


@dataclass
class BlockOperator:
    """Blocks of a map T*M + R dt + R ds -> TM + R d_t + R d_s (eps-series entries).

    top_left: TM <- T*M, top_right: TM <- ds (column), bottom_left: d_s <- T*M (row),
    bottom_right: d_s <- ds.  The remaining entries are the constants of the lifted form.
    """

    top_left: EpsSeries
    top_right: EpsSeries
    bottom_left: EpsSeries
    bottom_right: EpsSeries

    def assemble(self) -> EpsSeries:
        out = []
        for j in range(self.top_left.order + 1):
            tl, tr = self.top_left.coeffs[j], self.top_right.coeffs[j]
            bl, br = self.bottom_left.coeffs[j], self.bottom_right.coeffs[j]
            z = tl.rows[0][0] * 0
            n = tl.nrows
            rows = [list(tl.rows[i]) + [z, tr.rows[i][0]] for i in range(n)]
            rows.append([z] * n + [z, z - 1 if j == 0 else z])
            rows.append(list(bl.rows[0]) + [z + 1 if j == 0 else z, br.rows[0][0]])
            out.append(Matrix(rows))
        return EpsSeries(out, self.top_left.order)


def block_gauge_transform(ps: ProductSetup, lifted: LiftedBivector) -> BlockOperator:
    """Blocks of (W~^gamma~)# from W#, X and gamma alone."""
    W, X = lifted.W, lifted.X
    K = W.order
    flat = ps.base_t.gamma_flat()
    Ws = _sharp_series(W)
    prod = Ws.map(lambda m: flat @ m)
    if not prod.coeffs[0].is_zero():
        raise NonSmallDeformation("the eps^0 part of gamma_flat o W_sharp is nonzero")
    A = series_geometric_inverse(EpsSeries([prod.coeffs[0].identity_like()] + list(prod.coeffs[1:]), K))
    Xc = _vec_series(X)
    gX = Xc.map(lambda m: flat @ m)
    AgX = A @ gX
    top_left = Ws @ A
    top_right = Ws @ AgX - Xc
    Xrow = Xc.map(lambda m: m.T)
    bottom_left = Xrow @ A
    bottom_right = Xrow @ AgX
    return BlockOperator(top_left, top_right, bottom_left, bottom_right)


def direct_product_gauge(ps: ProductSetup, lifted: LiftedBivector) -> EpsSeries:
    """(W~^gamma~)# computed on the product by the generic series formula."""
    G = gauge_transform_series(lifted.assembled, ps.product.gamma)
    return _sharp_series(G)


def blocks_match_direct(ps: ProductSetup, lifted: LiftedBivector) -> bool:
    blocks = block_gauge_transform(ps, lifted).assemble()
    direct = direct_product_gauge(ps, lifted)
    for a, b in zip(blocks.coeffs, direct.coeffs):
        a = a.map(lambda f: f.extend(0, 1))
        if not (a - b).is_zero():
            return False
    return True


# correspondence of the two kinds of families

@dataclass
class HatResult:
    W_hat: EpsSeries
    X_hat: EpsSeries
    gauge_side: tuple[EpsSeries, EpsSeries]  # (MC residual of W, gauge RHS - dW/dt)
    koszul_side: tuple[EpsSeries, EpsSeries]

    @property
    def gauge_ok(self) -> bool:
        return all(r.is_zero() for r in self.gauge_side)

    @property
    def koszul_ok(self) -> bool:
        return all(r.is_zero() for r in self.koszul_side)


def _apply_vec(M: EpsSeries, X: EpsSeries) -> EpsSeries:
    prod = M @ _vec_series(X)
    comps = [MultiVector.vector([r[0] for r in m.rows]) for m in prod.coeffs]
    return as_series(comps, X.order)


def hat_map(ps: ProductSetup, W: EpsSeries, X: EpsSeries) -> tuple[EpsSeries, EpsSeries]:
    """W^ = W^gamma and X^ = (id + W# gamma_flat)^{-1} X."""
    flat = ps.base_t.gamma_flat()
    K = W.order
    W_hat = gauge_transform_series(W, ps.base_t.gamma)
    Ws = _sharp_series(W)
    B = Ws.map(lambda m: m @ flat)
    if not B.coeffs[0].is_zero():
        raise NonSmallDeformation("the eps^0 part of W_sharp o gamma_flat is nonzero")
    inv = series_geometric_inverse(EpsSeries([B.coeffs[0].identity_like()] + list(B.coeffs[1:]), K))
    return W_hat, _apply_vec(inv, X)


def unhat_map(ps: ProductSetup, W_hat: EpsSeries, X_hat: EpsSeries) -> tuple[EpsSeries, EpsSeries]:
    """Inverse of :func:`hat_map`: W = W^^{-gamma}, X = (id + W# gamma_flat) X^."""
    flat = ps.base_t.gamma_flat()
    W = gauge_transform_series(W_hat, -ps.base_t.gamma)
    Ws = _sharp_series(W)
    M = Ws.map(lambda m: m @ flat)
    M = EpsSeries([M.coeffs[0] + M.coeffs[0].identity_like()] + list(M.coeffs[1:]), W.order)
    return W, _apply_vec(M, X_hat)


def hat_correspondence(ps: ProductSetup, W: EpsSeries, X: EpsSeries) -> HatResult:
    W_hat, X_hat = hat_map(ps, W, X)
    gauge_side = (base_mc_residual(ps, W), gauge_rhs(ps, W, X) - d_dt(ps, W))
    koszul_side = koszul_equations(ps, W_hat, X_hat)
    return HatResult(W_hat, X_hat, gauge_side, koszul_side)


def exact_flow_residual(ps: ProductSetup, W_hat: EpsSeries, X_hat: EpsSeries) -> EpsSeries:
    """d/dt Pi_t - [Pi_t, X^] for Pi_t = Pi + W^."""
    K = W_hat.order
    Pit = as_series([ps.base_t.Pi], K) + W_hat
    return d_dt(ps, W_hat) - series_schouten(Pit, X_hat)
