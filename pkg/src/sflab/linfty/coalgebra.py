"""The reduced symmetric coalgebra over a graded basis.

Elements of S(V) are stored as :class:`SymTensor`: a mapping from canonical
basis words (tuples of basis keys sorted by (degree, key)) to coefficients.
Maps S(V) -> S(W) are described by Taylor coefficients, i.e. graded-symmetric
multilinear callables on elements of V.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Hashable, Mapping, Protocol, Sequence

from ..errors import NotPronilpotent
from ..exactnum import ONE, FieldElement
from ..graded import Permutation, koszul_sign, unshuffles


class GradedBasis(Protocol):
    def degree(self, key: Hashable) -> int: ...
    def expand(self, element) -> Mapping[Hashable, FieldElement]: ...
    def element(self, key: Hashable): ...
    def assemble(self, coeffs: Mapping[Hashable, FieldElement], degree: int): ...


class Vec:
    """Homogeneous sparse vector over a finite basis."""

    __slots__ = ("coeffs", "degree")

    def __init__(self, coeffs: Mapping[Hashable, object], degree: int):
        self.coeffs = {k: FieldElement.coerce(c) for k, c in coeffs.items() if c}
        self.degree = degree

    def __add__(self, o: "Vec") -> "Vec":
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return Vec(out, self.degree if self.coeffs else o.degree)

    def __neg__(self) -> "Vec":
        return Vec({k: -c for k, c in self.coeffs.items()}, self.degree)

    def __sub__(self, o: "Vec") -> "Vec":
        return self + (-o)

    def __mul__(self, c) -> "Vec":
        return Vec({k: v * c for k, v in self.coeffs.items()}, self.degree)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, o):
        return isinstance(o, Vec) and self.coeffs == o.coeffs

    def __repr__(self):
        return f"Vec({self.coeffs}, degree={self.degree})"


@dataclass(frozen=True)
class FiniteBasis:
    """Basis keys with fixed degrees; elements are :class:`Vec`."""

    degrees: Mapping[Hashable, int]

    def degree(self, key) -> int:
        return self.degrees[key]

    def expand(self, element: Vec):
        return element.coeffs

    def element(self, key) -> Vec:
        return Vec({key: ONE}, self.degrees[key])

    def assemble(self, coeffs, degree: int) -> Vec:
        return Vec(coeffs, degree)

    def keys(self) -> list:
        return sorted(self.degrees, key=lambda k: (self.degrees[k], k))


def canonical_word(keys: Sequence[Hashable], basis) -> tuple[int, tuple]:
    """Sort a word of basis keys by (degree, key); returns (Koszul sign, sorted word)."""
    degs = [basis.degree(k) for k in keys]
    perm = sorted(range(len(keys)), key=lambda j: (degs[j], keys[j]))
    sign = koszul_sign(perm, degs)
    word = tuple(keys[j] for j in perm)
    for a in range(len(word) - 1):
        if word[a] == word[a + 1] and degs[perm[a]] & 1:
            return 0, word
    return sign, word


class SymTensor:
    """Finite linear combination of canonical basis words."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis, terms: Mapping[tuple, FieldElement] | None = None):
        self.basis = basis
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, basis, elements: Sequence) -> "SymTensor":
        """v_1 . v_2 ... v_n for elements of V, expanded in the basis."""
        expansions = [list(basis.expand(e).items()) for e in elements]
        out: dict[tuple, FieldElement] = {}
        for combo in itertools.product(*expansions):
            keys = [k for k, _ in combo]
            sign, w = canonical_word(keys, basis)
            if not sign:
                continue
            c = ONE
            for _, x in combo:
                c = c * x
            c = c if sign > 0 else -c
            out[w] = out[w] + c if w in out else c
        return cls(basis, out)

    @classmethod
    def from_keys(cls, basis, keys: Sequence[Hashable], coeff=ONE) -> "SymTensor":
        sign, w = canonical_word(list(keys), basis)
        return cls(basis, {w: coeff if sign > 0 else -coeff} if sign else {})

    def add_term(self, w: tuple, c) -> None:
        v = self.terms.get(w)
        s = c if v is None else v + c
        if s:
            self.terms[w] = s
        elif v is not None:
            del self.terms[w]

    def __add__(self, o: "SymTensor") -> "SymTensor":
        out = SymTensor(self.basis, self.terms)
        for w, c in o.terms.items():
            out.add_term(w, c)
        return out

    def __neg__(self) -> "SymTensor":
        return SymTensor(self.basis, {w: -c for w, c in self.terms.items()})

    def __sub__(self, o: "SymTensor") -> "SymTensor":
        return self + (-o)

    def scale(self, c) -> "SymTensor":
        return SymTensor(self.basis, {w: v * c for w, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def lengths(self) -> set[int]:
        return {len(w) for w in self.terms}

    def component(self, n: int) -> "SymTensor":
        return SymTensor(self.basis, {w: c for w, c in self.terms.items() if len(w) == n})

    def linear_part(self, degree: int | None = None):
        """Project to S^1 V and assemble the element."""
        coeffs = {w[0]: c for w, c in self.terms.items() if len(w) == 1}
        if degree is None:
            degree = self.basis.degree(next(iter(coeffs))) if coeffs else 0
        return self.basis.assemble(coeffs, degree)

    def word_degree(self, w: tuple) -> int:
        return sum(self.basis.degree(k) for k in w)

    def __eq__(self, o):
        return isinstance(o, SymTensor) and self.terms == o.terms

    def __repr__(self):
        return f"SymTensor({self.terms})"


def _mul_words(basis, left: SymTensor, right: SymTensor) -> SymTensor:
    """Product in S(V)."""
    out = SymTensor(basis)
    for w1, c1 in left.terms.items():
        for w2, c2 in right.terms.items():
            sign, w = canonical_word(list(w1 + w2), basis)
            if sign:
                c = c1 * c2
                out.add_term(w, c if sign > 0 else -c)
    return out


@dataclass
class TaylorTable:
    """Arity-indexed Taylor coefficients.

    ``coeffs[n](*elements)`` evaluates the n-th coefficient on elements of the
    source; ``degree`` is the total degree of the map.  Evaluations on basis
    words are memoized.
    """

    coeffs: Mapping[int, Callable]
    degree: int
    source: object
    target: object | None = None
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.target is None:
            self.target = self.source

    def arities(self) -> list[int]:
        return sorted(self.coeffs)

    def on_keys(self, n: int, keys: tuple) -> Mapping[Hashable, FieldElement]:
        """Expansion of coeffs[n] on basis elements (keys given in canonical order)."""
        memo_key = (n, keys)
        hit = self._memo.get(memo_key)
        if hit is None:
            value = self.coeffs[n](*(self.source.element(k) for k in keys))
            hit = dict(self.target.expand(value))
            self._memo[memo_key] = hit
        return hit


def coderivation_apply(D: TaylorTable, tensor: SymTensor) -> SymTensor:
    """D(v_1..v_n) = sum_i sum_{sigma in Sh(i,n-i)} eps(sigma;v) D_i(v_sigma(1..i)) . v_sigma(i+1..n)."""
    basis = tensor.basis
    out = SymTensor(basis)
    for w, c in tensor.terms.items():
        n = len(w)
        degs = [basis.degree(k) for k in w]
        for i in D.arities():
            if i > n:
                continue
            for sigma in unshuffles(i, n):
                word = sigma.act(w)
                value = D.on_keys(i, word[:i])
                if not value:
                    continue
                s = koszul_sign(sigma, degs)
                rest = list(word[i:])
                for k, x in value.items():
                    sign, cw = canonical_word([k] + rest, basis)
                    if sign:
                        out.add_term(cw, c * x if sign * s > 0 else -(c * x))
    return out


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def morphism_apply(Phi: TaylorTable, tensor: SymTensor) -> SymTensor:
    """Coalgebra morphism determined by its Taylor coefficients.

    Phi(v_1..v_n) = sum_i sum_{p_1+..+p_i=n} sum_{sigma in S_n}
        eps(sigma;v) / (i! p_1!..p_i!) Phi_{p_1}(..) . ... . Phi_{p_i}(..)
    """
    src = tensor.basis
    tgt = Phi.target
    out = SymTensor(tgt)
    for w, c in tensor.terms.items():
        n = len(w)
        degs = [src.degree(k) for k in w]
        perms = [Permutation(p) for p in itertools.permutations(range(n))]
        for i in range(1, n + 1):
            for ps in _compositions(n, i):
                if any(p not in Phi.coeffs for p in ps):
                    continue
                weight = FieldElement(1) / factorial(i)
                for p in ps:
                    weight = weight / factorial(p)
                for sigma in perms:
                    word = sigma.act(w)
                    s = koszul_sign(sigma, degs)
                    product = SymTensor(tgt, {(): ONE})
                    pos = 0
                    for p in ps:
                        sub = word[pos:pos + p]
                        pos += p
                        sub_sign, sub_sorted = canonical_word(list(sub), src)
                        if not sub_sign:
                            product = SymTensor(tgt)
                            break
                        value = Phi.on_keys(p, sub_sorted)
                        factor = SymTensor(tgt, {(k,): (x if sub_sign > 0 else -x)
                                                 for k, x in value.items()})
                        product = _mul_words(tgt, product, factor)
                        if product.is_zero():
                            break
                    if product.is_zero():
                        continue
                    scal = c * weight if s > 0 else -(c * weight)
                    for pw, pc in product.terms.items():
                        out.add_term(pw, pc * scal)
    return out


def exp_apply(D: TaylorTable, tensor: SymTensor, max_steps: int = 64) -> SymTensor:
    """sum_j D^j / j! applied to a tensor; the sum must terminate."""
    total = tensor
    term = tensor
    for j in range(1, max_steps + 1):
        term = coderivation_apply(D, term).scale(FieldElement(1) / j)
        if term.is_zero():
            return total
        total = total + term
    raise NotPronilpotent("D^j did not vanish on the given word")


def exp_coderivation(D: TaylorTable, bound: int = 4) -> TaylorTable:
    """Taylor coefficients of e^D, i.e. pr_1 e^D restricted to S^n for n <= bound."""
    if D.degree != 0:
        raise ValueError("only degree-0 coderivations exponentiate to coalgebra morphisms")
    basis = D.source

    def make(n):
        def phi(*elements):
            t = SymTensor.word(basis, elements)
            deg = sum(_element_degree(basis, e) for e in elements)
            return exp_apply(D, t).linear_part(deg)
        return phi

    return TaylorTable({n: make(n) for n in range(1, bound + 1)}, 0, basis)


def _element_degree(basis, element) -> int:
    coeffs = basis.expand(element)
    for k in coeffs:
        return basis.degree(k)
    return getattr(element, "degree", 0)


def identity_table(basis) -> TaylorTable:
    return TaylorTable({1: lambda v: v}, 0, basis)


def intertwine_residual(Phi: TaylorTable, Q: TaylorTable, R: TaylorTable, tensor: SymTensor) -> SymTensor:
    """(R o Phi - Phi o Q)(tensor)."""
    left = coderivation_apply(R, morphism_apply(Phi, tensor))
    right = morphism_apply(Phi, coderivation_apply(Q, tensor))
    return left - right


# coproduct and tensor-square operations, used to certify the coalgebra laws

Tensor2 = dict  # (word, word) -> coefficient


def coproduct(tensor: SymTensor) -> Tensor2:
    """Reduced coproduct: sum_{i=1}^{n-1} sum_{Sh(i,n-i)} eps (first i) (x) (rest)."""
    basis = tensor.basis
    out: Tensor2 = {}
    for w, c in tensor.terms.items():
        n = len(w)
        degs = [basis.degree(k) for k in w]
        for i in range(1, n):
            for sigma in unshuffles(i, n):
                word = sigma.act(w)
                s = koszul_sign(sigma, degs)
                key = (word[:i], word[i:])
                v = c if s > 0 else -c
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


def _tensor2_add(acc: Tensor2, key, v) -> None:
    s = acc[key] + v if key in acc else v
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def coderivation_on_tensor2(D: TaylorTable, t: Tensor2) -> Tensor2:
    """(D (x) id + id (x) D) with the Koszul sign (-1)^{|D||a|} on the right factor."""
    basis = D.source
    out: Tensor2 = {}
    for (a, b), c in t.items():
        da = coderivation_apply(D, SymTensor(basis, {a: ONE}))
        for w, x in da.terms.items():
            _tensor2_add(out, (w, b), c * x)
        sign = -1 if (D.degree & 1 and sum(basis.degree(k) for k in a) & 1) else 1
        db = coderivation_apply(D, SymTensor(basis, {b: ONE}))
        for w, x in db.terms.items():
            _tensor2_add(out, (a, w), c * x if sign > 0 else -(c * x))
    return out


def morphism_on_tensor2(Phi: TaylorTable, t: Tensor2) -> Tensor2:
    src = Phi.source
    out: Tensor2 = {}
    for (a, b), c in t.items():
        pa = morphism_apply(Phi, SymTensor(src, {a: ONE}))
        pb = morphism_apply(Phi, SymTensor(src, {b: ONE}))
        for wa, xa in pa.terms.items():
            for wb, xb in pb.terms.items():
                _tensor2_add(out, (wa, wb), c * xa * xb)
    return out


def random_words(rng, basis_keys: Sequence[Hashable], basis, count: int, max_len: int) -> list[SymTensor]:
    """Random canonical basis words of length 1..max_len (zero words skipped)."""
    words = []
    while len(words) < count:
        n = rng.randint(1, max_len)
        keys = [rng.choice(basis_keys) for _ in range(n)]
        t = SymTensor.from_keys(basis, keys, FieldElement(rng.randint(1, 5)))
        if not t.is_zero():
            words.append(t)
    return words
