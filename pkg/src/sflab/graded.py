"""Sign bookkeeping for graded algebra.

Permutations act on words by  sigma . (w_1, ..., w_n) = (w_sigma(1), ..., w_sigma(n)).
The Koszul sign eps(sigma; v) is defined by
    v_sigma(1) * ... * v_sigma(n) = eps(sigma; v) v_1 * ... * v_n
in the graded symmetric algebra.  Internally permutations are 0-based.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Callable, Hashable, Sequence

from .errors import BadArity, LengthMismatch


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation of 0..{len(images) - 1}")
        self.images = images

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        return cls([x - 1 for x in images])

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __iter__(self):
        return iter(self.images)

    def act(self, word: Sequence) -> tuple:
        """sigma . w = (w[sigma(0)], ..., w[sigma(n-1)])."""
        if len(word) != len(self.images):
            raise LengthMismatch(f"word of length {len(word)} vs permutation of {len(self)}")
        return tuple(word[j] for j in self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Product matching the action: (sigma * tau) . w = sigma . (tau . w)."""
        if len(other) != len(self):
            raise LengthMismatch("permutations of different sizes")
        return Permutation([other.images[j] for j in self.images])

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def sign(self) -> int:
        return koszul_sign(self, [1] * len(self.images))

    def __eq__(self, o):
        return isinstance(o, Permutation) and self.images == o.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def koszul_sign(sigma: Permutation | Sequence[int], degs: Sequence[int]) -> int:
    """eps(sigma; v), computed by sorting sigma . v back with adjacent transpositions."""
    images = list(sigma.images if isinstance(sigma, Permutation) else sigma)
    if len(images) != len(degs):
        raise LengthMismatch(f"permutation of size {len(images)} vs {len(degs)} degrees")
    sign = 1
    n = len(images)
    for end in range(n - 1, 0, -1):
        for j in range(end):
            if images[j] > images[j + 1]:
                if degs[images[j]] & 1 and degs[images[j + 1]] & 1:
                    sign = -sign
                images[j], images[j + 1] = images[j + 1], images[j]
    return sign


def unshuffles(i: int, n: int) -> list[Permutation]:
    """All (i, n-i)-unshuffles: increasing on the first i and on the last n-i slots."""
    if not 1 <= i <= n:
        raise BadArity(f"need 1 <= i <= n, got i={i}, n={n}")
    return [Permutation(head + tuple(j for j in range(n) if j not in head))
            for head in itertools.combinations(range(n), i)]


def unshuffle_count(i: int, n: int) -> int:
    return comb(n, i)


def decalage_sign(k: int, degs: Sequence[int]) -> int:
    """-(-1)^k (-1)^{sum_i (k-i)|v_i|}, i counted from 1."""
    if len(degs) != k:
        raise LengthMismatch(f"{len(degs)} degrees for arity {k}")
    exponent = k + 1 + sum((k - i) * d for i, d in enumerate(degs, start=1))
    return -1 if exponent & 1 else 1


class SymWord:
    """A word of homogeneous handles in the graded symmetric algebra.

    ``order`` gives the sort key of a handle; the canonical form sorts stably by
    (degree, order(handle)) and records the Koszul sign of the sort.  A word
    containing the same odd handle twice is zero (sign 0).
    """

    __slots__ = ("items", "degrees")

    def __init__(self, items: Sequence[Hashable], degrees: Sequence[int]):
        if len(items) != len(degrees):
            raise LengthMismatch("items and degrees differ in length")
        self.items = tuple(items)
        self.degrees = tuple(degrees)

    def __len__(self):
        return len(self.items)

    def canonical(self, order: Callable[[Hashable], object] = lambda h: h) -> tuple[int, "SymWord"]:
        keys = [(d, order(h)) for h, d in zip(self.items, self.degrees)]
        perm = sorted(range(len(keys)), key=keys.__getitem__)
        sign = koszul_sign(perm, self.degrees)
        items = tuple(self.items[j] for j in perm)
        degrees = tuple(self.degrees[j] for j in perm)
        for a in range(len(items) - 1):
            if degrees[a] & 1 and items[a] == items[a + 1] and degrees[a + 1] == degrees[a]:
                sign = 0
                break
        return sign, SymWord(items, degrees)

    def permuted(self, sigma: Permutation) -> "SymWord":
        return SymWord(sigma.act(self.items), sigma.act(self.degrees))

    def __eq__(self, o):
        return isinstance(o, SymWord) and self.items == o.items and self.degrees == o.degrees

    def __hash__(self):
        return hash((self.items, self.degrees))

    def __repr__(self):
        return f"SymWord({list(self.items)}, degrees={list(self.degrees)})"
