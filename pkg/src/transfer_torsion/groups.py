"""Finite abelian p-groups, their Pontryagin duals and subgroup lattices.

A group ``Z/p^e1 x ... x Z/p^er`` is stored by its prime and the sorted
exponent list.  Elements and dual characters are both coordinate tuples and
are enumerated in lexicographic order, so an element's position in
``group.elements`` doubles as its integer index in every table below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

Element = tuple[int, ...]

#: Default ceiling on ``|A|**2`` for subgroup-lattice work.
DEFAULT_LATTICE_WORK = 2**16


class BoundExceeded(ValueError):
    """A configured size bound would be exceeded."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FiniteAbelianPGroup:
    """The group ``Z/p^e1 x ... x Z/p^er`` with ``e1 >= ... >= er >= 1``."""

    prime: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if not self.exponents:
            raise ValueError("exponent list must be non-empty")
        if any(int(e) < 1 for e in self.exponents):
            raise ValueError(f"exponents must be >= 1, got {list(self.exponents)}")
        normalized = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        object.__setattr__(self, "exponents", normalized)

    def __repr__(self):
        return f"FiniteAbelianPGroup({self.descriptor()!r})"

    def descriptor(self) -> str:
        return "x".join(f"{self.prime}^{e}" for e in self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def factor_orders(self) -> tuple[int, ...]:
        return tuple(self.prime**e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.prime ** sum(self.exponents)

    @property
    def exponent(self) -> int:
        return self.prime ** self.exponents[0]

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    # -- element tables ---------------------------------------------------

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(m) for m in self.factor_orders)))

    @cached_property
    def _strides(self) -> np.ndarray:
        orders = self.factor_orders
        strides = [1] * len(orders)
        for i in range(len(orders) - 2, -1, -1):
            strides[i] = strides[i + 1] * orders[i + 1]
        return np.array(strides, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """``(|A|, r)`` array of element coordinates in enumeration order."""
        arr = np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank)
        arr.setflags(write=False)
        return arr

    def index(self, a: Sequence[int]) -> int:
        a = self.normalize(a)
        return int(sum(x * s for x, s in zip(a, self._strides.tolist())))

    def normalize(self, a: Sequence[int]) -> Element:
        if len(a) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(a)}")
        return tuple(int(x) % m for x, m in zip(a, self.factor_orders))

    def _index_array(self, coords: np.ndarray) -> np.ndarray:
        orders = np.array(self.factor_orders, dtype=np.int64)
        return (coords % orders) @ self._strides

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``elements[i] + elements[j]``."""
        c = self.coords
        table = self._index_array(c[:, None, :] + c[None, :, :])
        table.setflags(write=False)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        table = self._index_array(-self.coords)
        table.setflags(write=False)
        return table

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return self.normalize([x + y for x, y in zip(a, b)])

    def neg(self, a: Sequence[int]) -> Element:
        return self.normalize([-x for x in a])

    def scale(self, k: int, a: Sequence[int]) -> Element:
        return self.normalize([k * x for x in a])

    def element_order(self, a: Sequence[int]) -> int:
        a = self.normalize(a)
        order = 1
        for x, m in zip(a, self.factor_orders):
            if x:
                order = max(order, m // np.gcd(x, m))
        return int(order)

    @cached_property
    def order_table(self) -> np.ndarray:
        orders = np.array(self.factor_orders, dtype=np.int64)
        per_coord = orders // np.gcd(self.coords, orders)
        table = per_coord.max(axis=1)
        table.setflags(write=False)
        return table

    # -- duality ----------------------------------------------------------

    def dual(self) -> FiniteAbelianPGroup:
        """The Pontryagin dual, identified with a group of the same shape."""
        return FiniteAbelianPGroup(self.prime, self.exponents)

    @property
    def characters(self) -> tuple[Element, ...]:
        return self.elements

    @cached_property
    def _pairing_weights(self) -> np.ndarray:
        e1 = self.exponents[0]
        return np.array([self.prime ** (e1 - e) for e in self.exponents], dtype=np.int64)

    def pairing(self, chi: Sequence[int], a: Sequence[int]) -> int:
        """Exponent ``k`` with ``chi(a) = zeta^k``, ``zeta`` a primitive
        ``exponent``-th root of unity."""
        chi = self.normalize(chi)
        a = self.normalize(a)
        w = self._pairing_weights.tolist()
        return sum(c * x * wi for c, x, wi in zip(chi, a, w)) % self.exponent

    @cached_property
    def pairing_table(self) -> np.ndarray:
        """``pairing_table[chi, a]`` over character and element indices."""
        c = self.coords
        table = ((c * self._pairing_weights) @ c.T) % self.exponent
        table.setflags(write=False)
        return table

    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)))

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, (0,))


def make_group(p: int, exponents: Iterable[int]) -> FiniteAbelianPGroup:
    return FiniteAbelianPGroup(int(p), tuple(exponents))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``group``, identified by its sorted element indices."""

    group: FiniteAbelianPGroup
    indices: tuple[int, ...]

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Subgroup(<{gens}> in {self.group.descriptor()}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    @property
    def elements(self) -> tuple[Element, ...]:
        els = self.group.elements
        return tuple(els[i] for i in self.indices)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[list(self.indices)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def _index_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    def __contains__(self, a) -> bool:
        return self.group.index(a) in self._index_set

    def contains_index(self, i: int) -> bool:
        return i in self._index_set

    def issubgroup(self, other: Subgroup) -> bool:
        return self.group == other.group and self._index_set <= other._index_set

    @property
    def is_whole(self) -> bool:
        return self.order == self.group.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def exponent(self) -> int:
        return int(self.group.order_table[list(self.indices)].max())

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """A minimal generating set.

        Lifts a basis of ``S / pS`` (Burnside basis theorem), preferring
        elements of large order.
        """
        G = self.group
        p = G.prime
        frattini = {G.index(G.scale(p, a)) for a in self.elements}
        span = _closure_indices(G, frattini)
        orders = G.order_table
        candidates = sorted(self.indices, key=lambda i: (-int(orders[i]), i))
        gens: list[Element] = []
        for i in candidates:
            if len(span) == self.order:
                break
            if i not in span:
                gens.append(G.elements[i])
                span = _closure_indices(G, span | {i})
        return tuple(gens)

    @cached_property
    def annihilator_mask(self) -> np.ndarray:
        """Boolean mask over character indices: trivial on this subgroup."""
        P = self.group.pairing_table[:, list(self.indices)]
        mask = ~P.any(axis=1)
        mask.setflags(write=False)
        return mask

    @property
    def annihilator(self) -> tuple[int, ...]:
        """Indices of the characters trivial on this subgroup."""
        return tuple(int(i) for i in np.flatnonzero(self.annihilator_mask))

    def intersection(self, other: Subgroup) -> Subgroup:
        _check_same(self, other)
        return Subgroup(self.group, tuple(sorted(self._index_set & other._index_set)))

    def join(self, other: Subgroup) -> Subgroup:
        _check_same(self, other)
        return Subgroup(self.group, tuple(sorted(_closure_indices(self.group, self._index_set | other._index_set))))


def _check_same(h: Subgroup, k: Subgroup):
    if h.group != k.group:
        raise ValueError("subgroups of different ambient groups")


def _closure_indices(G: FiniteAbelianPGroup, seeds) -> set[int]:
    """Indices of the subgroup generated by the given element indices."""
    current = {0}
    table = G.add_table
    for s in seeds:
        if s in current:
            continue
        frontier = list(current)
        new = set(current)
        # add multiples of s until we cycle back into the subgroup
        step = s
        while step not in current:
            for x in frontier:
                new.add(int(table[x, step]))
            step = int(table[step, s])
        current = new
    return current


def generated_subgroup(G: FiniteAbelianPGroup, elements: Iterable[Sequence[int]]) -> Subgroup:
    seeds = [G.index(a) for a in elements]
    return Subgroup(G, tuple(sorted(_closure_indices(G, seeds))))


def _check_lattice_bound(G: FiniteAbelianPGroup, max_work: int):
    if G.order**2 > max_work:
        raise BoundExceeded(
            f"subgroup enumeration of {G.descriptor()} needs |A|^2 = {G.order**2} > {max_work}"
        )


@lru_cache(maxsize=64)
def _subgroup_masks(G: FiniteAbelianPGroup) -> tuple[bytes, ...]:
    # Breadth-first over orders: every subgroup of order p^(k+1) contains one
    # of order p^k with index p, so extending each S by elements g with
    # p*g in S reaches the whole lattice.
    n = G.order
    p = G.prime
    sub = G.add_table[:, G.neg_table]  # sub[a, g] = a - g
    times_p = np.zeros(n, dtype=np.int64)
    for _ in range(p):
        times_p = G.add_table[times_p, np.arange(n)]
    start = np.zeros(n, dtype=bool)
    start[0] = True
    seen = {start.tobytes(): start}
    layer = [start]
    while layer:
        nxt = []
        for S in layer:
            covered = S.copy()
            for g in np.flatnonzero(S[times_p] & ~S):
                if covered[g]:
                    continue
                T = S.copy()
                shift = g
                for _ in range(p - 1):
                    T |= S[sub[:, shift]]
                    shift = G.add_table[shift, g]
                covered |= T
                key = T.tobytes()
                if key not in seen:
                    seen[key] = T
                    nxt.append(T)
        layer = nxt
    return tuple(seen)


def enumerate_subgroups(G: FiniteAbelianPGroup, max_work: int = DEFAULT_LATTICE_WORK) -> list[Subgroup]:
    """All subgroups of ``G``, sorted by order and then by element list."""
    _check_lattice_bound(G, max_work)
    return list(_all_subgroups(G))


@lru_cache(maxsize=64)
def _all_subgroups(G: FiniteAbelianPGroup) -> tuple[Subgroup, ...]:
    subs = [
        Subgroup(G, tuple(int(i) for i in np.flatnonzero(np.frombuffer(key, dtype=bool))))
        for key in _subgroup_masks(G)
    ]
    subs.sort(key=lambda s: (s.order, s.indices))
    return tuple(subs)


def maximal_subgroups(G: FiniteAbelianPGroup) -> list[Subgroup]:
    return list(_maximal_subgroups(G))


@lru_cache(maxsize=256)
def _maximal_subgroups(G: FiniteAbelianPGroup) -> tuple[Subgroup, ...]:
    """The index-``p`` subgroups, i.e. kernels of nonzero maps ``G -> Z/p``.

    Computed directly from the dual: a maximal subgroup is the kernel of a
    character of order ``p``, and characters generating the same order-``p``
    subgroup of the dual share a kernel.
    """
    if G.order == 1:
        raise ValueError("the trivial group has no maximal subgroups")
    p = G.prime
    order_p = np.flatnonzero(G.order_table == p)
    seen = set()
    result = []
    for chi in order_p:
        kernel = np.flatnonzero(G.pairing_table[chi] == 0)
        key = kernel.tobytes()
        if key in seen:
            continue
        seen.add(key)
        result.append(Subgroup(G, tuple(int(i) for i in kernel)))
    result.sort(key=lambda s: s.indices)
    return tuple(result)


def proper_subgroups(G: FiniteAbelianPGroup, max_work: int = DEFAULT_LATTICE_WORK) -> list[Subgroup]:
    return [S for S in enumerate_subgroups(G, max_work) if not S.is_whole]


def partitions(k: int, largest: int | None = None):
    """Partitions of ``k`` as non-increasing tuples."""
    if k == 0:
        yield ()
        return
    largest = k if largest is None else largest
    for first in range(min(k, largest), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def abelian_p_groups(p: int, max_order: int, min_order: int = 2) -> list[FiniteAbelianPGroup]:
    """Every nontrivial abelian ``p``-group with order in the given range.

    Ordered by order, then by exponent list (descending).
    """
    out = []
    k = 1
    while p**k <= max_order:
        if p**k >= min_order:
            out.extend(FiniteAbelianPGroup(p, part) for part in partitions(k))
        k += 1
    return out


# -- surjections onto (Z/p)^m ---------------------------------------------


@dataclass(frozen=True)
class Surjection:
    """A homomorphism ``A -> (Z/p)^m`` given by an integer matrix.

    ``a`` maps to ``(sum_j matrix[i][j] * a_j mod p)_i``; this is well
    defined because every factor order of ``A`` is divisible by ``p``.
    """

    source: FiniteAbelianPGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = self.source.prime
        rows = tuple(tuple(int(x) % p for x in row) for row in self.matrix)
        if not rows or any(len(row) != self.source.rank for row in rows):
            raise ValueError("surjection matrix must be m x rank(A) with m >= 1")
        object.__setattr__(self, "matrix", rows)
        if len(set(self.image_indices())) != self.target.order:
            raise ValueError(f"matrix {[list(r) for r in rows]} does not define a surjection")

    @property
    def target(self) -> FiniteAbelianPGroup:
        return FiniteAbelianPGroup(self.source.prime, (1,) * len(self.matrix))

    def __call__(self, a: Sequence[int]) -> Element:
        a = self.source.normalize(a)
        p = self.source.prime
        return tuple(sum(m * x for m, x in zip(row, a)) % p for row in self.matrix)

    def image_indices(self) -> np.ndarray:
        M = np.array(self.matrix, dtype=np.int64)
        images = (self.source.coords @ M.T) % self.source.prime
        return self.target._index_array(images)


def default_surjection(G: FiniteAbelianPGroup) -> Surjection:
    """Project the two largest cyclic factors onto ``(Z/p)^2``."""
    if G.rank < 2:
        raise ValueError(f"{G.descriptor()} has rank {G.rank}; need rank >= 2")
    rows = [[1 if j == i else 0 for j in range(G.rank)] for i in range(2)]
    return Surjection(G, tuple(map(tuple, rows)))


def preimage_subgroup(rho: Surjection, H: Subgroup) -> Subgroup:
    if H.group != rho.target:
        raise ValueError("H is not a subgroup of the surjection's codomain")
    if H.is_whole:
        raise ValueError("H must be a proper subgroup")
    images = rho.image_indices()
    members = np.flatnonzero(H.mask[images])
    return Subgroup(rho.source, tuple(int(i) for i in members))
