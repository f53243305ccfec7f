"""The character ring ``Z[S*]`` of a finite abelian p-group.

For abelian groups the representation ring is the group ring of the dual,
so an element is an integer vector indexed by characters.  Elements live on
a *carrier*: either the whole ambient group or one of its subgroups.  The
characters of a subgroup ``S`` are the classes of ``A*`` modulo the
annihilator of ``S``; each class is represented by its lexicographically
smallest character, which is also the lift used by :func:`transfer`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .groups import FiniteAbelianPGroup, Subgroup, maximal_subgroups, make_group

_INT64_SAFE = 2**62


def as_carrier(obj) -> Subgroup:
    if isinstance(obj, Subgroup):
        return obj
    if isinstance(obj, FiniteAbelianPGroup):
        return obj.whole()
    raise TypeError(f"expected a group or subgroup, got {type(obj).__name__}")


@dataclass(frozen=True)
class CharacterBasis:
    carrier: Subgroup
    reps: tuple[int, ...]
    position: np.ndarray  # ambient character index -> basis position

    def __len__(self):
        return len(self.reps)

    def __hash__(self):
        return hash(self.carrier)

    def __eq__(self, other):
        return isinstance(other, CharacterBasis) and self.carrier == other.carrier

    @property
    def characters(self) -> tuple[tuple[int, ...], ...]:
        els = self.carrier.group.elements
        return tuple(els[i] for i in self.reps)


@lru_cache(maxsize=4096)
def character_basis(carrier: Subgroup) -> CharacterBasis:
    G = carrier.group
    if carrier.is_whole:
        pos = np.arange(G.order, dtype=np.int64)
        pos.setflags(write=False)
        return CharacterBasis(carrier, tuple(range(G.order)), pos)
    ann = np.array(carrier.annihilator, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for chi in range(G.order):
        if pos[chi] < 0:
            pos[G.add_table[chi, ann]] = len(reps)
            reps.append(chi)
    pos.setflags(write=False)
    return CharacterBasis(carrier, tuple(reps), pos)


@dataclass(frozen=True)
class CharRingElement:
    """An integer combination of the characters of ``carrier``."""

    carrier: Subgroup
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(map(int, self.coeffs))
        if len(coeffs) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def basis(self) -> CharacterBasis:
        return character_basis(self.carrier)

    @property
    def group(self) -> FiniteAbelianPGroup:
        return self.carrier.group

    def __repr__(self):
        terms = [
            f"{c}*{chi}"
            for c, chi in zip(self.coeffs, self.basis.characters)
            if c
        ]
        return f"CharRingElement({' + '.join(terms) or '0'})"

    def support(self) -> dict[tuple[int, ...], int]:
        return {chi: c for c, chi in zip(self.coeffs, self.basis.characters) if c}

    def augmentation(self) -> int:
        return sum(self.coeffs)

    def _check(self, other: CharRingElement):
        if not isinstance(other, CharRingElement):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        if other.carrier != self.carrier:
            raise ValueError("elements live on different groups")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.scalar(other)
        self._check(other)
        return CharRingElement(self.carrier, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CharRingElement(self.carrier, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CharRingElement(self.carrier, tuple(int(other) * a for a in self.coeffs))
        self._check(other)
        return _convolve(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.one_like()
        for _ in range(k):
            out = out * self
        return out

    def scalar(self, k: int) -> CharRingElement:
        return k * one(self.carrier)

    def one_like(self) -> CharRingElement:
        return one(self.carrier)

    def twist(self, chi: Sequence[int]) -> CharRingElement:
        """Multiply by the single character ``chi`` (a permutation of coefficients)."""
        G = self.group
        b = self.basis
        shift = G.index(chi)
        new = [0] * len(b)
        targets = b.position[G.add_table[shift, list(b.reps)]]
        for t, c in zip(targets.tolist(), self.coeffs):
            new[t] += c
        return CharRingElement(self.carrier, tuple(new))

    def as_vector(self) -> list[int]:
        return list(self.coeffs)


def _convolve(x: CharRingElement, y: CharRingElement) -> CharRingElement:
    b = x.basis
    G = x.group
    xs = [(i, c) for i, c in enumerate(x.coeffs) if c]
    ys = [(j, c) for j, c in enumerate(y.coeffs) if c]
    out = [0] * len(b)
    if not xs or not ys:
        return CharRingElement(x.carrier, tuple(out))
    reps = np.array(b.reps, dtype=np.int64)
    xi = np.array([i for i, _ in xs])
    yj = np.array([j for j, _ in ys])
    target = b.position[G.add_table[np.ix_(reps[xi], reps[yj])]]
    xa = [a for _, a in xs]
    yc = [c for _, c in ys]
    bound = max(map(abs, xa)) * max(map(abs, yc)) * min(len(xs), len(ys))
    if bound < _INT64_SAFE:
        prod = np.multiply.outer(np.array(xa, dtype=np.int64), np.array(yc, dtype=np.int64))
        acc = np.zeros(len(b), dtype=np.int64)
        np.add.at(acc, target.ravel(), prod.ravel())
        return CharRingElement(x.carrier, tuple(acc.tolist()))
    for (i, a), row in zip(xs, target.tolist()):
        for (j, c), t in zip(ys, row):
            out[t] += a * c
    return CharRingElement(x.carrier, tuple(out))


def ring_add(x: CharRingElement, y: CharRingElement) -> CharRingElement:
    return x + y


def ring_mul(x: CharRingElement, y: CharRingElement) -> CharRingElement:
    return x * y


def zero(carrier) -> CharRingElement:
    S = as_carrier(carrier)
    return CharRingElement(S, (0,) * len(character_basis(S)))


def one(carrier) -> CharRingElement:
    return character(carrier, (0,) * as_carrier(carrier).group.rank)


def character(carrier, chi: Sequence[int]) -> CharRingElement:
    """The basis element for (the restriction to ``carrier`` of) ``chi``."""
    S = as_carrier(carrier)
    b = character_basis(S)
    coeffs = [0] * len(b)
    coeffs[int(b.position[S.group.index(chi)])] = 1
    return CharRingElement(S, tuple(coeffs))


def from_coefficients(carrier, coeffs: Iterable[int]) -> CharRingElement:
    return CharRingElement(as_carrier(carrier), tuple(coeffs))


def restrict(x: CharRingElement, sub) -> CharRingElement:
    """Restriction to a subgroup of ``x``'s carrier (a ring map)."""
    T = as_carrier(sub)
    if not T.issubgroup(x.carrier):
        raise ValueError(f"{T} is not a subgroup of {x.carrier}")
    target = character_basis(T)
    new = [0] * len(target)
    for rep, c in zip(target.position[list(x.basis.reps)].tolist(), x.coeffs):
        new[rep] += c
    return CharRingElement(T, tuple(new))


def transfer_unit(ambient, sub) -> CharRingElement:
    """``Tr_sub^ambient(1)``: the sum of characters trivial on ``sub``."""
    S = as_carrier(ambient)
    T = as_carrier(sub)
    if not T.issubgroup(S):
        raise ValueError(f"{T} is not a subgroup of {S}")
    b = character_basis(S)
    coeffs = T.annihilator_mask[list(b.reps)].astype(np.int64)
    return CharRingElement(S, tuple(coeffs.tolist()))


def lift(y: CharRingElement, ambient, strategy: str = "smallest") -> CharRingElement:
    """A section of :func:`restrict` from ``y.carrier`` up to ``ambient``.

    ``"smallest"`` sends each character to the lexicographically smallest
    character restricting to it; ``"largest"`` to the largest.
    """
    S = as_carrier(ambient)
    T = y.carrier
    if not T.issubgroup(S):
        raise ValueError(f"{T} is not a subgroup of {S}")
    G = S.group
    up = character_basis(S)
    new = [0] * len(up)
    if strategy == "smallest":
        chosen = list(y.basis.reps)
    elif strategy == "largest":
        ann = np.array(T.annihilator, dtype=np.int64)
        chosen = [int(G.add_table[r, ann].max()) for r in y.basis.reps]
    else:
        raise ValueError(f"unknown lift strategy {strategy!r}")
    for k, c in zip(up.position[chosen].tolist(), y.coeffs):
        new[k] += c
    return CharRingElement(S, tuple(new))


def transfer(y: CharRingElement, ambient, strategy: str = "smallest") -> CharRingElement:
    """Induction ``Tr_{y.carrier}^{ambient}``.

    By the projection formula this is ``lift(y) * Tr(1)`` for any section
    ``lift`` of restriction; the result does not depend on the section.
    """
    return lift(y, ambient, strategy) * transfer_unit(ambient, y.carrier)


def lemma22_witness(p: int) -> CharRingElement:
    """``sum_i Tr_{V_i}(1) - Tr_0(1)`` over the lines ``V_i`` of ``(Z/p)^2``.

    The result is ``p`` times the unit.
    """
    A = make_group(p, [1, 1])
    total = zero(A)
    for V in maximal_subgroups(A):
        total = total + transfer_unit(A, V)
    return total - transfer_unit(A, A.trivial_subgroup())


def to_cyclic_polynomial(x: CharRingElement) -> list[int]:
    """Coefficients in ``Z[t]/(t^N - 1)`` where ``t`` is the character ``(1)``.

    Only defined for elements over a whole cyclic group.
    """
    if not (x.group.is_cyclic and x.carrier.is_whole):
        raise ValueError("cyclic presentation needs a whole cyclic group")
    return list(x.coeffs)


def from_cyclic_polynomial(G: FiniteAbelianPGroup, poly: Sequence[int]) -> CharRingElement:
    if not G.is_cyclic:
        raise ValueError("cyclic presentation needs a cyclic group")
    N = G.order
    coeffs = [0] * N
    for k, c in enumerate(poly):
        coeffs[k % N] += c
    return CharRingElement(G.whole(), tuple(coeffs))
