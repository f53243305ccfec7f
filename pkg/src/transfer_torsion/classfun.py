"""Cyclotomic integers, class functions and the character map.

Every character value of ``A`` lies in ``Z[zeta]`` with ``zeta`` a primitive
``exponent(A)``-th root of unity, so class functions take values there.  A
cyclotomic integer of level ``p^e`` is an integer vector of length
``phi(p^e)`` in the power basis, i.e. a residue modulo the cyclotomic
polynomial ``Phi_{p^e}(x) = sum_{j<p} x^(j p^(e-1))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .charring import CharRingElement, as_carrier, character_basis
from .groups import Subgroup
from .intlin import determinant

_INT64_SAFE = 2**62


def totient(p: int, e: int) -> int:
    return (p - 1) * p ** (e - 1)


@lru_cache(maxsize=None)
def power_table(p: int, e: int) -> np.ndarray:
    """Row ``k`` holds ``zeta^k`` in the power basis, for ``0 <= k < p^e``."""
    N = p**e
    phi = totient(p, e)
    m = p ** (e - 1)
    Z = np.zeros((N, phi), dtype=np.int64)
    for k in range(phi):
        Z[k, k] = 1
    # x^((p-1)m + r) = -sum_{j<p-1} x^(jm + r)
    for k in range(phi, N):
        r = k - phi
        for j in range(p - 1):
            Z[k, j * m + r] = -1
    Z.setflags(write=False)
    return Z


def _reduce(p: int, e: int, poly: Sequence[int]) -> tuple[int, ...]:
    """Reduce an integer polynomial modulo ``Phi_{p^e}``."""
    N = p**e
    phi = totient(p, e)
    m = p ** (e - 1)
    wrapped = [0] * N
    for k, c in enumerate(poly):
        wrapped[k % N] += int(c)
    out = wrapped[:phi]
    for k in range(phi, N):
        c = wrapped[k]
        if c:
            r = k - phi
            for j in range(p - 1):
                out[j * m + r] -= c
    return tuple(out)


@dataclass(frozen=True)
class CyclotomicInteger:
    """An element of ``Z[zeta_{p^e}]``."""

    prime: int
    exp: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.exp < 1:
            raise ValueError("level exponent must be >= 1")
        coeffs = tuple(int(c) for c in self.coeffs)
        phi = totient(self.prime, self.exp)
        if len(coeffs) != phi:
            coeffs = _reduce(self.prime, self.exp, coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def level(self) -> int:
        return self.prime**self.exp

    @classmethod
    def from_int(cls, p: int, e: int, n: int) -> CyclotomicInteger:
        return cls(p, e, (n,) + (0,) * (totient(p, e) - 1))

    @classmethod
    def zeta(cls, p: int, e: int, k: int = 1) -> CyclotomicInteger:
        return cls(p, e, tuple(power_table(p, e)[k % p**e].tolist()))

    def _coerce(self, other) -> CyclotomicInteger:
        if isinstance(other, (int, np.integer)):
            return CyclotomicInteger.from_int(self.prime, self.exp, int(other))
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        if (other.prime, other.exp) != (self.prime, self.exp):
            raise ValueError(
                f"level mismatch: {self.level} vs {other.level}; use raise_level first"
            )
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicInteger(self.prime, self.exp, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.prime, self.exp, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return CyclotomicInteger(self.prime, self.exp, _reduce(self.prime, self.exp, prod))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CyclotomicInteger.from_int(self.prime, self.exp, 1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_divisible_by(self, n: int) -> bool:
        # the power basis is a Z-basis of Z[zeta]
        return all(c % n == 0 for c in self.coeffs)

    def exact_div(self, n: int) -> CyclotomicInteger:
        if not self.is_divisible_by(n):
            raise ValueError(f"{self} is not divisible by {n}")
        return CyclotomicInteger(self.prime, self.exp, tuple(c // n for c in self.coeffs))

    def raise_level(self, new_exp: int) -> CyclotomicInteger:
        """Embed along ``zeta_{p^a} -> zeta_{p^b}^(p^(b-a))``."""
        if new_exp < self.exp:
            raise ValueError("can only raise the level")
        step = self.prime ** (new_exp - self.exp)
        poly = [0] * (len(self.coeffs) * step)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return CyclotomicInteger(self.prime, new_exp, _reduce(self.prime, new_exp, poly))

    def multiplication_matrix(self) -> list[list[int]]:
        """Matrix of ``y -> self * y`` on the power basis (columns = images)."""
        phi = len(self.coeffs)
        cols = [
            (self * CyclotomicInteger.zeta(self.prime, self.exp, k)).coeffs
            for k in range(phi)
        ]
        return [[cols[j][i] for j in range(phi)] for i in range(phi)]

    def norm(self) -> int:
        """Field norm to ``Z``, the determinant of multiplication."""
        return determinant(self.multiplication_matrix())


def cyclo_add(u: CyclotomicInteger, v: CyclotomicInteger) -> CyclotomicInteger:
    return u + v


def cyclo_mul(u: CyclotomicInteger, v: CyclotomicInteger) -> CyclotomicInteger:
    return u * v


# -- class functions --------------------------------------------------------


def _exact_matmul(a: np.ndarray, b: np.ndarray, bound: int) -> np.ndarray:
    if bound < _INT64_SAFE:
        return a.astype(np.int64, copy=False) @ b.astype(np.int64, copy=False)
    return a.astype(object) @ b.astype(object)


def _maxabs(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


@lru_cache(maxsize=None)
def _shift_matrices(p: int, e: int) -> tuple[np.ndarray, ...]:
    """``M_i`` with ``v @ M_i`` = ``zeta^i * v`` on power-basis rows."""
    Z = power_table(p, e)
    N, phi = Z.shape
    return tuple(Z[[(i + k) % N for k in range(phi)]] for i in range(phi))


class ClassFunction:
    """A function ``carrier -> Z[zeta]`` stored as a ``(|S|, phi)`` table.

    Row ``i`` is the value at ``carrier.elements[i]``.
    """

    __slots__ = ("carrier", "exp", "table")

    def __init__(self, carrier, table, exp: int | None = None):
        S = as_carrier(carrier)
        G = S.group
        self.carrier = S
        self.exp = G.exponents[0] if exp is None else exp
        arr = np.asarray(table)
        if arr.dtype != object:
            arr = arr.astype(np.int64)
        phi = totient(G.prime, self.exp)
        if arr.shape != (S.order, phi):
            raise ValueError(f"table shape {arr.shape} != {(S.order, phi)}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.table = arr

    @property
    def prime(self) -> int:
        return self.carrier.group.prime

    @classmethod
    def constant(cls, carrier, n: int) -> ClassFunction:
        S = as_carrier(carrier)
        G = S.group
        phi = totient(G.prime, G.exponents[0])
        table = np.zeros((S.order, phi), dtype=object if abs(n) >= _INT64_SAFE else np.int64)
        table[:, 0] = n
        return cls(S, table)

    @classmethod
    def from_values(cls, carrier, values: Sequence[CyclotomicInteger]) -> ClassFunction:
        S = as_carrier(carrier)
        return cls(S, np.array([v.coeffs for v in values], dtype=object))

    def value(self, a: Sequence[int]) -> CyclotomicInteger:
        G = self.carrier.group
        i = self.carrier.indices.index(G.index(a))
        return CyclotomicInteger(G.prime, self.exp, tuple(int(x) for x in self.table[i]))

    def values(self) -> dict[tuple[int, ...], CyclotomicInteger]:
        return {a: self.value(a) for a in self.carrier.elements}

    def __repr__(self):
        return f"ClassFunction(on {self.carrier}, level {self.prime ** self.exp})"

    def _check(self, other):
        if not isinstance(other, ClassFunction):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        if other.carrier != self.carrier or other.exp != self.exp:
            raise ValueError("class functions on different domains")

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.exp == other.exp
            and bool(np.all(self.table == other.table))
        )

    def __hash__(self):
        return hash((self.carrier, self.exp, tuple(map(int, self.table.flat))))

    def __add__(self, other):
        self._check(other)
        bound = _maxabs(self.table) + _maxabs(other.table)
        dt = object if bound >= _INT64_SAFE else None
        return ClassFunction(self.carrier, _as(self.table, dt) + _as(other.table, dt), self.exp)

    def __neg__(self):
        return ClassFunction(self.carrier, -self.table, self.exp)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            bound = _maxabs(self.table) * abs(int(other))
            dt = object if bound >= _INT64_SAFE else None
            return ClassFunction(self.carrier, _as(self.table, dt) * int(other), self.exp)
        self._check(other)
        f, g = self.table, other.table
        phi = f.shape[1]
        bound = phi * phi * _maxabs(f) * _maxabs(g)
        obj = bound >= _INT64_SAFE or f.dtype == object or g.dtype == object
        dt = object if obj else np.int64
        f, g = f.astype(dt), g.astype(dt)
        out = np.zeros(f.shape, dtype=dt)
        for i, M in enumerate(_shift_matrices(self.prime, self.exp)):
            col = f[:, i]
            if np.any(col != 0):
                out = out + col[:, None] * (g @ M.astype(dt))
        return ClassFunction(self.carrier, out, self.exp)

    __rmul__ = __mul__


def _as(a: np.ndarray, dtype):
    return a if dtype is None else a.astype(dtype)


@lru_cache(maxsize=16)
def _character_matrix(carrier: Subgroup) -> np.ndarray:
    """``(|S| * phi, #chars)``: column ``k`` is basis character ``k``'s values."""
    G = carrier.group
    b = character_basis(carrier)
    Z = power_table(G.prime, G.exponents[0])
    P = G.pairing_table[np.ix_(list(b.reps), list(carrier.indices))]  # (chars, |S|)
    vals = Z[P]  # (chars, |S|, phi)
    M = np.ascontiguousarray(vals.transpose(1, 2, 0).reshape(-1, len(b)))
    M.setflags(write=False)
    return M


def character_map(x: CharRingElement) -> ClassFunction:
    """``a -> sum_chi x_chi * chi(a)``, an injective ring homomorphism."""
    S = x.carrier
    G = S.group
    M = _character_matrix(S)
    big = max(x.coeffs, default=0), -min(x.coeffs, default=0)
    bound = max(big) * len(x.coeffs)
    c = np.array(x.coeffs, dtype=np.int64 if bound < _INT64_SAFE else object)
    values = _exact_matmul(M, c, bound)
    phi = totient(G.prime, G.exponents[0])
    return ClassFunction(S, values.reshape(S.order, phi))


def class_transfer(f: ClassFunction, ambient) -> ClassFunction:
    """Induction of class functions from ``f.carrier`` up to ``ambient``.

    For abelian groups the averaging formula collapses to
    ``[S : T] * f(a)`` on ``T`` and ``0`` off ``T``.
    """
    S = as_carrier(ambient)
    T = f.carrier
    if not T.issubgroup(S):
        raise ValueError(f"{T} is not a subgroup of {S}")
    k = S.order // T.order
    dt = object if _maxabs(f.table) * k >= _INT64_SAFE else f.table.dtype
    table = np.zeros((S.order, f.table.shape[1]), dtype=dt)
    rows = np.searchsorted(np.array(S.indices), np.array(T.indices))
    table[rows] = f.table.astype(dt) * k
    return ClassFunction(S, table, f.exp)


# -- ideal images in the class-function model -------------------------------


@dataclass(frozen=True)
class ValueLattice:
    """A sublattice of ``prod_{a in S} Z[zeta]`` given by spanning vectors.

    Row ``v`` flattens a class function: ``v[i*phi:(i+1)*phi]`` is the value
    at ``carrier.elements[i]``.
    """

    carrier: Subgroup
    exp: int
    vectors: np.ndarray

    @property
    def phi(self) -> int:
        return totient(self.carrier.group.prime, self.exp)

    @property
    def dimension(self) -> int:
        return self.carrier.order * self.phi

    def projection_at(self, a: Sequence[int]) -> list[CyclotomicInteger]:
        """The generators' components in the factor at ``a``."""
        G = self.carrier.group
        i = self.carrier.indices.index(G.index(a))
        block = self.vectors[:, i * self.phi : (i + 1) * self.phi]
        return [CyclotomicInteger(G.prime, self.exp, tuple(map(int, row))) for row in block]

    def projection_divisible_by(self, a: Sequence[int], n: int) -> bool:
        return all(v.is_divisible_by(n) for v in self.projection_at(a))


def classfun_ideal_image(ambient, generators: Sequence[ClassFunction], cyclotomic: bool = True) -> ValueLattice:
    """Spanning set of the ideal generated by ``generators`` over the
    character image.

    Spans the products ``character_map(chi) * g``; with ``cyclotomic`` the
    span is also taken over ``Z[zeta]`` acting by constants.
    """
    S = as_carrier(ambient)
    G = S.group
    exp = G.exponents[0]
    phi = totient(G.prime, exp)
    rows = []
    b = character_basis(S)
    chars = [character_map(CharRingElement(S, tuple(int(i == k) for i in range(len(b))))) for k in range(len(b))]
    shifts = _shift_matrices(G.prime, exp) if cyclotomic else (None,)
    for g in generators:
        if g.carrier != S:
            raise ValueError("generator lives on a different group")
        for chi in chars:
            prod = (chi * g).table
            for M in shifts:
                t = prod if M is None else prod @ M.astype(prod.dtype)
                rows.append(t.reshape(-1))
    if rows:
        vectors = np.unique(np.array(rows), axis=0) if rows[0].dtype != object else np.array(rows)
    else:
        vectors = np.zeros((0, S.order * phi), dtype=np.int64)
    vectors.setflags(write=False)
    return ValueLattice(S, exp, vectors)
