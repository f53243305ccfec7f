"""Exact integer linear algebra: Smith/Hermite normal forms and quotients.

Matrices are numpy arrays.  Work starts in ``int64`` and every elementary
update checks an a-priori bound on the result; when the bound could exceed
``_INT64_SAFE`` the working arrays are promoted to ``object`` dtype (Python
integers) and the computation continues unchanged.  No floating point is
used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

_INT64_SAFE = 2**62


def as_int_matrix(rows, ncols: int | None = None) -> np.ndarray:
    """Convert nested sequences (or an array) to an exact 2-D integer array."""
    if isinstance(rows, np.ndarray):
        arr = rows
    else:
        rows = [list(r) for r in rows]
        if not rows:
            return np.zeros((0, ncols or 0), dtype=np.int64)
        arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        if arr.size == 0:
            return np.zeros((0, ncols or 0), dtype=np.int64)
        raise ValueError("expected a rectangular 2-D integer matrix")
    if ncols is not None and arr.shape[1] != ncols:
        raise ValueError(f"expected {ncols} columns, got {arr.shape[1]}")
    if arr.dtype == object:
        if any(not isinstance(x, (int, np.integer)) for x in arr.flat):
            raise TypeError("matrix entries must be integers")
        big = max((abs(int(x)) for x in arr.flat), default=0)
        if big < _INT64_SAFE:
            return arr.astype(np.int64)
        return np.vectorize(int, otypes=[object])(arr)
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError("matrix entries must be integers")
    return arr.astype(np.int64)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


class _Workspace:
    """Arrays updated together; promoted to Python ints as one unit."""

    def __init__(self, **arrays):
        self.names = list(arrays)
        self.__dict__.update(arrays)
        self.dtype = np.int64 if all(a.dtype != object for a in arrays.values()) else object
        if self.dtype is object:
            self._promote()

    def _promote(self):
        for name in self.names:
            arr = getattr(self, name)
            if arr.dtype != object:
                setattr(self, name, arr.astype(object))
        self.dtype = object

    def ensure(self, bound: int):
        if self.dtype is not object and bound >= _INT64_SAFE:
            self._promote()


def _pivot_min_abs(block: np.ndarray):
    """Position of a nonzero entry of smallest absolute value, or None."""
    nz = np.argwhere(block != 0)
    if len(nz) == 0:
        return None
    vals = np.abs(block[nz[:, 0], nz[:, 1]])
    k = int(np.argmin(vals))
    return int(nz[k, 0]), int(nz[k, 1])


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    def __iter__(self):
        return iter((self.U, self.D, self.V))


def smith_normal_form(M) -> SmithForm:
    """Smith normal form with transforms.

    Classical elimination with a minimal-absolute-value pivot.  Diagonal
    entries are non-negative and each divides the next; zeros trail.
    """
    A = as_int_matrix(M)
    m, n = A.shape
    ws = _Workspace(A=A.copy(), U=np.eye(m, dtype=np.int64), V=np.eye(n, dtype=np.int64))
    if A.dtype == object:
        ws._promote()
    t = 0
    while t < min(m, n):
        pos = _pivot_min_abs(ws.A[t:, t:])
        if pos is None:
            break
        _swap(ws, t, t + pos[0], t, t + pos[1])
        while True:
            piv = ws.A[t, t]
            col = ws.A[t + 1 :, t]
            row = ws.A[t, t + 1 :]
            if np.any(col != 0):
                rows = t + 1 + np.flatnonzero(col)
                q = _floordiv(ws.A[rows, t], piv)
                _row_update(ws, rows, q, t)
            if np.any(row != 0):
                cols = t + 1 + np.flatnonzero(ws.A[t, t + 1 :])
                q = _floordiv(ws.A[t, cols], piv)
                _col_update(ws, cols, q, t)
            col = ws.A[t + 1 :, t]
            row = ws.A[t, t + 1 :]
            if np.any(col != 0) or np.any(row != 0):
                # remainders are smaller than the pivot: move the smallest in
                cand = [(abs(int(v)), t + 1 + i, t) for i, v in enumerate(col) if v != 0]
                cand += [(abs(int(v)), t, t + 1 + j) for j, v in enumerate(row) if v != 0]
                _, i, j = min(cand)
                _swap(ws, t, i, t, j)
                continue
            rest = ws.A[t + 1 :, t + 1 :]
            bad = np.argwhere(rest % piv != 0) if rest.size else []
            if len(bad):
                # enforce divisibility: fold an offending row into row t
                i = t + 1 + int(bad[0][0])
                ws.ensure(_maxabs(ws.A[t]) + _maxabs(ws.A[i]))
                ws.ensure(_maxabs(ws.U[t]) + _maxabs(ws.U[i]))
                ws.A[t] = ws.A[t] + ws.A[i]
                ws.U[t] = ws.U[t] + ws.U[i]
                continue
            break
        if ws.A[t, t] < 0:
            ws.A[t] = -ws.A[t]
            ws.U[t] = -ws.U[t]
        t += 1
    return SmithForm(ws.U, ws.A, ws.V)


def _floordiv(values: np.ndarray, piv) -> np.ndarray:
    return values // piv


def _swap(ws: _Workspace, r0, r1, c0, c1):
    if r0 != r1:
        ws.A[[r0, r1]] = ws.A[[r1, r0]]
        ws.U[[r0, r1]] = ws.U[[r1, r0]]
    if c0 != c1:
        ws.A[:, [c0, c1]] = ws.A[:, [c1, c0]]
        ws.V[:, [c0, c1]] = ws.V[:, [c1, c0]]


def _row_update(ws: _Workspace, rows, q, src):
    # rows -= q * src  (applied to A and U)
    qa = _maxabs(q)
    ws.ensure(_maxabs(ws.A[rows]) + qa * _maxabs(ws.A[src]))
    ws.ensure(_maxabs(ws.U[rows]) + qa * _maxabs(ws.U[src]))
    q = q.astype(ws.dtype)
    ws.A[rows] -= q[:, None] * ws.A[src][None, :]
    ws.U[rows] -= q[:, None] * ws.U[src][None, :]


def _col_update(ws: _Workspace, cols, q, src):
    qa = _maxabs(q)
    ws.ensure(_maxabs(ws.A[:, cols]) + qa * _maxabs(ws.A[:, src]))
    ws.ensure(_maxabs(ws.V[:, cols]) + qa * _maxabs(ws.V[:, src]))
    q = q.astype(ws.dtype)
    ws.A[:, cols] -= ws.A[:, src][:, None] * q[None, :]
    ws.V[:, cols] -= ws.V[:, src][:, None] * q[None, :]


def is_smith_normal_form(D) -> bool:
    D = as_int_matrix(D)
    m, n = D.shape
    k = min(m, n)
    off = D.copy()
    for i in range(k):
        off[i, i] = 0
    if np.any(off != 0):
        return False
    diag = [int(D[i, i]) for i in range(k)]
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a != 0:
            return False
    return True


def determinant(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in as_int_matrix(M).tolist()]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# -- row lattices -----------------------------------------------------------


_LADDER = [(np.int8, 2**7 - 1), (np.int16, 2**15 - 1), (np.int32, 2**31 - 1), (np.int64, _INT64_SAFE)]


def _fit(A: np.ndarray, bound: int) -> np.ndarray:
    """Narrowest dtype holding every value up to ``bound`` in magnitude."""
    for dt, limit in _LADDER:
        if bound <= limit:
            return A if A.dtype == dt else A.astype(dt)
    return A if A.dtype == object else A.astype(object)


def hermite_normal_form(generators, n: int | None = None) -> np.ndarray:
    """Row-style Hermite normal form of the lattice spanned by ``generators``.

    Returns a ``(rank, n)`` array: pivots strictly move right, pivot entries
    are positive, and entries above a pivot lie in ``[0, pivot)``.  The
    working dtype is widened whenever the running entry bound requires it.
    """
    A = as_int_matrix(generators, n)
    ncols = A.shape[1]
    if A.shape[0]:
        A = unique_rows(A)
        A = A[np.any(A != 0, axis=1)]
    bound = _maxabs(A)
    A = _fit(A.copy(), bound)
    r = 0
    pivots = []
    for j in range(ncols):
        if r >= A.shape[0]:
            break
        while True:
            nz = r + np.flatnonzero(A[r:, j])
            if len(nz) == 0:
                break
            k = nz[np.argmin(np.abs(A[nz, j]))]
            if k != r:
                A[[r, k]] = A[[k, r]]
                nz = r + np.flatnonzero(A[r:, j])
            others = nz[nz != r]
            if len(others) == 0:
                break
            q = A[others, j] // A[r, j]
            bound += _maxabs(q) * bound
            A = _fit(A, bound)
            A[others] -= q.astype(A.dtype)[:, None] * A[r][None, :]
        if A[r, j] != 0:
            if A[r, j] < 0:
                A[r] = -A[r]
            pivots.append(j)
            r += 1
            if len(pivots) % 4 == 0:
                tail = A[r:]
                keep = np.any(tail != 0, axis=1)
                if not keep.all():
                    A = np.concatenate([A[:r], tail[keep]])
                bound = max(_maxabs(A), 1)
    H = A[:r]
    H = H.astype(np.int64) if H.dtype != object else H
    # reduce entries above each pivot into [0, pivot)
    for i, j in enumerate(pivots):
        if i == 0:
            continue
        q = H[:i, j] // H[i, j]
        if np.any(q != 0):
            big = _maxabs(H[:i]) + _maxabs(q) * _maxabs(H[i])
            if big >= _INT64_SAFE and H.dtype != object:
                H = H.astype(object)
                q = q.astype(object)
            H[:i] -= q[:, None] * H[i][None, :]
    return H


def unique_rows(A: np.ndarray) -> np.ndarray:
    """Distinct rows of ``A`` (order not preserved)."""
    if A.dtype == object or A.shape[0] < 2:
        return A
    A = np.ascontiguousarray(A)
    keys = A.view(np.dtype((np.void, A.dtype.itemsize * A.shape[1]))).ravel()
    _, first = np.unique(keys, return_index=True)
    return A[np.sort(first)]


def _pivot_columns(H: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in H]


def reduce_modulo(H: np.ndarray, vectors) -> np.ndarray:
    """Reduce each row of ``vectors`` by the HNF basis ``H``.

    A vector lies in the lattice iff its reduction is zero.
    """
    V = as_int_matrix(vectors, H.shape[1] if H.ndim == 2 else None)
    if H.dtype == object or V.dtype == object:
        V = V.astype(object)
        H = H.astype(object)
    ws = _Workspace(V=V.copy())
    for row, j in zip(H, _pivot_columns(H)):
        q = ws.V[:, j] // row[j]
        if np.any(q != 0):
            ws.ensure(_maxabs(ws.V) + _maxabs(q) * _maxabs(row))
            ws.V -= q.astype(ws.dtype)[:, None] * row.astype(ws.dtype)[None, :]
    return ws.V


def lattice_contains(n: int, generators, v: Sequence[int]) -> bool:
    """Whether ``v`` is an integer combination of ``generators`` in ``Z^n``."""
    if len(v) != n:
        raise ValueError(f"vector has length {len(v)}, expected {n}")
    H = hermite_normal_form(generators, n)
    return bool(not np.any(reduce_modulo(H, [list(v)]) != 0))


def lattice_contains_all(H: np.ndarray, vectors) -> np.ndarray:
    """Boolean membership of each row of ``vectors`` in the lattice of ``H``."""
    R = reduce_modulo(H, vectors)
    return ~np.any(R != 0, axis=1)


# -- quotients --------------------------------------------------------------


@dataclass(frozen=True)
class QuotientStructure:
    """``Z^n / L`` as ``Z^free_rank + sum Z/d_i`` (divisors ``>= 2``)."""

    prime: int
    free_rank: int
    elementary_divisors: tuple[int, ...] = ()
    p_annihilates: bool | None = None

    def __post_init__(self):
        ds = tuple(int(d) for d in self.elementary_divisors)
        object.__setattr__(self, "elementary_divisors", ds)
        if any(d < 2 for d in ds):
            raise ValueError("elementary divisors must be >= 2")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError(f"{ds} is not a divisibility chain")

    @property
    def p_torsion_present(self) -> bool:
        if self.prime < 2:
            return False
        return any(d % self.prime == 0 for d in self.elementary_divisors)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.elementary_divisors:
            out *= d
        return out

    @property
    def is_nonzero(self) -> bool:
        return self.free_rank > 0 or bool(self.elementary_divisors)

    @property
    def torsion_is_p_primary(self) -> bool:
        """Whether every elementary divisor is a power of the prime."""
        p = self.prime
        if p < 2:
            return not self.elementary_divisors
        for d in self.elementary_divisors:
            while d % p == 0:
                d //= p
            if d != 1:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "free_rank": self.free_rank,
            "elementary_divisors": list(self.elementary_divisors),
            "p_torsion_present": self.p_torsion_present,
            "p_annihilates": self.p_annihilates,
            "nonzero": self.is_nonzero,
            "torsion_is_p_primary": self.torsion_is_p_primary,
        }

    @classmethod
    def from_dict(cls, d: dict) -> QuotientStructure:
        return cls(
            prime=d["prime"],
            free_rank=d["free_rank"],
            elementary_divisors=tuple(d["elementary_divisors"]),
            p_annihilates=d["p_annihilates"],
        )


def quotient_structure(n: int, generators, prime: int = 0) -> QuotientStructure:
    """Structure of ``Z^n`` modulo the span of ``generators``.

    The generators are first reduced to an HNF basis (the quotient depends
    only on the row lattice) and the basis is then put in Smith form.
    ``prime`` only selects which torsion counts as ``p``-torsion.
    """
    return quotient_from_hnf(hermite_normal_form(generators, n), prime)


def quotient_from_hnf(H: np.ndarray, prime: int = 0, p_annihilates: bool | None = None) -> QuotientStructure:
    """Quotient structure from a reduced HNF basis ``H``.

    In a reduced HNF a pivot equal to 1 is the only nonzero entry of its
    column, so that row and column split off a trivial summand; only the
    remaining block goes through Smith form.
    """
    n = H.shape[1]
    rank = H.shape[0]
    pivots = _pivot_columns(H)
    keep_rows = [i for i, j in enumerate(pivots) if H[i, j] != 1]
    unit_cols = {j for i, j in enumerate(pivots) if H[i, j] == 1}
    keep_cols = [j for j in range(n) if j not in unit_cols]
    core = H[np.ix_(keep_rows, keep_cols)]
    diag = smith_normal_form(core).diagonal if core.size else []
    divisors = tuple(d for d in diag if d > 1)
    return QuotientStructure(
        prime=prime,
        free_rank=n - rank,
        elementary_divisors=divisors,
        p_annihilates=p_annihilates,
    )
