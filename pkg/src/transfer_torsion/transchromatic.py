"""Height-``n`` bookkeeping over the tuples ``A^(n-1)``.

After a faithfully flat base change the height-``n`` quotient splits into
one K-theoretic factor ``Z[A*]/I^(t)`` per tuple ``t`` of ``n-1`` elements.
Torsion is detected factorwise, so the verdict is the disjunction of the
factors' ``p``-torsion flags.

Only the zero tuple's ideal is pinned down (all proper subgroups).  For
other tuples we use the transfers from proper subgroups *containing* the
subgroup generated by the tuple; :data:`TUPLE_IDEAL_ASSUMPTION` is carried
in every report and :func:`tuple_ideal` is the single place to change it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .groups import (
    BoundExceeded,
    Element,
    FiniteAbelianPGroup,
    Subgroup,
    generated_subgroup,
    maximal_subgroups,
    proper_subgroups,
)
from .ideals import ALL_PROPER, MAXIMAL_ONLY, TransferIdeal, quotient_report
from .intlin import QuotientStructure

DEFAULT_MAX_TUPLES = 100_000

TUPLE_IDEAL_ASSUMPTION = (
    "I_tr^(t) for a nonzero tuple t is modeled as the ideal generated by "
    "transfers from proper subgroups containing the subgroup generated by t; "
    "only the zero tuple's ideal is pinned down by the theory."
)

FLAT_DESCENT_NOTE = (
    "Base change to a faithfully flat Z_p-algebra preserves and reflects "
    "p-torsion, and the height-n quotient becomes a product of one K-theoretic "
    "factor per tuple; so p-torsion in any factor gives p-torsion at height n."
)


@dataclass(frozen=True)
class LoopTuple:
    group: FiniteAbelianPGroup
    entries: tuple[Element, ...]

    @cached_property
    def generated_subgroup(self) -> Subgroup:
        return generated_subgroup(self.group, self.entries)

    @property
    def is_zero(self) -> bool:
        return all(not any(a) for a in self.entries)


def enumerate_tuples(A: FiniteAbelianPGroup, n: int, max_tuples: int = DEFAULT_MAX_TUPLES) -> list[LoopTuple]:
    if n < 1:
        raise ValueError("height must be >= 1")
    count = A.order ** (n - 1)
    if count > max_tuples:
        raise BoundExceeded(f"|A|^(n-1) = {count} tuples exceeds the bound {max_tuples}")
    return [LoopTuple(A, t) for t in itertools.product(A.elements, repeat=n - 1)]


def tuple_ideal(A: FiniteAbelianPGroup, t: LoopTuple, policy: str = ALL_PROPER) -> TransferIdeal:
    """Transfer ideal attached to ``t``.

    With ``policy="maximal_only"`` only the maximal subgroups containing
    the tuple are used; by transitivity of transfer this spans the same
    lattice and is much cheaper.
    """
    S = t.generated_subgroup
    if policy == ALL_PROPER:
        candidates = proper_subgroups(A)
    elif policy == MAXIMAL_ONLY:
        candidates = maximal_subgroups(A)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    sources = tuple(H for H in candidates if S.issubgroup(H))
    return TransferIdeal(A, sources, policy)


@dataclass
class DecompositionReport:
    group: FiniteAbelianPGroup
    height: int
    per_tuple: dict[LoopTuple, QuotientStructure]
    policy: str = MAXIMAL_ONLY
    assumptions: list[str] = field(default_factory=lambda: [TUPLE_IDEAL_ASSUMPTION, FLAT_DESCENT_NOTE])

    @property
    def verdict_p_torsion(self) -> bool:
        return any(q.p_torsion_present for q in self.per_tuple.values())

    @property
    def witnesses(self) -> list[LoopTuple]:
        return [t for t, q in self.per_tuple.items() if q.p_torsion_present]

    @property
    def zero_tuple(self) -> LoopTuple:
        return next(iter(self.per_tuple))


def decomposition_report(
    A: FiniteAbelianPGroup,
    n: int,
    max_tuples: int = DEFAULT_MAX_TUPLES,
    policy: str = MAXIMAL_ONLY,
) -> DecompositionReport:
    """Per-tuple quotient structures, in lexicographic tuple order."""
    tuples = enumerate_tuples(A, n, max_tuples)
    # the factor only depends on the generated subgroup
    cache: dict[Subgroup, QuotientStructure] = {}
    per_tuple = {}
    for t in tuples:
        S = t.generated_subgroup
        if S not in cache:
            cache[S] = quotient_report(A, tuple_ideal(A, t, policy))
        per_tuple[t] = cache[S]
    return DecompositionReport(A, n, per_tuple, policy)
