"""Transfer ideals in ``Z[A*]`` and the structure of the quotient ring.

An ideal is kept as the integer lattice spanned by the character twists
``chi * Tr_{A'}^A(1)`` of its ring generators.  Since ``Z[A*]`` has the
characters as a Z-basis, that lattice *is* the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
import numpy as np

from . import charring
from .classfun import CyclotomicInteger, character_map
from .groups import (
    FiniteAbelianPGroup,
    Subgroup,
    Surjection,
    default_surjection,
    make_group,
    maximal_subgroups,
    preimage_subgroup,
    proper_subgroups,
)
from .intlin import (
    QuotientStructure,
    hermite_normal_form,
    lattice_contains_all,
    quotient_from_hnf,
    unique_rows,
)

ALL_PROPER = "all_proper"
MAXIMAL_ONLY = "maximal_only"
EXPLICIT = "explicit"

#: Groups up to this order get the maximal-vs-all-proper audit.
AUDIT_MAX_ORDER = 81


@dataclass(frozen=True)
class TransferIdeal:
    """The ideal generated by ``Tr_{A'}^A(1)`` for ``A'`` in ``source_subgroups``."""

    ambient: FiniteAbelianPGroup
    source_subgroups: tuple[Subgroup, ...]
    policy: str = EXPLICIT

    def __post_init__(self):
        for S in self.source_subgroups:
            if S.group != self.ambient:
                raise ValueError(f"{S} is not a subgroup of {self.ambient.descriptor()}")

    @property
    def generator_vectors(self) -> list[tuple[int, ...]]:
        """``chi * Tr_{A'}(1)`` for every character ``chi`` and source ``A'``.

        Twists that coincide are listed repeatedly, one per ``chi``.
        """
        G = self.ambient
        diff = G.add_table[:, G.neg_table]  # diff[psi, chi] = psi - chi
        out = []
        for S in self.source_subgroups:
            base = S.annihilator_mask.astype(np.int64)
            out.extend(map(tuple, base[diff].T.tolist()))
        return out

    @property
    def generator_count(self) -> int:
        return len(self.source_subgroups) * self.ambient.order

    def distinct_generators(self) -> np.ndarray:
        """One row per distinct twist: ``chi`` runs over ``A*/Ann(A')``."""
        G = self.ambient
        diff = G.add_table[:, G.neg_table]
        blocks = []
        for S in self.source_subgroups:
            reps = list(charring.character_basis(S).reps)
            base = S.annihilator_mask.astype(np.int64)
            blocks.append(base[diff[:, reps]].T)
        if not blocks:
            return np.zeros((0, G.order), dtype=np.int64)
        return unique_rows(np.concatenate(blocks))

    @cached_property
    def hnf(self) -> np.ndarray:
        return hermite_normal_form(self.distinct_generators(), self.ambient.order)

    def contains(self, x) -> bool:
        vec = x.coeffs if isinstance(x, charring.CharRingElement) else x
        return bool(lattice_contains_all(self.hnf, [list(vec)])[0])

    def same_lattice(self, other: TransferIdeal) -> bool:
        """Mutual containment of generators."""
        if other.ambient != self.ambient:
            return False
        return bool(
            lattice_contains_all(self.hnf, other.distinct_generators()).all()
            and lattice_contains_all(other.hnf, self.distinct_generators()).all()
        )

    def __hash__(self):
        return hash((self.ambient, self.source_subgroups))


def build_transfer_ideal(A: FiniteAbelianPGroup, policy=MAXIMAL_ONLY) -> TransferIdeal:
    """``policy`` is ``"all_proper"``, ``"maximal_only"`` or a list of subgroups."""
    if isinstance(policy, str):
        if A.order == 1:
            raise ValueError("the trivial group has no proper subgroups")
        if policy == ALL_PROPER:
            sources = proper_subgroups(A)
        elif policy == MAXIMAL_ONLY:
            sources = maximal_subgroups(A)
        else:
            raise ValueError(f"unknown policy {policy!r}")
        return TransferIdeal(A, tuple(sources), policy)
    return TransferIdeal(A, tuple(policy), EXPLICIT)


def unit_vector(A: FiniteAbelianPGroup, scale: int = 1) -> list[int]:
    v = [0] * A.order
    v[0] = scale
    return v


def quotient_report(A: FiniteAbelianPGroup, ideal: TransferIdeal | None = None) -> QuotientStructure:
    """``Z[A*] / I`` as an abelian group, with ``p_annihilates`` set."""
    if ideal is None:
        ideal = build_transfer_ideal(A)
    return _quotient(ideal)


@lru_cache(maxsize=1024)
def _quotient(ideal: TransferIdeal) -> QuotientStructure:
    A = ideal.ambient
    H = ideal.hnf
    p_in = bool(lattice_contains_all(H, [unit_vector(A, A.prime)])[0]) if H.shape[0] else False
    return quotient_from_hnf(H, A.prime, p_annihilates=p_in)


def free_rank_prediction(A: FiniteAbelianPGroup) -> int:
    """Number of elements generating ``A`` (none unless ``A`` is cyclic)."""
    return int(np.sum(A.order_table == A.order))


def policy_audit(A: FiniteAbelianPGroup) -> bool:
    """Maximal-only and all-proper ideals span the same lattice."""
    return build_transfer_ideal(A, MAXIMAL_ONLY).same_lattice(build_transfer_ideal(A, ALL_PROPER))


# -- lemma checks -----------------------------------------------------------


@dataclass
class LemmaCheck:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def verify_lemma_2_1(A: FiniteAbelianPGroup) -> LemmaCheck:
    """The quotient by the transfer ideal is a nonzero ring."""
    q = quotient_report(A)
    details = {"group": A.descriptor(), "quotient": q.to_dict()}
    if not A.is_cyclic:
        # the factor at 0 of the class-function model only sees multiples of p
        values = [
            character_map(charring.transfer_unit(A, V)).value((0,) * A.rank)
            for V in maximal_subgroups(A)
        ]
        details["values_at_zero_divisible_by_p"] = all(v.is_divisible_by(A.prime) for v in values)
    passed = q.is_nonzero and details.get("values_at_zero_divisible_by_p", True)
    return LemmaCheck("lemma_2_1", bool(passed), details)


def verify_lemma_2_2(p: int) -> LemmaCheck:
    """``p`` lies in the transfer ideal of ``(Z/p)^2``."""
    A = make_group(p, [1, 1])
    witness = charring.lemma22_witness(p)
    identity_holds = witness == p * charring.one(A)
    total = charring.zero(A)
    for V in maximal_subgroups(A):
        total = total + charring.transfer_unit(A, V)
    f = character_map(total)
    zero_value = f.value((0, 0))
    others = [f.value(a) for a in A.elements[1:]]
    values_ok = zero_value == CyclotomicInteger.from_int(p, 1, p * p + p) and all(
        v == CyclotomicInteger.from_int(p, 1, p) for v in others
    )
    q = quotient_report(A)
    passed = identity_holds and values_ok and bool(q.p_annihilates) and q.is_nonzero
    details = {
        "group": A.descriptor(),
        "identity_holds": identity_holds,
        "class_function_values_ok": values_ok,
        "p_annihilates": q.p_annihilates,
        "quotient": q.to_dict(),
    }
    return LemmaCheck("lemma_2_2", bool(passed), details)


def verify_prop_2_3(A: FiniteAbelianPGroup, rho: Surjection | None = None) -> LemmaCheck:
    """Pull ``(Z/p)^2``'s transfer ideal back along ``rho``; ``p`` lands in it."""
    if A.rank < 2:
        raise ValueError(f"{A.descriptor()} has rank {A.rank}; need rank >= 2")
    if rho is None:
        rho = default_surjection(A)
    if rho.source != A or rho.target.rank != 2:
        raise ValueError("rho must be a surjection from A onto (Z/p)^2")
    preimages = [preimage_subgroup(rho, H) for H in proper_subgroups(rho.target)]
    all_proper = all(not S.is_whole for S in preimages)
    pulled = build_transfer_ideal(A, preimages)
    p_in_pulled = pulled.contains(unit_vector(A, A.prime))
    q = quotient_report(A)
    passed = all_proper and p_in_pulled and bool(q.p_annihilates)
    details = {
        "group": A.descriptor(),
        "rho": [list(row) for row in rho.matrix],
        "preimages_proper": all_proper,
        "p_in_pulled_back_ideal": p_in_pulled,
        "p_annihilates": q.p_annihilates,
    }
    return LemmaCheck("prop_2_3", bool(passed), details)
