"""Structured analysis reports and their text rendering.

A report is a tree of plain dataclasses that serializes to a JSON-compatible
dict.  The text renderer works from that dict, so both output formats come
from the same data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .groups import (
    DEFAULT_LATTICE_WORK,
    BoundExceeded,
    FiniteAbelianPGroup,
    enumerate_subgroups,
    make_group,
    maximal_subgroups,
)
from .ideals import (
    ALL_PROPER,
    AUDIT_MAX_ORDER,
    MAXIMAL_ONLY,
    LemmaCheck,
    build_transfer_ideal,
    free_rank_prediction,
    policy_audit,
    quotient_report,
    verify_lemma_2_1,
    verify_lemma_2_2,
    verify_prop_2_3,
)
from .intlin import QuotientStructure
from .transchromatic import (
    DEFAULT_MAX_TUPLES,
    FLAT_DESCENT_NOTE,
    TUPLE_IDEAL_ASSUMPTION,
    decomposition_report,
)

SCHEMA_VERSION = "1.0"


@dataclass
class GroupInfo:
    descriptor: str
    prime: int
    exponents: list[int]
    order: int
    rank: int
    cyclic: bool

    @classmethod
    def of(cls, A: FiniteAbelianPGroup) -> GroupInfo:
        return cls(A.descriptor(), A.prime, list(A.exponents), A.order, A.rank, A.is_cyclic)

    def group(self) -> FiniteAbelianPGroup:
        return make_group(self.prime, self.exponents)


@dataclass
class IdealInfo:
    policy: str
    source_count: int
    generator_count: int
    distinct_generator_count: int


@dataclass
class TupleRow:
    entries: list[list[int]]
    subgroup_generators: list[list[int]]
    subgroup_order: int
    quotient: QuotientStructure

    def to_dict(self) -> dict:
        return {
            "entries": self.entries,
            "subgroup_generators": self.subgroup_generators,
            "subgroup_order": self.subgroup_order,
            "quotient": self.quotient.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> TupleRow:
        return cls(
            [list(e) for e in d["entries"]],
            [list(g) for g in d["subgroup_generators"]],
            d["subgroup_order"],
            QuotientStructure.from_dict(d["quotient"]),
        )


@dataclass
class DecompositionSummary:
    height: int
    policy: str
    rows: list[TupleRow]

    @property
    def verdict_p_torsion(self) -> bool:
        return any(r.quotient.p_torsion_present for r in self.rows)

    @property
    def witness_count(self) -> int:
        return sum(r.quotient.p_torsion_present for r in self.rows)

    @property
    def zero_tuple_is_witness(self) -> bool:
        return bool(self.rows) and self.rows[0].quotient.p_torsion_present

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "policy": self.policy,
            "tuple_count": len(self.rows),
            "verdict_p_torsion": self.verdict_p_torsion,
            "witness_count": self.witness_count,
            "zero_tuple_is_witness": self.zero_tuple_is_witness,
            "rows": [r.to_dict() for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DecompositionSummary:
        return cls(d["height"], d["policy"], [TupleRow.from_dict(r) for r in d["rows"]])


@dataclass
class AnalysisReport:
    group: GroupInfo
    subgroup_total: int | None
    maximal_count: int
    ideal: IdealInfo
    quotient: QuotientStructure
    predicted_free_rank: int
    checks: list[LemmaCheck] = field(default_factory=list)
    policy_audit: bool | None = None
    decomposition: DecompositionSummary | None = None
    assumptions: list[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @property
    def fp_algebra(self) -> bool:
        return bool(self.quotient.p_annihilates) and self.quotient.is_nonzero

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "group": vars(self.group).copy(),
            "subgroups": {"total": self.subgroup_total, "maximal": self.maximal_count},
            "ideal": vars(self.ideal).copy(),
            "quotient": self.quotient.to_dict(),
            "predicted_free_rank": self.predicted_free_rank,
            "fp_algebra": self.fp_algebra,
            "checks": [c.to_dict() for c in self.checks],
            "policy_audit": self.policy_audit,
            "decomposition": self.decomposition.to_dict() if self.decomposition else None,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_dict(cls, d: dict) -> AnalysisReport:
        dec = d.get("decomposition")
        return cls(
            group=GroupInfo(**d["group"]),
            subgroup_total=d["subgroups"]["total"],
            maximal_count=d["subgroups"]["maximal"],
            ideal=IdealInfo(**d["ideal"]),
            quotient=QuotientStructure.from_dict(d["quotient"]),
            predicted_free_rank=d["predicted_free_rank"],
            checks=[LemmaCheck(c["name"], c["passed"], c["details"]) for c in d["checks"]],
            policy_audit=d["policy_audit"],
            decomposition=DecompositionSummary.from_dict(dec) if dec else None,
            assumptions=list(d["assumptions"]),
            schema_version=d["schema_version"],
        )


def derived_mismatches(d: dict) -> list[str]:
    """Stored booleans in a serialized report that disagree with a recomputation."""
    rebuilt = AnalysisReport.from_dict(d).to_dict()
    bad = []
    for key in ("fp_algebra",):
        if d[key] != rebuilt[key]:
            bad.append(key)
    for key in ("p_torsion_present", "nonzero", "torsion_is_p_primary"):
        if d["quotient"][key] != rebuilt["quotient"][key]:
            bad.append(f"quotient.{key}")
    if d["decomposition"]:
        for key in ("verdict_p_torsion", "witness_count", "zero_tuple_is_witness", "tuple_count"):
            if d["decomposition"][key] != rebuilt["decomposition"][key]:
                bad.append(f"decomposition.{key}")
    return bad


def _policy_name(policy: str) -> str:
    return {"all-proper": ALL_PROPER, "maximal": MAXIMAL_ONLY}.get(policy, policy)


def summarize_decomposition(A: FiniteAbelianPGroup, height: int, max_tuples: int = DEFAULT_MAX_TUPLES,
                            policy: str = MAXIMAL_ONLY) -> DecompositionSummary:
    rep = decomposition_report(A, height, max_tuples, _policy_name(policy))
    rows = [
        TupleRow(
            [list(a) for a in t.entries],
            [list(g) for g in t.generated_subgroup.generators],
            t.generated_subgroup.order,
            q,
        )
        for t, q in rep.per_tuple.items()
    ]
    return DecompositionSummary(height, rep.policy, rows)


def analyze(A: FiniteAbelianPGroup, policy: str = MAXIMAL_ONLY, height: int | None = None,
            max_tuples: int = DEFAULT_MAX_TUPLES) -> AnalysisReport:
    """Run every applicable check on ``A``.

    With ``height`` set, the per-tuple decomposition at that height is
    attached as well.

    Raises :class:`ValueError` for the trivial group, which has no proper
    subgroups and hence no transfer ideal to speak of.
    """
    if A.order == 1:
        raise ValueError("the trivial group has no proper subgroups")
    policy = _policy_name(policy)
    if A.order ** 2 <= DEFAULT_LATTICE_WORK:
        total = len(enumerate_subgroups(A))
    elif policy == ALL_PROPER:
        raise BoundExceeded(f"subgroup lattice of {A.descriptor()} exceeds the work bound")
    else:
        total = None
    ideal = build_transfer_ideal(A, policy)
    q = quotient_report(A, ideal)
    checks = [verify_lemma_2_1(A)]
    if A.rank == 2 and A.exponents == (1, 1):
        checks.append(verify_lemma_2_2(A.prime))
    if A.rank >= 2:
        checks.append(verify_prop_2_3(A))
    audit = policy_audit(A) if A.order <= AUDIT_MAX_ORDER else None
    decomposition = None
    assumptions = []
    if height is not None:
        decomposition = summarize_decomposition(A, height, max_tuples, policy)
        assumptions = [TUPLE_IDEAL_ASSUMPTION, FLAT_DESCENT_NOTE]
    return AnalysisReport(
        group=GroupInfo.of(A),
        subgroup_total=total,
        maximal_count=len(maximal_subgroups(A)),
        ideal=IdealInfo(
            policy=policy,
            source_count=len(ideal.source_subgroups),
            generator_count=ideal.generator_count,
            distinct_generator_count=int(ideal.distinct_generators().shape[0]),
        ),
        quotient=q,
        predicted_free_rank=free_rank_prediction(A),
        checks=checks,
        policy_audit=audit,
        decomposition=decomposition,
        assumptions=assumptions,
    )


# -- JSON schema --------------------------------------------------------------

_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
_INTS = {"type": "array", "items": _INT}

QUOTIENT_SCHEMA = {
    "type": "object",
    "required": ["prime", "free_rank", "elementary_divisors", "p_torsion_present",
                 "p_annihilates", "nonzero", "torsion_is_p_primary"],
    "properties": {
        "prime": _INT,
        "free_rank": {"type": "integer", "minimum": 0},
        "elementary_divisors": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "p_torsion_present": _BOOL,
        "p_annihilates": {"type": ["boolean", "null"]},
        "nonzero": _BOOL,
        "torsion_is_p_primary": _BOOL,
    },
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "transfer-torsion analysis report",
    "type": "object",
    "required": ["schema_version", "group", "subgroups", "ideal", "quotient", "predicted_free_rank",
                 "fp_algebra", "checks", "policy_audit", "decomposition", "assumptions"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "group": {
            "type": "object",
            "required": ["descriptor", "prime", "exponents", "order", "rank", "cyclic"],
            "properties": {
                "descriptor": {"type": "string", "pattern": r"^\d+\^\d+(x\d+\^\d+)*$"},
                "prime": {"type": "integer", "minimum": 2},
                "exponents": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                "order": {"type": "integer", "minimum": 2},
                "rank": {"type": "integer", "minimum": 1},
                "cyclic": _BOOL,
            },
            "additionalProperties": False,
        },
        "subgroups": {
            "type": "object",
            "required": ["total", "maximal"],
            "properties": {"total": {"type": ["integer", "null"]}, "maximal": _INT},
            "additionalProperties": False,
        },
        "ideal": {
            "type": "object",
            "required": ["policy", "source_count", "generator_count", "distinct_generator_count"],
            "properties": {
                "policy": {"enum": [ALL_PROPER, MAXIMAL_ONLY]},
                "source_count": _INT,
                "generator_count": _INT,
                "distinct_generator_count": _INT,
            },
            "additionalProperties": False,
        },
        "quotient": QUOTIENT_SCHEMA,
        "predicted_free_rank": _INT,
        "fp_algebra": _BOOL,
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed", "details"],
                "properties": {
                    "name": {"enum": ["lemma_2_1", "lemma_2_2", "prop_2_3"]},
                    "passed": _BOOL,
                    "details": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
        "policy_audit": {"type": ["boolean", "null"]},
        "decomposition": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["height", "policy", "tuple_count", "verdict_p_torsion", "witness_count",
                                 "zero_tuple_is_witness", "rows"],
                    "properties": {
                        "height": {"type": "integer", "minimum": 1},
                        "policy": {"enum": [ALL_PROPER, MAXIMAL_ONLY]},
                        "tuple_count": _INT,
                        "verdict_p_torsion": _BOOL,
                        "witness_count": _INT,
                        "zero_tuple_is_witness": _BOOL,
                        "rows": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["entries", "subgroup_generators", "subgroup_order", "quotient"],
                                "properties": {
                                    "entries": {"type": "array", "items": _INTS},
                                    "subgroup_generators": {"type": "array", "items": _INTS},
                                    "subgroup_order": _INT,
                                    "quotient": QUOTIENT_SCHEMA,
                                },
                                "additionalProperties": False,
                            },
                        },
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "assumptions": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}


# -- text rendering -----------------------------------------------------------


def _fmt(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _table(rows: list[tuple[str, ...]], header: tuple[str, ...] | None = None) -> list[str]:
    body = [header] + rows if header else rows
    widths = [max(len(r[i]) for r in body) for i in range(len(body[0]))]
    out = []
    for k, r in enumerate(body):
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if header and k == 0:
            out.append("  ".join("-" * w for w in widths))
    return out


def _tuple_label(entries: list[list[int]]) -> str:
    if not entries:
        return "()"
    return "(" + ", ".join("(" + ",".join(map(str, a)) + ")" for a in entries) + ")"


def render_text(d: dict) -> str:
    g, q = d["group"], d["quotient"]
    lines = [f"group {g['descriptor']}  order {g['order']}  rank {g['rank']}"]
    rows = [
        ("subgroups", _fmt(d["subgroups"]["total"])),
        ("maximal subgroups", _fmt(d["subgroups"]["maximal"])),
        ("ideal policy", d["ideal"]["policy"]),
        ("ideal generators", f"{d['ideal']['generator_count']} ({d['ideal']['distinct_generator_count']} distinct)"),
        ("free rank", f"{q['free_rank']} (predicted {d['predicted_free_rank']})"),
        ("elementary divisors", _fmt(q["elementary_divisors"])),
        ("p-torsion", _fmt(q["p_torsion_present"])),
        ("p in ideal", _fmt(q["p_annihilates"])),
        ("F_p-algebra", _fmt(d["fp_algebra"])),
        ("torsion p-primary", _fmt(q["torsion_is_p_primary"])),
        ("policy audit", _fmt(d["policy_audit"])),
    ]
    rows += [(c["name"], "pass" if c["passed"] else "FAIL") for c in d["checks"]]
    rho = next((c["details"].get("rho") for c in d["checks"] if c["name"] == "prop_2_3"), None)
    if rho is not None:
        rows.append(("rho", _fmt(rho)))
    lines += _table(rows)
    dec = d["decomposition"]
    if dec:
        lines.append("")
        lines.append(
            f"height {dec['height']}: {dec['tuple_count']} tuples, "
            f"p-torsion {_fmt(dec['verdict_p_torsion'])} ({dec['witness_count']} witness{'' if dec['witness_count'] == 1 else 'es'})"
        )
        lines += _table(
            [
                (
                    _tuple_label(r["entries"]),
                    str(r["subgroup_order"]),
                    str(r["quotient"]["free_rank"]),
                    _fmt(r["quotient"]["elementary_divisors"]),
                    _fmt(r["quotient"]["p_torsion_present"]),
                )
                for r in dec["rows"]
            ],
            header=("tuple", "|<t>|", "free", "divisors", "p-torsion"),
        )
    if d["assumptions"]:
        lines.append("")
        lines += [f"note: {a}" for a in d["assumptions"]]
    return "\n".join(lines) + "\n"
