"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from contextlib import contextmanager

from .groups import (
    BoundExceeded,
    FiniteAbelianPGroup,
    abelian_p_groups,
    enumerate_subgroups,
    is_prime,
    make_group,
)
from .ideals import (
    AUDIT_MAX_ORDER,
    free_rank_prediction,
    policy_audit,
    quotient_report,
    verify_lemma_2_1,
    verify_lemma_2_2,
    verify_prop_2_3,
)
from .report import analyze, render_text
from .transchromatic import DEFAULT_MAX_TUPLES, decomposition_report

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BOUND = 3

DEFAULT_MAX_ORDER = 256
VERIFY_MAX_ORDER = 128

_FACTOR = re.compile(r"^(\d+)\^(\d+)$")


class DescriptorError(ValueError):
    pass


def parse_group(text: str) -> FiniteAbelianPGroup:
    """Parse ``p^e(xp^e)*``, e.g. ``2^2x2^1`` for ``Z/4 x Z/2``."""
    factors = [f.strip() for f in text.strip().split("x")]
    primes, exponents = [], []
    for f in factors:
        m = _FACTOR.match(f)
        if not m:
            raise DescriptorError(f"bad factor {f!r} in {text!r}: expected p^e, e.g. 2^1x2^1")
        p, e = int(m.group(1)), int(m.group(2))
        if not is_prime(p):
            raise DescriptorError(f"{p} is not prime (factor {f!r})")
        if e < 1:
            raise DescriptorError(f"exponent must be >= 1 (factor {f!r})")
        primes.append(p)
        exponents.append(e)
    if len(set(primes)) > 1:
        raise DescriptorError(
            f"{text!r} mixes the primes {sorted(set(primes))}; only abelian p-groups "
            "(one prime throughout) are supported, since the transfer ideal theory is p-local"
        )
    return make_group(primes[0], exponents)


def _parse_primes(text: str) -> list[int]:
    try:
        primes = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise DescriptorError(f"bad prime list {text!r}") from None
    bad = [p for p in primes if not is_prime(p)]
    if bad or not primes:
        raise DescriptorError(f"bad prime list {text!r}")
    return primes


def _parse_heights(text: str) -> list[int]:
    try:
        hs = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise DescriptorError(f"bad height list {text!r}") from None
    if not hs or hs[0] < 1:
        raise DescriptorError(f"heights must be >= 1, got {text!r}")
    return hs


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _emit(args, text: str):
    with _output(getattr(args, "out", None)) as fh:
        fh.write(text)


def _dump(d) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def _check_order(A: FiniteAbelianPGroup, max_order: int):
    if A.order > max_order:
        raise BoundExceeded(f"|A| = {A.order} exceeds --max-order {max_order}")


# -- commands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    A = parse_group(args.group)
    _check_order(A, args.max_order)
    height = args.height if args.height and args.height > 1 else None
    d = analyze(A, args.policy, height, args.max_tuples).to_dict()
    _emit(args, _dump(d) if args.json else render_text(d))
    failed = [c for c in d["checks"] if not c["passed"]] or d["policy_audit"] is False
    return EXIT_FAILED if failed else EXIT_OK


def cmd_decompose(args) -> int:
    A = parse_group(args.group)
    _check_order(A, args.max_order)
    if args.height < 1:
        raise DescriptorError("--height must be >= 1")
    d = analyze(A, args.policy, args.height, args.max_tuples).to_dict()
    _emit(args, _dump(d) if args.json else render_text(d))
    return EXIT_OK


def cmd_subgroups(args) -> int:
    A = parse_group(args.group)
    _check_order(A, args.max_order)
    subs = enumerate_subgroups(A)
    p = A.prime
    rows = [
        {
            "order": S.order,
            "index": S.index,
            "maximal": S.index == p,
            "generators": [list(g) for g in S.generators],
        }
        for S in subs
    ]
    if args.json:
        text = _dump({"group": A.descriptor(), "count": len(rows), "subgroups": rows})
    else:
        lines = [f"{A.descriptor()}: {len(rows)} subgroups"]
        for r in rows:
            gens = " ".join("(" + ",".join(map(str, g)) + ")" for g in r["generators"]) or "0"
            mark = "  maximal" if r["maximal"] else ""
            lines.append(f"  order {r['order']:>4}  index {r['index']:>4}  <{gens}>{mark}")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def _family(primes, max_order, family) -> list[FiniteAbelianPGroup]:
    out = []
    for p in primes:
        for A in abelian_p_groups(p, max_order):
            if family == "cyclic" and not A.is_cyclic:
                continue
            if family == "noncyclic" and A.is_cyclic:
                continue
            out.append(A)
    return out


def _group_claims(A: FiniteAbelianPGroup, scope: str, heights: list[int], max_tuples: int):
    """Yield ``(claim, passed, note)`` for one group."""
    yield "lemma_2_1", verify_lemma_2_1(A).passed, ""
    if A.rank >= 2:
        yield "prop_2_3", verify_prop_2_3(A).passed, ""
    if scope != "all":
        return
    q = quotient_report(A)
    yield "free_rank_prediction", q.free_rank == free_rank_prediction(A), f"free rank {q.free_rank}"
    if A.is_cyclic:
        yield "cyclic_torsion_free", not q.elementary_divisors, ""
    else:
        ok = q.free_rank == 0 and q.is_nonzero and bool(q.p_annihilates) and q.p_torsion_present
        note = f"divisors {list(q.elementary_divisors)}"
        if not q.torsion_is_p_primary:
            note += " (torsion not p-primary)"
        yield "p_torsion", ok, note
    if A.order <= AUDIT_MAX_ORDER:
        yield "policy_equivalence", policy_audit(A), ""
    for n in heights:
        if n == 1 or A.order ** (n - 1) > max_tuples:
            continue
        verdict = decomposition_report(A, n, max_tuples).verdict_p_torsion
        yield f"height_{n}_verdict", verdict == (A.rank >= 2), f"verdict {str(verdict).lower()}"


def cmd_verify(args) -> int:
    primes = _parse_primes(args.primes)
    heights = _parse_heights(args.heights)
    out = []
    failures = 0
    total = 0
    for p in primes:
        out.append(f"SKIP  trivial group (p={p}): no proper subgroups, so no transfer ideal to test")
        if args.scope in ("lemmas", "all") and args.family != "cyclic":
            ok = verify_lemma_2_2(p).passed
            total += 1
            failures += not ok
            out.append(f"{'PASS' if ok else 'FAIL'}  lemma_2_2  {p}^1x{p}^1")
    for A in _family(primes, args.max_order, args.family):
        for claim, ok, note in _group_claims(A, args.scope, heights, args.max_tuples):
            total += 1
            failures += not ok
            line = f"{'PASS' if ok else 'FAIL'}  {claim}  {A.descriptor()}"
            out.append(line + (f"  {note}" if note else ""))
    out.append(f"{total - failures}/{total} checks passed")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_FAILED if failures else EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transfer-torsion",
        description="Transfer ideals in the K-theory of abelian p-groups: quotients, torsion and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, max_order=DEFAULT_MAX_ORDER):
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--max-order", type=int, default=max_order, help="refuse groups larger than this")
        sp.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    a = sub.add_parser("analyze", help="quotient structure and checks for one group")
    a.add_argument("group", help="descriptor such as 2^2x2^1")
    a.add_argument("--policy", choices=["all-proper", "maximal"], default="maximal")
    a.add_argument("--height", type=int, default=1, help="attach the decomposition at this height")
    a.add_argument("--max-tuples", type=int, default=DEFAULT_MAX_TUPLES)
    common(a)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="per-tuple quotients at a given height")
    d.add_argument("group")
    d.add_argument("--height", type=int, required=True)
    d.add_argument("--policy", choices=["all-proper", "maximal"], default="maximal")
    d.add_argument("--max-tuples", type=int, default=DEFAULT_MAX_TUPLES)
    common(d)
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("subgroups", help="list every subgroup")
    s.add_argument("group")
    common(s)
    s.set_defaults(func=cmd_subgroups)

    v = sub.add_parser("verify", help="run the checks over a family of groups")
    v.add_argument("--scope", choices=["lemmas", "all"], default="lemmas")
    v.add_argument("--primes", default="2,3,5", help="comma-separated primes")
    v.add_argument("--max-order", type=int, default=VERIFY_MAX_ORDER)
    v.add_argument("--family", choices=["all", "cyclic", "noncyclic"], default="all")
    v.add_argument("--heights", default="1", help="comma-separated heights for decomposition verdicts")
    v.add_argument("--max-tuples", type=int, default=DEFAULT_MAX_TUPLES)
    v.add_argument("--out", metavar="PATH")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
