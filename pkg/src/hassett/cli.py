"""Command-line front end.

Every verb maps to exactly one engine operation and runs batch,
single-shot. Results go to standard output; JSON output is canonical
(sorted keys, no optional whitespace, lowest-term rationals), so identical
inputs produce byte-identical bytes.

Exit status: 0 on success, 1 on domain errors (invalid weight data, weight
data no covering theorem applies to, infeasible family systems) with a
machine-readable error object on standard output, 2 on usage errors with a
message on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from hassett.autgroup import (
    NOT_COVERED_MESSAGE,
    NotCoveredError,
    aut_group,
    is_admissible,
)
from hassett.families import (
    CONSTRUCTIONS,
    FamilySpec,
    InfeasibleFamilyError,
    blowup_schedule,
    classify_with_relabeling,
    factors_kapranov,
    feasible_representative,
    verify_keel_factorization,
)
from hassett.jsonio import canonical_line
from hassett.strata import (
    contracted_divisors,
    divisor_tree,
    enumerate_boundary_divisors,
)
from hassett.weights import (
    InvalidWeightDataError,
    WeightData,
    chamber_signature,
    format_rational,
    require_valid,
    validate,
)


def _add_weight_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--genus", type=int, default=None, help="genus of the datum")
    sub.add_argument(
        "--weights",
        default=None,
        help="comma-separated rational weights, p/q or integer form",
    )
    sub.add_argument(
        "--input",
        default=None,
        metavar="FILE",
        help='weight-datum JSON file {"genus": g, "weights": ["1/3", ...]}',
    )


def _add_format_argument(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--format",
        choices=("json", "text"),
        default="json",
        help="output form (default json)",
    )


class _UsageError(Exception):
    """Arguments parsed but do not name a runnable request."""


def _load_weight_file(path: str) -> WeightData:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path} is not JSON: {exc}") from exc
    try:
        return WeightData.from_json_dict(payload)
    except ValueError as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _weights_from(args: argparse.Namespace) -> WeightData:
    if args.input is not None:
        if args.genus is not None or args.weights is not None:
            raise _UsageError("give either --input or --genus/--weights, not both")
        return _load_weight_file(args.input)
    if args.genus is None or args.weights is None:
        raise _UsageError("weight data needed: --genus and --weights, or --input")
    try:
        return WeightData.from_strings(
            args.genus, [tok for tok in args.weights.split(",")]
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _emit(args: argparse.Namespace, obj: object, lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_line(obj))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _domain_error(args: argparse.Namespace, kind: str, message: str, **extra) -> int:
    payload = {"error": {"kind": kind, "message": message, **extra}}
    lines = [f"error: {message}"]
    lines.extend(f"{key}: {value}" for key, value in sorted(extra.items()) if value)
    _emit(args, payload, lines)
    return 1


def _index_set(s) -> list[int]:
    return sorted(s)


def _sorted_sets(sets) -> list[list[int]]:
    return [sorted(s) for s in sorted(sets, key=lambda s: (len(s), sorted(s)))]


# ---------------------------------------------------------------------------
# Verb handlers
# ---------------------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    report = validate(_weights_from(args))
    walls = _sorted_sets(report.walls)
    obj = {
        "ok": report.ok,
        "violations": list(report.violations),
        "walls": walls,
    }
    lines = ["valid" if report.ok else "invalid"]
    lines.extend(f"violation: {v}" for v in report.violations)
    lines.extend("wall: " + " ".join(map(str, wall)) for wall in walls)
    _emit(args, obj, lines)
    return 0 if report.ok else 1


def _cmd_signature(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    require_valid(w)
    sets = chamber_signature(w)
    if args.mode == "coarse":
        sets = frozenset(s for s in sets if len(s) >= 3)
    ordered = _sorted_sets(sets)
    obj = {"mode": args.mode, "sets": ordered}
    lines = [f"{args.mode} signature: {len(ordered)} sets"]
    lines.extend(" ".join(map(str, s)) for s in ordered)
    _emit(args, obj, lines)
    return 0


def _cmd_divisors(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    require_valid(w)
    items = []
    lines = []
    for d in enumerate_boundary_divisors(w):
        entry = d.to_json_dict()
        if args.trees:
            entry["tree"] = divisor_tree(w, d).to_json_dict()
        items.append(entry)
        if d.kind == "nodal":
            lines.append(
                "nodal: side "
                + " ".join(map(str, _index_set(d.side)))
                + f" | genus split {d.genus_split[0]}+{d.genus_split[1]}"
            )
        elif d.kind == "irreducible":
            lines.append("irreducible node")
        else:
            lines.append("coincidence: " + " ".join(map(str, _index_set(d.pair))))
    obj = {"divisors": items}
    lines.insert(0, f"{len(items)} boundary divisors")
    _emit(args, obj, lines)
    return 0


def _cmd_contract(args: argparse.Namespace) -> int:
    source = _load_weight_file(args.from_path)
    target = _load_weight_file(args.to_path)
    require_valid(source)
    require_valid(target)
    contractions = contracted_divisors(source, target)
    obj = {"contractions": [c.to_json_dict() for c in contractions]}
    lines = [f"{len(contractions)} contracted divisors"]
    lines.extend(
        "collapse side "
        + " ".join(map(str, _index_set(c.collapsed_side)))
        + f" | genus {c.collapsed_genus}"
        for c in contractions
    )
    _emit(args, obj, lines)
    return 0


def _cmd_admissible(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    require_valid(w)
    ok, witness = is_admissible(w, args.i, args.j, exclude_ij=args.strict_atrans)
    obj = {
        "admissible": ok,
        "witness": None if witness is None else _index_set(witness),
    }
    if ok:
        lines = [f"swap {args.i} {args.j}: admissible"]
    else:
        lines = [
            f"swap {args.i} {args.j}: not admissible; witness packet "
            + " ".join(map(str, _index_set(witness)))
        ]
    _emit(args, obj, lines)
    return 0


def _cmd_aut(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    description = aut_group(w, exclude_ij=args.strict_atrans)
    obj = description.to_json_dict()
    lines = [f"label: {description.label}"]
    if description.special is not None:
        lines.append(f"special: {description.special}")
    if description.torus_rank is not None:
        lines.append(f"torus rank: {description.torus_rank}")
    if description.finite_order is not None:
        lines.append(f"finite order: {description.finite_order}")
    if description.stack_note is not None:
        lines.append(description.stack_note)
    lines.append(f"by: {description.provenance}")
    _emit(args, obj, lines)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    require_valid(w)
    if w.genus != 0:
        raise _UsageError("classification is defined for genus zero")
    hit = classify_with_relabeling(w)
    obj = {
        "family": None if hit is None else hit[0].notation(),
        "relabeling": None if hit is None else list(hit[1]),
    }
    if hit is None:
        lines = ["no family matches"]
    else:
        lines = [
            f"family: {hit[0].notation()}",
            "slots: " + " ".join(map(str, hit[1])),
        ]
    _emit(args, obj, lines)
    return 0


def _cmd_factors_kapranov(args: argparse.Namespace) -> int:
    w = _weights_from(args)
    require_valid(w)
    result = factors_kapranov(w)
    _emit(
        args,
        {"factors_kapranov": result},
        ["factors through the one-heavy tower" if result else "does not factor"],
    )
    return 0


def _cmd_schedule(args: argparse.Namespace) -> int:
    schedule = blowup_schedule(args.construction, args.n)
    obj = schedule.to_json_dict()
    lines = [f"{schedule.construction} on {schedule.ambient}, n={schedule.n}"]
    for step in obj["steps"]:
        rendered = [
            center if isinstance(center, str) else "{" + " ".join(center) + "}"
            for center in step["centers"]
        ]
        lines.append(f"step {step['step']}: " + "; ".join(rendered))
    _emit(args, obj, lines)
    return 0


def _cmd_verify_l1(args: argparse.Namespace) -> int:
    report = verify_keel_factorization(args.n)
    lines = [
        f"n={report['n']}: stages {report['range'][0]}..{report['range'][1]}",
    ]
    for check in report["checks"]:
        verdicts = ["reduces" if check["reduces"] else "NO REDUCTION"]
        if "revalidated" in check:
            verdicts.append(
                "revalidated" if check["revalidated"] else "REVALIDATION FAILED"
            )
        if "fine_equivalent_to_kapranov_2_2" in check:
            verdicts.append(
                "exchange member matches"
                if check["fine_equivalent_to_kapranov_2_2"]
                else "EXCHANGE MISMATCH"
            )
        lines.append(f"h={check['h']}: " + ", ".join(verdicts))
    if "note" in report:
        lines.append(report["note"])
    lines.append("all pass" if report["all_pass"] else "FAILURES PRESENT")
    _emit(args, report, lines)
    return 0


def _cmd_feasible(args: argparse.Namespace) -> int:
    spec = FamilySpec.from_notation(args.family)
    try:
        witness = feasible_representative(spec).weights
    except InfeasibleFamilyError:
        # infeasibility is a result, not a failure
        witness = None
    obj = {
        "family": spec.notation(),
        "witness": None
        if witness is None
        else [format_rational(q) for q in witness],
    }
    if witness is None:
        lines = [f"{spec.notation()}: infeasible"]
    else:
        lines = [
            f"{spec.notation()}: "
            + " ".join(format_rational(q) for q in witness)
        ]
    _emit(args, obj, lines)
    return 0


# ---------------------------------------------------------------------------
# Parser assembly and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hassett",
        description=(
            "Exact combinatorics of moduli spaces of weighted pointed "
            "stable curves."
        ),
    )
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        _add_format_argument(sub)
        return sub

    sub = verb("validate", _cmd_validate, "check a weight datum, report walls")
    _add_weight_arguments(sub)

    sub = verb("signature", _cmd_signature, "chamber signature of a datum")
    _add_weight_arguments(sub)
    sub.add_argument(
        "--mode",
        choices=("fine", "coarse"),
        default="fine",
        help="fine keeps all small sets; coarse drops pairs (default fine)",
    )

    sub = verb("divisors", _cmd_divisors, "enumerate boundary divisors")
    _add_weight_arguments(sub)
    sub.add_argument(
        "--trees",
        action="store_true",
        help="attach the dual graph of each divisor",
    )

    sub = verb("contract", _cmd_contract, "divisors a reduction contracts")
    sub.add_argument(
        "--from",
        dest="from_path",
        required=True,
        metavar="FILE",
        help="source weight-datum JSON file",
    )
    sub.add_argument(
        "--to",
        dest="to_path",
        required=True,
        metavar="FILE",
        help="target weight-datum JSON file",
    )

    sub = verb("admissible", _cmd_admissible, "test a marking transposition")
    _add_weight_arguments(sub)
    sub.add_argument("i", type=int, help="first marking, 1-based")
    sub.add_argument("j", type=int, help="second marking, 1-based")
    sub.add_argument(
        "--strict-atrans",
        action="store_true",
        help="draw witness packets strictly away from the swapped pair",
    )

    sub = verb("aut", _cmd_aut, "describe the automorphism group")
    _add_weight_arguments(sub)
    sub.add_argument(
        "--strict-atrans",
        action="store_true",
        help="draw witness packets strictly away from the swapped pair",
    )

    sub = verb("classify", _cmd_classify, "recognize a named family member")
    _add_weight_arguments(sub)

    sub = verb(
        "factors-kapranov",
        _cmd_factors_kapranov,
        "does the datum factor through the one-heavy tower",
    )
    _add_weight_arguments(sub)

    sub = verb("schedule", _cmd_schedule, "blow-up schedule of a construction")
    sub.add_argument("construction", choices=CONSTRUCTIONS)
    sub.add_argument("n", type=int, help="number of markings")

    sub = verb("verify-l1", _cmd_verify_l1, "verify the contraction-to-tower chain")
    sub.add_argument("n", type=int, help="number of markings")

    sub = verb("feasible", _cmd_feasible, "solve a family's condition system")
    sub.add_argument(
        "family",
        help='family notation, e.g. "kapranov:r=1,s=2,n=5" or "sym:k=1,n=6"',
    )

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except NotCoveredError as exc:
        return _domain_error(
            args, "not-covered", NOT_COVERED_MESSAGE, detail=exc.detail
        )
    except InvalidWeightDataError as exc:
        return _domain_error(args, "invalid-weight-data", str(exc))
    except InfeasibleFamilyError as exc:
        return _domain_error(args, "infeasible-family", str(exc))
    except ValueError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
