"""Command-line surface: subcommands, reports, and the exit-code contract.

Exit codes: 0 success (property holds, witness behavior as expected);
1 usage, I/O, or parse error; 2 property fails or a counterexample is found;
3 mathematically undefined operation.  Every revision and conditioning
subcommand emits a document that parses back, so pipelines compose.
"""

import argparse
import sys

from . import conditioning, credal, lab
from .capacity import (
    Capacity,
    DempsterModel,
    find_k_monotone_violation,
    find_monotone_violation,
    find_superadditive_violation,
    project_dempster,
)
from .documents import emit_document, parse_document
from .errors import DocumentError, InvariantViolation, UndefinedOperation
from .kinematics import (
    JeffreySpec,
    ProbabilityMeasure,
    jeffrey_revise,
    kinematic_revise,
    maxent_project,
    relative_information,
)
from .lattice import SignedMassFunction

OK, FAIL, USAGE, UNDEFINED = 0, 2, 1, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _float_str(value: float) -> str:
    return f"~{value:.12g}"


def _load(path: str, allow_nonstandard: bool):
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read(), allow_nonstandard=allow_nonstandard)


def _expect(value, cls, path: str):
    if not isinstance(value, cls):
        raise DocumentError(
            f"{path}: expected a {cls.__name__.lower()} document, got "
            f"{type(value).__name__.lower()}"
        )
    return value


# -- subcommand handlers --------------------------------------------------------


def _cmd_transform(args):
    doc = _load(args.file, args.allow_nonstandard)
    if args.mobius:
        cap = _expect(doc, Capacity, args.file)
        print(emit_document(cap.mobius()), end="")
    else:
        mass = _expect(doc, SignedMassFunction, args.file)
        print(emit_document(Capacity.from_mass(mass)), end="")
    return OK


def _parse_property(args):
    text = args.property
    if text in ("monotone", "superadditive", "belief", "coherent"):
        return text, None
    if text == "k-monotone":
        if args.k is None:
            raise _Usage("--property k-monotone requires --k K")
        return "k_monotone", args.k
    if text.endswith("-monotone"):
        head = text[: -len("-monotone")]
        if head.isdigit():
            return "k_monotone", int(head)
    raise _Usage(f"unknown property {text!r}")


def _check_lines(cap: Capacity, prop: str, k: int | None):
    """Return (label, holds, detail lines naming a violation when not)."""
    frame = cap.frame
    if prop == "monotone":
        witness = find_monotone_violation(cap)
        if witness is None:
            return "monotone", True, []
        a, b = witness
        return "monotone", False, [
            f"violation: c({frame.subset_str(a)}) = {cap[a]} > "
            f"c({frame.subset_str(b)}) = {cap[b]}"
        ]
    if prop == "superadditive":
        witness = find_superadditive_violation(cap)
        if witness is None:
            return "superadditive", True, []
        a, b = witness
        return "superadditive", False, [
            f"violation: c({frame.subset_str(a | b)}) = {cap[a | b]} < "
            f"c({frame.subset_str(a)}) + c({frame.subset_str(b)}) = {cap[a] + cap[b]}"
        ]
    if prop == "k_monotone":
        witness = find_k_monotone_violation(cap, k)
        if witness is None:
            return f"{k}-monotone", True, []
        sets = ", ".join(frame.subset_str(m) for m in witness)
        return f"{k}-monotone", False, [f"violating sequence: {sets}"]
    if prop == "belief":
        mass = cap.mobius()
        negative = [m for m in mass.focal_sets if mass[m] < 0]
        if not negative:
            return "belief", True, []
        m = negative[0]
        return "belief", False, [f"negative mass: m({frame.subset_str(m)}) = {mass[m]}"]
    # coherent
    for a in frame.subsets():
        if a in (0, frame.full):
            continue
        try:
            env = credal.envelope_value(cap, a)
        except UndefinedOperation:
            return "coherent", False, ["credal set is empty"]
        if env != cap[a]:
            return "coherent", False, [
                f"envelope({frame.subset_str(a)}) = {env} != "
                f"c({frame.subset_str(a)}) = {cap[a]}"
            ]
    return "coherent", True, []


def _cmd_check(args):
    cap = _expect(_load(args.file, args.allow_nonstandard), Capacity, args.file)
    prop, k = _parse_property(args)
    if prop == "k_monotone" and k < 2:
        raise _Usage("k-monotonicity needs k >= 2")
    label, holds, details = _check_lines(cap, prop, k)
    print(f"{label}: {'true' if holds else 'false'}")
    for line in details:
        print(line)
    return OK if holds else FAIL


def _cmd_project(args):
    model = _expect(_load(args.file, args.allow_nonstandard), DempsterModel, args.file)
    m, b, a = project_dempster(model)
    parts = {"mass": m, "belief": b, "upper": a}
    if args.emit == "all":
        chunks = []
        for name in ("mass", "belief", "upper"):
            chunks.append(f"# --- {name}\n" + emit_document(parts[name]))
        print("\n".join(chunks), end="")
    else:
        print(emit_document(parts[args.emit]), end="")
    return OK


def _cmd_revise(args):
    prior = _expect(_load(args.prior, args.allow_nonstandard), ProbabilityMeasure, args.prior)
    if args.jeffrey:
        mass = _expect(_load(args.jeffrey, args.allow_nonstandard), SignedMassFunction, args.jeffrey)
        seen = 0
        for cell in mass.focal_sets:
            if seen & cell:
                raise DocumentError(f"{args.jeffrey}: focal sets are not pairwise disjoint")
            if mass[cell] <= 0:
                raise DocumentError(f"{args.jeffrey}: cell weights must be positive")
            seen |= cell
        spec = JeffreySpec(mass.frame, tuple(mass.focal_sets),
                           tuple(mass[c] for c in mass.focal_sets))
        print(emit_document(jeffrey_revise(prior, spec)), end="")
        return OK
    mass = _expect(_load(args.mass, args.allow_nonstandard), SignedMassFunction, args.mass)
    revised = kinematic_revise(prior, mass)
    if revised.is_probability:
        print(emit_document(revised.to_probability()), end="")
        return OK
    print("valid: false")
    for i, w in enumerate(revised.weights):
        print(f"weight({{{revised.frame.labels[i]}}}): {w}")
    return FAIL


def _cmd_condition(args):
    cap = _expect(_load(args.file, args.allow_nonstandard), Capacity, args.file)
    event = cap.frame.mask_of(args.event)
    result = conditioning.condition_lower(cap, event, args.rule)
    notes = tuple(
        f"{args.rule} 0/0 at {cap.frame.subset_str(a)}; exact envelope value used"
        for a in result.fallback_cells
    )
    print(emit_document(result.capacity, notes=notes), end="")
    return OK


def _cmd_combine(args):
    b1 = _expect(_load(args.first, args.allow_nonstandard), Capacity, args.first)
    b2 = _expect(_load(args.second, args.allow_nonstandard), Capacity, args.second)
    result = conditioning.combine_belief(b1, b2, args.rule, args.level)
    if args.emit == "mass":
        print(emit_document(result.mass), end="")
    else:
        print(emit_document(result.capacity), end="")
    return OK


def _cmd_envelope(args):
    cap = _expect(_load(args.file, args.allow_nonstandard), Capacity, args.file)
    frame = cap.frame
    if args.value is not None:
        print(f"value: {credal.envelope_value(cap, frame.mask_of(args.value))}")
        return OK
    if args.conditional is not None:
        a, e = (frame.mask_of(s) for s in args.conditional)
        print(f"conditional: {credal.conditional_envelope(cap, a, e)}")
        return OK
    bound = _expect(_load(args.revise, args.allow_nonstandard), Capacity, args.revise)
    report = credal.envelope_revise(cap, bound)
    print(f"epsilon: {report.epsilon}")
    for mask in frame.subsets():
        entry = report.entries[mask]
        print(f"{frame.subset_str(mask)}: lower={entry.lower} best={entry.best_found}")
    return OK


def _cmd_info(args):
    q = _expect(_load(args.relent[0], args.allow_nonstandard), ProbabilityMeasure, args.relent[0])
    p = _expect(_load(args.relent[1], args.allow_nonstandard), ProbabilityMeasure, args.relent[1])
    print(f"relative_information: {_float_str(relative_information(q, p))}")
    return OK


def _cmd_maxent(args):
    prior = _expect(_load(args.prior, args.allow_nonstandard), ProbabilityMeasure, args.prior)
    bound = _expect(_load(args.bound, args.allow_nonstandard), Capacity, args.bound)
    tol = args.sub_tol if args.sub_tol is not None else args.tol
    max_iter = args.sub_max_iter if args.sub_max_iter is not None else args.max_iter
    result = maxent_project(prior, bound, tol=tol, max_iter=max_iter)
    print(f"converged: {'true' if result.converged else 'false'}")
    print(f"iterations: {result.iterations}")
    print(f"objective: {_float_str(result.objective)}")
    print(f"gap: {_float_str(result.gap)}")
    for lab_, w in zip(prior.frame.labels, result.weights):
        print(f"q({{{lab_}}}): {_float_str(w)}")
    return OK if result.converged else FAIL


def _cmd_lab(args):
    seed = args.lab_seed if args.lab_seed is not None else args.seed
    budget = lab.SearchBudget(
        max_frame_size=args.max_n,
        grid_denominator=args.grid,
        random_samples=args.samples,
        seed=seed,
    )
    report = lab.search_witness(args.claim, budget)
    print(f"claim: {report.claim}")
    print(f"found: {'true' if report.found else 'false'}")
    print(f"checked: {report.checked}")
    print(f"witnesses: {len(report.witnesses)}")
    if report.witness is not None:
        print(f"witness: {report.witness.description}")
    if report.claim in lab.EXPECTED_CLAIMS:
        return OK if report.found else FAIL
    return OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="probkin", description=__doc__)
    parser.add_argument("--tol", type=float, default=1e-9, help="tolerance for floating ops")
    parser.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--allow-nonstandard",
        action="store_true",
        help="accept capacity files with values outside [0, 1]",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Mobius or zeta transform of a document")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--mobius", action="store_true")
    group.add_argument("--zeta", action="store_true")
    p.add_argument("file")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("check", help="structural property checks")
    p.add_argument("--property", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("project", help="Dempster model to mass, belief, upper")
    p.add_argument("--emit", choices=("mass", "belief", "upper", "all"), default="all")
    p.add_argument("file")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("revise", help="revise a prior by a mass or a partition")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--mass", metavar="MASSFILE")
    group.add_argument("--jeffrey", metavar="MASSFILE")
    p.add_argument("prior")
    p.set_defaults(func=_cmd_revise)

    p = sub.add_parser("condition", help="condition a lower probability on an event")
    p.add_argument("--rule", choices=conditioning.RULES, required=True)
    p.add_argument("--event", required=True, metavar="SET")
    p.add_argument("file")
    p.set_defaults(func=_cmd_condition)

    p = sub.add_parser("combine", help="combine two belief functions")
    p.add_argument("--rule", choices=conditioning.COMBINATION_RULES, required=True)
    p.add_argument("--level", choices=("mass", "belief"), default="mass")
    p.add_argument("--emit", choices=("belief", "mass"), default="belief")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=_cmd_combine)

    p = sub.add_parser("envelope", help="credal-set envelopes and bracketed revision")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--value", metavar="SET")
    group.add_argument("--conditional", nargs=2, metavar=("A", "E"))
    group.add_argument("--revise", metavar="BOUNDFILE")
    p.add_argument("file")
    p.set_defaults(func=_cmd_envelope)

    p = sub.add_parser("info", help="information measures")
    p.add_argument("--relent", nargs=2, metavar=("Q", "P"), required=True)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("maxent", help="information projection onto a credal set")
    p.add_argument("--prior", required=True)
    p.add_argument("--bound", required=True)
    p.add_argument("--tol", type=float, default=None, dest="sub_tol")
    p.add_argument("--max-iter", type=int, default=None, dest="sub_max_iter")
    p.set_defaults(func=_cmd_maxent)

    p = sub.add_parser("lab", help="counterexample search")
    p.add_argument("claim", choices=lab.CLAIMS)
    p.add_argument("--seed", type=int, default=None, dest="lab_seed")
    p.add_argument("--max-n", type=int, default=3, dest="max_n")
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=_cmd_lab)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except DocumentError as exc:
        print(f"document error: {exc}", file=sys.stderr)
        return USAGE
    except UndefinedOperation as exc:
        print(f"undefined: {exc}", file=sys.stderr)
        return UNDEFINED
    except InvariantViolation as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
