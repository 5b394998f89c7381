"""Command line entry point.

Exit codes: 0 pass, 1 a structural identity was contradicted, 2 a numerical
gray zone prevented a clean verdict, 3 the input could not be read or validated.
"""
from __future__ import annotations

import argparse
import json
import sys

from .document import BUILTINS, builtin_system, load_system
from .errors import DocumentError, InternalInconsistency, InvalidInput, NumericalAmbiguity, SpectraLabError
from .fuzz import fuzz
from .spectra import arveson_spectra, connes_spectra
from .verify import CHECK_NAMES, THEOREM_CHECKS, VerificationReport, verify

EXIT_PASS, EXIT_CONTRADICTION, EXIT_AMBIGUOUS, EXIT_INPUT = 0, 1, 2, 3
OUTCOME_CODES = {"pass": EXIT_PASS, "fail": EXIT_CONTRADICTION, "ambiguous": EXIT_AMBIGUOUS}

# accepted values of --theorem; the numeric forms are the customary names of the two criteria
THEOREMS = {"simple": "simple", "prime": "prime", "3.6": "simple", "4.3": "prime", "all": "all"}


def _fmt(labels) -> str:
    return "{" + ", ".join(labels) + "}"


def _selected(theorem: str):
    key = THEOREMS[theorem]
    return None if key == "all" else THEOREM_CHECKS[key]


def _print_report(report: VerificationReport, names=None, out=None):
    out = out or sys.stdout
    data = report.to_json(names)
    name = report.system.name or "system"
    print(f"{name}: G = {data['group']}, X blocks {list(report.system.algebra.block_dims)}, "
          f"X^alpha blocks {list(report.system.fixed.block_dims)}", file=out)
    spectra = data["spectra"]
    if spectra:
        for key in ("sp", "sp_F", "strong_sp_F", "gamma_F", "strong_gamma_F"):
            print(f"  {key:<15} {_fmt(spectra[key])}", file=out)
    for label, c in data["fixed_point_classification"].items():
        print(f"  fixed-point algebra at {label}: blocks {c['block_dims']}, center dim {c['center_dim']}, "
              f"simple={c['simple']}, prime={c['prime']}", file=out)
    for check, v in data["checks"].items():
        detail = f"  ({v['detail']})" if v["detail"] else ""
        print(f"  [{v['status']:>12}] {check}{detail}", file=out)
    print(f"  outcome: {data['outcome']}", file=out)


def _load(path: str):
    return load_system(path)


def cmd_validate(args) -> int:
    s = _load(args.file)
    print(f"valid: G = {s.group.name or s.group.order} ({len(s.table)} irreps), "
          f"X = blocks {list(s.algebra.block_dims)} in M_{s.ambient}, "
          f"X^alpha = blocks {list(s.fixed.block_dims)}")
    return EXIT_PASS


def cmd_report(args) -> int:
    s = _load(args.file)
    arv = arveson_spectra(s)
    con = connes_spectra(s)
    order = s.table.labels
    data = {
        "group": s.group.name, "irreps": list(order),
        "sp": arv.sp.ordered(order), "sp_F": arv.sp_F.ordered(order),
        "strong_sp_F": arv.strong_sp_F.ordered(order),
        "gamma_F": con.gamma_F.ordered(order), "strong_gamma_F": con.strong_gamma_F.ordered(order),
        "evidence": {k: v.to_json() for k, v in arv.evidence.items()},
        "per_ideal": [{"selector": sorted(sel), "sp_F": [l for l in order if l in a],
                       "strong_sp_F": [l for l in order if l in b]} for sel, a, b in con.per_ideal],
    }
    if args.json:
        print(json.dumps(data, indent=1))
        return EXIT_PASS
    for key in ("sp", "sp_F", "strong_sp_F", "gamma_F", "strong_gamma_F"):
        print(f"{key:<15} {_fmt(data[key])}")
    for label, ev in data["evidence"].items():
        print(f"  {label}: dim X1 {ev['x1_dim']}, dim X2 {ev['x2_dim']}, fixed-point algebra "
              f"blocks {ev['fixed_blocks']}, X2*X2 dim {ev['ideal_dim']}, essential={ev['essential']}, "
              f"full={ev['full']}")
    return EXIT_PASS


def _finish(report: VerificationReport, names, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.to_json(names), indent=1))
    else:
        _print_report(report, names)
    return OUTCOME_CODES[report.outcome(names)]


def cmd_verify(args) -> int:
    names = _selected(args.theorem)
    return _finish(verify(_load(args.file)), names, args.json)


def cmd_example(args) -> int:
    return _finish(verify(builtin_system(args.name)), None, args.json)


def cmd_fuzz(args) -> int:
    counts = {"pass": 0, "fail": 0, "ambiguous": 0}
    for s in fuzz(args.seed, args.count, args.max_group, args.max_ambient):
        report = verify(s)
        outcome = report.outcome()
        counts[outcome] += 1
        bad = [k for k, v in report.checks.items() if v.status.value != "holds"]
        print(f"{s.name}: {s.group.name} blocks {list(s.algebra.block_dims)} -> {outcome}"
              + (f" ({', '.join(bad)})" if bad else ""))
        if args.fail_fast and outcome != "pass":
            break
    print(f"summary: {counts['pass']} pass, {counts['fail']} contradicted, {counts['ambiguous']} ambiguous")
    if counts["fail"]:
        return EXIT_CONTRADICTION
    return EXIT_AMBIGUOUS if counts["ambiguous"] else EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra-lab",
                                     description="Spectra of finite group actions on finite-dimensional C*-algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a system document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="compute the five spectra with evidence")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="check the structural criteria on a system")
    p.add_argument("file")
    p.add_argument("--theorem", choices=list(THEOREMS), default="all",
                   help="simple (alias 3.6), prime (alias 4.3) or all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="full report for a built-in system")
    p.add_argument("name", choices=list(BUILTINS))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("fuzz", help="verify a reproducible stream of random systems")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-group", type=int, default=8)
    p.add_argument("--max-ambient", type=int, default=6)
    p.add_argument("--fail-fast", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, InvalidInput) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalAmbiguity as exc:
        print(f"ambiguous: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except InternalInconsistency as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except SpectraLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
