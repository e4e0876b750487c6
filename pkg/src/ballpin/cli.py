"""Command-line front end.

Every command prints one JSON document (to stdout or ``--out``).  Verdict
commands exit with 0 when the result is proved, 10 when it rests on
sampling evidence and 20 when it is refuted; errors exit with 1 and an
``{"error": ...}`` document.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .balls import lift_pattern, project_to_pattern, screens_of, validate
from .engine import (DEFAULT_RHO, DEFAULT_SAMPLES, EMPIRICAL, FIRST_ORDER, NOT_PINNED,
                     PATTERN, construct_stable, demo_main_theorem, extract_minimal,
                     recheck_certificate, recheck_pattern, verify_pin)
from .errors import PinningError
from .geometry import TAU
from .io import (balls_from_doc, document_kind, dumps, pattern_from_doc, read_json,
                 screens_from_doc)
from .linespace import (FeasibilityVerdict, check_verdict, numeric_rank,
                        strict_transversal)
from .pattern2d import (HalfplanePattern, is_pinning_pattern, is_sigma5, random_pattern,
                        sample_counterexample, sigma5)
from .svg import pattern_svg

PROVED, EVIDENCE, REFUTED, FAILED = 0, 10, 20, 1

_LEVEL_EXIT = {PATTERN: PROVED, FIRST_ORDER: EVIDENCE, EMPIRICAL: EVIDENCE, NOT_PINNED: REFUTED}


def _params(args, *names) -> dict:
    out = {"seed": args.seed, "tol": args.tol}
    for n in names:
        v = getattr(args, n)
        out[n] = list(v) if isinstance(v, tuple) else v
    return out


def _rho(text: str) -> tuple:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad rho schedule {text!r}") from exc
    if any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("rho values must be positive")
    return vals


def _load_balls(path: str):
    doc = read_json(path)
    if document_kind(doc) != "balls":
        raise PinningError("expected a ball configuration document")
    return balls_from_doc(doc)


def _write_svg(path: Optional[str], P: HalfplanePattern, verdict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(pattern_svg(P, verdict))


# ------------------------------------------------------------ pattern

def _pattern_report(args, P: HalfplanePattern):
    verdict = is_pinning_pattern(P)
    doc = {"command": args.command_name, "params": _params(args, "trials"),
           "pattern": P.to_json(), "angles_deg": P.angles(), "sigma5": is_sigma5(P),
           "verdict": verdict.to_json()}
    if args.trials:
        line = sample_counterexample(P, args.trials, args.seed)
        doc["sampling"] = {"trials": args.trials,
                           "counterexample": None if line is None else line.to_json()}
    _write_svg(args.svg, P, verdict)
    if args.svg:
        doc["svg"] = args.svg
    return doc, (PROVED if verdict.is_pinning else REFUTED)


def cmd_pattern_check(args):
    P = pattern_from_doc(read_json(args.file))
    if args.recheck:
        ok = recheck_pattern(P, read_json(args.recheck)["verdict"])
        return {"command": args.command_name, "recheck": ok}, (PROVED if ok else REFUTED)
    return _pattern_report(args, P)


def cmd_pattern_sigma5(args):
    return _pattern_report(args, sigma5(args.angles))


def _minimal(P: HalfplanePattern) -> bool:
    # adding halfplanes preserves pinning, so dropping one at a time suffices
    if len(P) <= 1:
        return True
    return not any(
        is_pinning_pattern(HalfplanePattern(P.normals[:i] + P.normals[i + 1:])).is_pinning
        for i in range(len(P))
    )


def cmd_pattern_search(args):
    rng = np.random.default_rng(args.seed)
    found, pinning = [], 0
    for _ in range(args.trials):
        P = random_pattern(args.size, rng)
        if not is_pinning_pattern(P).is_pinning:
            continue
        pinning += 1
        if _minimal(P):
            found.append({"angles_deg": P.angles(), "sigma5": is_sigma5(P)})
    doc = {"command": args.command_name, "params": _params(args, "trials", "size"),
           "pinning": pinning, "minimal": len(found),
           "minimal_sigma5": sum(f["sigma5"] for f in found),
           "patterns": found[: args.limit]}
    return doc, PROVED


# -------------------------------------------------------------- balls

def cmd_balls_lift(args):
    P = pattern_from_doc(read_json(args.file))
    C = lift_pattern(P, args.radius, args.gap)
    return C.to_json(), PROVED


def cmd_balls_project(args):
    P = project_to_pattern(_load_balls(args.file), args.tol)
    return {**P.to_json(), "angles_deg": P.angles()}, PROVED


# ------------------------------------------------------------ screens

def cmd_screens_test(args):
    doc = read_json(args.file)
    if document_kind(doc) == "balls":
        F = screens_of(balls_from_doc(doc), args.tol)
    else:
        F = screens_from_doc(doc)
    if args.recheck:
        ok = check_verdict(F, FeasibilityVerdict.from_json(read_json(args.recheck)["verdict"]),
                           args.tol)
        return {"command": args.command_name, "recheck": ok}, (PROVED if ok else REFUTED)
    verdict = strict_transversal(F, args.tol)
    rank = numeric_rank(F.phis(), args.tol)
    out = {"command": args.command_name, "params": _params(args), "d": F.d, "k": len(F),
           "verdict": verdict.to_json(), "phi_rank": rank, "full_rank": rank == len(F)}
    return out, PROVED


# ---------------------------------------------------------------- pin

def cmd_pin_verify(args):
    C = _load_balls(args.file)
    if args.recheck:
        ok = recheck_certificate(C, read_json(args.recheck)["certificate"], args.tol)
        return {"command": args.command_name, "recheck": ok}, (PROVED if ok else REFUTED)
    cert = verify_pin(C, args.rho_schedule, args.samples, args.seed, args.tol)
    doc = {"command": args.command_name,
           "params": _params(args, "rho_schedule", "samples"),
           "balls": len(C), "d": C.d, "certificate": cert.to_json()}
    return doc, _LEVEL_EXIT[cert.level]


def cmd_pin_minimal(args):
    C = _load_balls(args.file)
    ex = extract_minimal(C, args.eps, args.seed, args.rho_schedule, args.samples,
                         tol=args.tol)
    doc = {"command": args.command_name,
           "params": _params(args, "rho_schedule", "samples", "eps"),
           "indices": ex.indices, "config": ex.config.to_json(),
           "certificate": ex.certificate.to_json(), "minimal": ex.minimal,
           "audit": [{"subset": s, "certificate": c.to_json()} for s, c in ex.audit]}
    code = _LEVEL_EXIT[ex.certificate.level] if ex.minimal else REFUTED
    return doc, code


# ---------------------------------------------------------- construct

def cmd_construct_stable(args):
    C = construct_stable(args.dim, args.resolution, args.radius, args.gap, args.seed)
    doc = C.to_json()
    doc["meta"] = {"command": args.command_name,
                   "params": _params(args, "dim", "resolution", "radius", "gap"),
                   "validation": validate(C, args.tol).to_json()}
    if args.verify:
        cert = verify_pin(C, args.rho_schedule, args.samples, args.seed, args.tol)
        doc["meta"]["certificate"] = cert.to_json()
        return doc, _LEVEL_EXIT[cert.level]
    return doc, PROVED


def cmd_demo_main_theorem(args):
    resolutions = (args.resolution,) if args.resolution else (2, 3, 5, 8, 13)
    report = demo_main_theorem(args.dim, args.delta, args.seed, resolutions,
                               args.global_starts, args.local_starts, args.eps,
                               rho_schedule=args.rho_schedule, samples=args.samples,
                               tol=args.tol)
    report = {"command": args.command_name,
              "params": _params(args, "dim", "delta", "global_starts", "local_starts",
                                "rho_schedule", "samples", "eps"),
              **report}
    return report, (EVIDENCE if report["ok"] else REFUTED)


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=TAU)
    common.add_argument("--out", help="write JSON here instead of stdout")
    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--rho-schedule", type=_rho, default=DEFAULT_RHO,
                          help="comma-separated sampling radii (default 1e-3,1e-4,1e-5)")
    sampling.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    parser = argparse.ArgumentParser(prog="ballpin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, name, func, helptext, parents=(common,)):
        p = group.add_parser(name, help=helptext, parents=list(parents))
        p.set_defaults(func=func)
        return p

    pat = groups.add_parser("pattern", help="planar halfplane patterns").add_subparsers(
        dest="cmd", required=True)
    p = add(pat, "check", cmd_pattern_check, "decide whether a pattern pins")
    p.add_argument("file")
    p.add_argument("--svg")
    p.add_argument("--trials", type=int, default=0, help="also run a line-sampling oracle")
    p.add_argument("--recheck", help="re-validate a previously emitted report")
    p = add(pat, "sigma5", cmd_pattern_sigma5, "the five-halfplane pinning pattern")
    p.add_argument("--angles", type=float, nargs=5)
    p.add_argument("--svg")
    p.add_argument("--trials", type=int, default=0)
    p = add(pat, "search", cmd_pattern_search, "random search for minimal pinning patterns")
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--limit", type=int, default=20, help="patterns listed in the output")

    bl = groups.add_parser("balls", help="ball configurations").add_subparsers(
        dest="cmd", required=True)
    p = add(bl, "lift", cmd_balls_lift, "lift a pattern to tangent balls in R^3")
    p.add_argument("file")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--gap", type=float, default=3.0)
    p = add(bl, "project", cmd_balls_project, "project tangent balls in R^3 to a pattern")
    p.add_argument("file")

    sc = groups.add_parser("screens", help="screen families").add_subparsers(
        dest="cmd", required=True)
    p = add(sc, "test", cmd_screens_test, "strict-transversal test with certificate")
    p.add_argument("file", help="screen family or ball configuration")
    p.add_argument("--recheck")

    pin = groups.add_parser("pin", help="pinning certificates").add_subparsers(
        dest="cmd", required=True)
    p = add(pin, "verify", cmd_pin_verify, "certify or refute that the axis is pinned",
            (common, sampling))
    p.add_argument("file")
    p.add_argument("--recheck")
    p = add(pin, "minimal", cmd_pin_minimal, "extract a minimal pinning subfamily",
            (common, sampling))
    p.add_argument("file")
    p.add_argument("--eps", type=float, default=1e-6)

    co = groups.add_parser("construct", help="constructions").add_subparsers(
        dest="cmd", required=True)
    p = add(co, "stable", cmd_construct_stable, "union of lifted quintuples over a net",
            (common, sampling))
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--resolution", type=int, default=2)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--gap", type=float, default=3.0)
    p.add_argument("--verify", action="store_true")

    de = groups.add_parser("demo", help="end-to-end demonstrations").add_subparsers(
        dest="cmd", required=True)
    p = add(de, "main-theorem", cmd_demo_main_theorem,
            "family without a transversal whose small subfamilies all have one",
            (common, sampling))
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--delta", type=float, default=1e-4)
    p.add_argument("--resolution", type=int, default=0, help="0 tries a ladder of resolutions")
    p.add_argument("--global-starts", type=int, default=10_000)
    p.add_argument("--local-starts", type=int, default=2000)
    p.add_argument("--eps", type=float, default=1e-6)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_name = f"{args.group} {args.cmd}"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc, code = args.func(args)
    except PinningError as exc:
        _emit(dumps({"error": exc.code, "message": str(exc),
                     "command": args.command_name}), args.out)
        return FAILED
    except KeyError as exc:
        _emit(dumps({"error": "schema_error", "message": f"missing field {exc}",
                     "command": args.command_name}), args.out)
        return FAILED
    except ValueError as exc:
        _emit(dumps({"error": "invalid_argument", "message": str(exc),
                     "command": args.command_name}), args.out)
        return FAILED
    _emit(dumps(doc), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
