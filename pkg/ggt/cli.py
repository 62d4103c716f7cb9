"""
Command-line front end.

    ggt <subcommand> [flags] [--json | --dot] [--seed N]

JSON goes to stdout with sorted keys; logs go to stderr. Toolkit errors
exit with code 2, failed checks with code 1.
"""

import argparse
import logging
import re
import sys
from typing import Callable, List, Optional, Sequence

from ggt import __version__
from ggt.cases import CASE_IDS, case_from_toml, case_spec, relative_setting, run_case
from ggt.cayley import build_ball
from ggt.config import configure_logging
from ggt.coned import build_coned
from ggt.errors import ConfigError, GGTError
from ggt.fpgroup import (
    STRATEGIES,
    Presentation,
    equality_oracle,
    free_presentation,
    one_relator_presentation,
    presentation_from_toml,
    surface_presentation,
)
from ggt.freesub import automaton_for, malnormality_scan
from ggt.ggh import default_schedule, ib_eval, lemma_residual, model_from_toml
from ggt.hypcheck import collect_evidence
from ggt.quasi import PairSpec, brooks, brooks_eval, defect_estimate, homogenize, quasimorphism_cochain
from ggt.reports import Report, dump_json, simple_report
from ggt.retract import hom_from_toml, search_retraction, surface_section, verify_homomorphism, verify_retraction
from ggt.words import Word, format_word

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _words(text: str) -> List[str]:
    return [w for w in re.split(r"[,\s]+", text) if w]


def _tuple(text: str) -> List[str]:
    # "e" stands for the identity in tuples
    return ["" if w in ("e", "1") else w for w in text.split(",")]


def _presentation(args) -> Presentation:
    if getattr(args, "presentation", None):
        return presentation_from_toml(_read(args.presentation))
    if getattr(args, "genus", None) is not None:
        return surface_presentation(args.genus, orientable=getattr(args, "orientable", False))
    if getattr(args, "relator", None):
        return one_relator_presentation(args.rank, args.relator)
    return free_presentation(args.rank)


def _setting_name(args) -> str:
    if args.case:
        return args.case
    if args.genus is not None:
        return f"g{args.genus}"
    raise ConfigError("give --genus or --case")


def _emit(args, report: Report, text: Callable[[], str], dot: Optional[Callable[[], str]] = None) -> None:
    if getattr(args, "dot", False) and dot is not None:
        sys.stdout.write(dot())
    elif getattr(args, "json", False):
        sys.stdout.write(dump_json(report))
    else:
        sys.stdout.write(text().rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# Commands


def cmd_stallings(args) -> int:
    aut = automaton_for(_words(args.gens), args.rank)
    results = {"automaton": aut.to_dict()}
    if args.word is not None:
        results["contains"] = aut.contains(Word.parse(args.word))
    report = simple_report("stallings", results, generators=args.gens, rank=args.rank)

    def text() -> str:
        lines = [repr(aut)] + [f"  {s} -{format_word((c,))}-> {t}" for s, c, t in aut.edges()]
        if args.word is not None:
            lines.append(f"{args.word or 'e'} in H: {results['contains']}")
        return "\n".join(lines)

    _emit(args, report, text, aut.to_dot)
    return EXIT_OK


def cmd_malnormal(args) -> int:
    aut = automaton_for(_words(args.gens), args.rank)
    scan = malnormality_scan(aut, args.radius, args.cap)
    report = simple_report("malnormal", scan.to_dict(), generators=args.gens, rank=args.rank)

    def text() -> str:
        if scan.none_within_bounds:
            return f"no violation for |x| <= {args.radius}, |w| <= {args.cap} ({scan.scanned} elements)"
        return "\n".join(f"x={format_word(x)} witness={format_word(w)} ({n} words)" for x, w, n in scan.violations)

    _emit(args, report, text)
    return EXIT_OK


def cmd_equal(args) -> int:
    p = _presentation(args)
    verdict = equality_oracle(Word.parse(args.u), Word.parse(args.v), p, strategy=args.strategy)
    report = simple_report("equal", verdict.to_dict(), u=args.u, v=args.v, presentation=p.to_dict())
    _emit(args, report, lambda: f"{verdict.kind.value} ({verdict.strategy})\n" + "\n".join(verdict.witness))
    return EXIT_OK


def cmd_ball(args) -> int:
    p = _presentation(args)
    ball = build_ball(p, args.radius)
    if args.save:
        ball.save(args.save)
    results = {
        "vertices": len(ball),
        "spheres": [len(ball.sphere(r)) for r in range(args.radius + 1)],
        "certified": ball.certified,
    }
    report = simple_report("ball", results, radius=args.radius, presentation=p.to_dict())
    _emit(args, report, lambda: f"{ball!r}\nspheres: {results['spheres']}", ball.to_dot)
    return EXIT_OK


def _coned_for(args):
    p, sub, side = relative_setting(_setting_name(args))
    ball = build_ball(p, args.radius, side_a=side)
    return ball, sub, build_coned(ball, sub)


def cmd_dhat(args) -> int:
    ball, sub, coned = _coned_for(args)
    value = coned.dhat(Word.parse(args.h))
    report = simple_report("dhat", value.to_dict(), h=args.h, radius=args.radius, subgroup=sub.to_dict())

    def text() -> str:
        shown = value.value if value.finite else value.status
        path = " -> ".join(format_word(w) or "e" for w in value.path)
        return f"d̂(e, {args.h or 'e'}) = {shown}{' (truncated)' if value.truncated else ''}\n{path}"

    _emit(args, report, text, coned.to_dot)
    return EXIT_OK


def cmd_dhat_ball(args) -> int:
    ball, sub, coned = _coned_for(args)
    rel = coned.dhat_ball(args.r, args.horizon)
    report = simple_report("dhat-ball", rel.to_dict(), r=args.r, radius=args.radius, subgroup=sub.to_dict())

    def text() -> str:
        flag = " (truncated)" if rel.truncated else ""
        return f"|B(e, {args.r})| = {len(rel)}{flag}\n" + " ".join(format_word(w) or "e" for w in rel.elements)

    _emit(args, report, text, coned.to_dot)
    return EXIT_OK


def cmd_evidence(args) -> int:
    p, sub, side = relative_setting(args.case)
    ball = build_ball(p, args.radius, side_a=side)
    evidence = collect_evidence(args.case, ball, sub, args.cap or args.radius, args.r_max, horizons=args.horizons)
    report = Report(kind="evidence", case=args.case, parameters={"radius": args.radius}, results=evidence.to_dict())

    def text() -> str:
        rows = ", ".join(f"r={row.radius}:{row.count}" for row in evidence.condition_c)
        growth = ", ".join(f"R={row.horizon}:{row.count}" for row in evidence.growth)
        return (
            f"{args.case}: {evidence.verdict}"
            + (f" (witness {evidence.witness or 'e'})" if evidence.witness is not None else "")
            + f"\n(a) generates: {evidence.condition_a}"
            + f"\n(b) max geodesic diameter: {evidence.condition_b.max_diameter}"
            + f"\n(c) {rows}\n    growth at r={args.r_max}: {growth}"
        )

    _emit(args, report, text)
    return EXIT_OK


def cmd_qm_eval(args) -> int:
    results = {"value": brooks_eval(args.pattern, args.word)}
    if args.homogenize:
        results["homogenized"] = str(homogenize(brooks(args.pattern), args.word, args.homogenize))
    report = simple_report("qm-eval", results, pattern=args.pattern, word=args.word)
    _emit(args, report, lambda: "\n".join(f"{k}: {v}" for k, v in results.items()))
    return EXIT_OK


def cmd_qm_defect(args) -> int:
    mode = "exhaustive" if args.exhaustive else "sampled"
    pairs = PairSpec(mode, args.maxlen, count=args.samples, seed=args.seed)
    estimate = defect_estimate(brooks(args.pattern), pairs)
    report = simple_report("qm-defect", estimate.to_dict(), pattern=args.pattern, mode=mode, maxlen=args.maxlen, seed=args.seed)
    _emit(
        args,
        report,
        lambda: f"defect >= {estimate.value} at ({format_word(estimate.argmax[0]) or 'e'}, {format_word(estimate.argmax[1]) or 'e'})",
    )
    return EXIT_OK


def cmd_ggh_eval(args) -> int:
    model = model_from_toml(_read(args.model))
    words = _tuple(args.tuple)
    c = quasimorphism_cochain(brooks(args.pattern))
    value = ib_eval(model, c, words)
    report = simple_report("ggh-eval", {"value": str(value)}, pattern=args.pattern, tuple=words, model=model.to_dict())
    _emit(args, report, lambda: str(value))
    return EXIT_OK


def cmd_ggh_lemma(args) -> int:
    if args.schedule != "default":
        raise ConfigError(f"unknown schedule {args.schedule!r}")
    schedule = default_schedule(args.steps)
    rows = lemma_residual(schedule, quasimorphism_cochain(brooks(args.pattern), bound=args.norm), _tuple(args.tuple))
    report = simple_report("ggh-lemma", {"rows": [r.to_dict() for r in rows]}, steps=args.steps, pattern=args.pattern)
    report.check("residual <= bound", all(r.holds for r in rows))
    _emit(args, report, lambda: "\n".join(f"{r.step}: {float(r.residual):.6g} <= {float(r.bound):.6g}" for r in rows))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify_hom(args) -> int:
    if args.search_genus is not None:
        section = surface_section(args.search_genus)
        found = search_retraction(section, args.max_image_length)
        if found is None:
            report = simple_report("verify-hom", {"status": "not found"}, genus=args.search_genus)
            _emit(args, report, lambda: "no retraction found")
            return EXIT_FAILED
        retraction, verdict = found, verify_retraction(found, section)
    else:
        retraction, section = hom_from_toml(_read(args.spec))
        verdict = verify_retraction(retraction, section) if section else verify_homomorphism(retraction)
    results = {"verdict": verdict.to_dict(), "map": retraction.to_dict()}
    report = simple_report("verify-hom", results)
    _emit(args, report, lambda: f"{verdict.status} ({verdict.stage})\n{retraction!r}")
    return EXIT_OK if verdict.verified else EXIT_FAILED


def cmd_run(args) -> int:
    if args.spec:
        spec = case_from_toml(_read(args.spec))
    else:
        spec = case_spec(args.case, seed=args.seed, radius=args.radius, cap=args.cap, r_max=args.r_max)
    report = run_case(spec)

    def text() -> str:
        lines = [f"case {spec.id}: {'PASS' if report.passed else 'FAIL'}"]
        lines += [f"  [{'x' if c.passed else ' '}] {c.name} {c.detail}".rstrip() for c in report.checks]
        return "\n".join(lines)

    _emit(args, report, text)
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# Parser


def _group_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--genus", type=int, help="non-orientable surface group of this genus")
    p.add_argument("--orientable", action="store_true")
    p.add_argument("--rank", type=int, default=2, help="rank of a free or one-relator group")
    p.add_argument("--relator", help="single relator over the first --rank letters")
    p.add_argument("--presentation", help="TOML presentation file")


def _output_flags(p: argparse.ArgumentParser, dot: bool = False) -> None:
    p.add_argument("--json", action="store_true", help="print the JSON report")
    if dot:
        p.add_argument("--dot", action="store_true", help="print graphviz DOT source")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ggt", description="Computational group theory toolkit.")
    parser.add_argument("--version", action="version", version=f"ggt {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stallings", help="fold a subgroup of a free group")
    p.add_argument("--gens", required=True, help="comma-separated generator words")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--word", help="membership query")
    _output_flags(p, dot=True)
    p.set_defaults(func=cmd_stallings)

    p = sub.add_parser("malnormal", help="scan H ∩ xHx^-1 in a free group")
    p.add_argument("--gens", required=True)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--cap", type=int, default=4)
    _output_flags(p)
    p.set_defaults(func=cmd_malnormal)

    p = sub.add_parser("equal", help="decide u = v")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    _group_flags(p)
    _output_flags(p)
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("ball", help="build a Cayley ball")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--save", help="write the ball as JSON")
    _group_flags(p)
    _output_flags(p, dot=True)
    p.set_defaults(func=cmd_ball)

    for name, func, help_text in (
        ("dhat", cmd_dhat, "relative distance d̂(e, h)"),
        ("dhat-ball", cmd_dhat_ball, "relative ball B_d̂(e, r)"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--genus", type=int)
        p.add_argument("--case", help="gN, f2-in-fN or counterexample")
        p.add_argument("--radius", type=int, default=5, help="word-length radius of the examined ball")
        if name == "dhat":
            p.add_argument("--h", required=True)
        else:
            p.add_argument("--r", type=int, required=True)
            p.add_argument("--horizon", type=int)
        _output_flags(p, dot=True)
        p.set_defaults(func=func)

    p = sub.add_parser("evidence", help="finite evidence for hyperbolic embedding")
    p.add_argument("--case", required=True, help="gN, f2-in-fN or counterexample")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--cap", type=int)
    p.add_argument("--r-max", dest="r_max", type=int, default=4)
    p.add_argument("--horizons", type=lambda s: [int(x) for x in s.split(",")])
    _output_flags(p)
    p.set_defaults(func=cmd_evidence)

    p = sub.add_parser("qm-eval", help="evaluate a Brooks quasimorphism")
    p.add_argument("--pattern", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--homogenize", type=int, help="depth N of the homogenization estimate")
    _output_flags(p)
    p.set_defaults(func=cmd_qm_eval)

    p = sub.add_parser("qm-defect", help="observed defect of a Brooks quasimorphism")
    p.add_argument("--pattern", required=True)
    p.add_argument("--maxlen", type=int, default=8)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    _output_flags(p)
    p.set_defaults(func=cmd_qm_defect)

    p = sub.add_parser("ggh-eval", help="integrate a Brooks cochain over a region model")
    p.add_argument("--model", required=True, help="TOML region model")
    p.add_argument("--pattern", required=True)
    p.add_argument("--tuple", required=True, help="comma-separated words")
    _output_flags(p)
    p.set_defaults(func=cmd_ggh_eval)

    p = sub.add_parser("ggh-lemma", help="residual table along an epsilon schedule")
    p.add_argument("--schedule", default="default")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--pattern", default="ab")
    p.add_argument("--tuple", default="abAB")
    p.add_argument("--norm", type=int, default=1, help="declared sup norm of the cochain")
    _output_flags(p)
    p.set_defaults(func=cmd_ggh_lemma)

    p = sub.add_parser("verify-hom", help="verify a homomorphism or retraction")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="TOML homomorphism spec")
    group.add_argument("--search-genus", dest="search_genus", type=int, help="search a retraction of N_g onto F2")
    p.add_argument("--max-image-length", dest="max_image_length", type=int, default=2)
    _output_flags(p)
    p.set_defaults(func=cmd_verify_hom)

    p = sub.add_parser("run", help="run a canned case")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--case", choices=CASE_IDS)
    target.add_argument("--spec", help="TOML case spec")
    p.add_argument("--seed", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--r-max", dest="r_max", type=int)
    _output_flags(p)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging("DEBUG" if args.verbose else None)
        return args.func(args)
    except GGTError as exc:
        sys.stderr.write(f"ggt {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
