"""
Canned reproduction cases.

Each case builds what it needs, runs the relevant checks and returns a
``Report`` whose ``checks`` decide the exit status of ``ggt run``.

Classes:
    CaseSpec: case id plus optional overrides of its default parameters
"""

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from ggt.cayley import build_ball
from ggt.coned import SubgroupSpec, build_coned, path_sigma_diameter, verify_admissible_path
from ggt.errors import ConfigError, NotInBall
from ggt.fpgroup import Presentation, cross_validate, free_presentation, one_relator_presentation, surface_presentation
from ggt.freesub import automaton_for, conjugate_intersection, fold, malnormality_scan, truncated_conjugate_family
from ggt.ggh import (
    A_A_REGION,
    A_B_REGION,
    A_REGION,
    B_REGION,
    COMPLEMENT,
    REGION_IDS,
    cocycle_check,
    default_schedule,
    delta_commute_check,
    ib_eval,
    invariance_check,
    lemma_residual,
    random_conjugators,
    region_model,
)
from ggt.hypcheck import (
    ambient_malnormality_scan,
    collect_evidence,
    commutator_exponent,
)
from ggt.quasi import (
    BoundedCochain,
    PairSpec,
    brooks,
    cauchy_check,
    coboundary,
    defect_estimate,
    from_quasimorphism,
    phi_inverse,
    phi_iso,
    quasimorphism_cochain,
    sample_tuples,
)
from ggt.reports import Report
from ggt.words import Word, concat, cyclic_reduce, format_word, invert, power, random_words

logger = logging.getLogger(__name__)

CASE_IDS = (
    "g3",
    "g4",
    "g5plus",
    "f2-in-fn",
    "counterexample",
    "free-malnormal",
    "word-problem",
    "brooks-suite",
    "ggh-suite",
)
SEEDED = ("brooks-suite", "ggh-suite")

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "g3": {"genus": 3, "radius": 6, "cap": 6, "r_max": 3},
    "g4": {"genus": 4, "radius": 6, "cap": 6, "r_max": 4},
    "g5plus": {"genus": 5, "radius": 4, "cap": 3, "r_max": 5},
    "f2-in-fn": {"rank": 4, "radius": 6, "cap": 6, "r_max": 3, "malnormal_radius": 4, "malnormal_cap": 6},
    "counterexample": {"radius": 5, "cap": 3, "r_max": 4, "malnormal_radius": 1, "malnormal_cap": 4, "powers": 6},
    "free-malnormal": {"cap": 13, "truncation": 5},
    "word-problem": {"genus": 3, "max_length": 4},
    "brooks-suite": {"samples": 200, "max_length": 8, "defect_length": 3},
    "ggh-suite": {"samples": 100, "max_length": 6, "steps": 10},
}

# diam bounds along geodesics, per genus
DIAMETER_BOUNDS = {3: 3, 4: 5}
# d̂(e, abAB) where the ball reaches it
COMMUTATOR_DHAT = {3: 2, 4: 4}

BROOKS_PATTERNS = ("a", "b", "ab", "aB", "aab", "abb", "abAB", "aabb", "abab", "aaB")
FIGURE_WORD = "aaBCCCCabccAba"


class CaseSpec(BaseModel):
    id: Literal[
        "g3", "g4", "g5plus", "f2-in-fn", "counterexample", "free-malnormal", "word-problem", "brooks-suite", "ggh-suite"
    ]
    genus: Optional[int] = None
    rank: Optional[int] = None
    radius: Optional[int] = None
    cap: Optional[int] = None
    r_max: Optional[int] = None
    horizons: Optional[List[int]] = None
    malnormal_radius: Optional[int] = None
    malnormal_cap: Optional[int] = None
    powers: Optional[int] = None
    truncation: Optional[int] = None
    max_length: Optional[int] = None
    defect_length: Optional[int] = None
    samples: Optional[int] = None
    steps: Optional[int] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check(self) -> "CaseSpec":
        if self.id in SEEDED and self.seed is None:
            raise ValueError(f"case {self.id} needs a seed")
        if self.id == "g5plus" and self.genus is not None and self.genus < 5:
            raise ValueError("g5plus needs genus >= 5")
        if self.id == "f2-in-fn" and self.rank is not None and self.rank < 3:
            raise ValueError("f2-in-fn needs rank >= 3")
        for name in ("radius", "cap", "r_max", "samples", "steps", "max_length"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")
        return self

    def resolved(self) -> Dict[str, Any]:
        params = dict(DEFAULTS[self.id])
        for key, value in self.model_dump(exclude={"id"}).items():
            if value is not None:
                params[key] = value
        return params


def relative_setting(name: str) -> Tuple[Presentation, SubgroupSpec, Optional[frozenset]]:
    """Presentation, subgroup and amalgam side for ``gN``, ``f2-in-fN`` or ``counterexample``."""
    match = re.fullmatch(r"g(\d+)", name)
    if match:
        genus = int(match.group(1))
        return surface_presentation(genus), SubgroupSpec.surface(genus), frozenset({0, 1})
    match = re.fullmatch(r"f2-in-f(\d+)", name)
    if match:
        rank = int(match.group(1))
        return free_presentation(rank), SubgroupSpec.free_factor(rank), None
    if name == "counterexample":
        return one_relator_presentation(3, "aabbcc", name="aabbcc"), SubgroupSpec.squares(), frozenset({0, 1})
    raise ConfigError(f"unknown setting {name!r}; use gN, f2-in-fN or counterexample")


def case_spec(case_id: str, **overrides: Any) -> CaseSpec:
    try:
        return CaseSpec(id=case_id, **{k: v for k, v in overrides.items() if v is not None})
    except ValidationError as exc:
        raise ConfigError(f"invalid case spec: {exc}") from exc


def case_from_toml(text: str) -> CaseSpec:
    try:
        return CaseSpec.model_validate(tomllib.loads(text))
    except (tomllib.TOMLDecodeError, ValidationError) as exc:
        raise ConfigError(f"invalid case spec: {exc}") from exc


# ---------------------------------------------------------------------------
# Relative-metric cases


def _relative_ball_table(coned, p, r_max: int) -> List[Dict[str, Any]]:
    rows = []
    for r in range(r_max + 1):
        rel = coned.dhat_ball(r)
        exponents = [commutator_exponent(w, p) for w in rel.elements]
        rows.append(
            {
                "radius": r,
                "count": len(rel),
                "truncated": rel.truncated,
                "elements": [format_word(w) for w in rel.elements],
                "commutator_exponents": exponents,
            }
        )
    return rows


def _symmetric_interval(exponents: List[Optional[int]]) -> bool:
    if any(k is None for k in exponents):
        return False
    top = max((abs(k) for k in exponents), default=0)
    return sorted(exponents) == list(range(-top, top + 1))


def _run_surface(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    genus = params["genus"]
    p = surface_presentation(genus)
    sub = SubgroupSpec.surface(genus)
    ball = build_ball(p, params["radius"], side_a={0, 1})
    coned = build_coned(ball, sub)
    report = Report(kind="case", case=spec.id, parameters=params)

    bound = DIAMETER_BOUNDS.get(genus)
    evidence = collect_evidence(
        spec.id, ball, sub, params["cap"], params["r_max"], diameter_bound=bound, horizons=params.get("horizons"), coned=coned
    )
    table = _relative_ball_table(coned, p, params["r_max"])
    report.results["vertices"] = len(ball)
    report.results["evidence"] = evidence.to_dict()
    report.results["relative_balls"] = table

    report.check("ball certified", ball.certified)
    report.check("X and H generate the ball", evidence.condition_a)
    if bound is not None:
        report.check(
            f"geodesic coned diameter <= {bound}",
            evidence.condition_b.max_diameter <= bound,
            f"max {evidence.condition_b.max_diameter}",
        )
    report.check(
        "relative balls are symmetric runs of commutator powers",
        all(_symmetric_interval(row["commutator_exponents"]) for row in table),
    )
    commutator = Word.parse("abAB")
    try:
        value = coned.dhat(commutator)
        report.results["dhat_commutator"] = value.to_dict()
        if genus in COMMUTATOR_DHAT:
            report.check(f"d̂(abAB) = {COMMUTATOR_DHAT[genus]}", value.value == COMMUTATOR_DHAT[genus])
    except NotInBall:
        report.results["dhat_commutator"] = None
    if genus >= 5:
        rel = coned.dhat_ball(5)
        report.check("B_d̂(e, 5) = {e}", [format_word(w) for w in rel.elements] == [""])
    if genus == 3:
        resolver = coned.resolver
        diameter, witness = path_sigma_diameter(resolver, Word.parse(FIGURE_WORD))
        report.results["figure_geodesic"] = {"word": FIGURE_WORD, "diameter_bound": diameter, "pair": list(witness)}
        report.check("figure geodesic coned diameter <= 3", diameter is not None and diameter <= 3)
        c = Word.parse("c")
        shapes = []
        for n in range(2, 6):
            path = [Word(), c, power(c, 2 * n - 1), power(c, 2 * n)]
            check = verify_admissible_path(resolver, path)
            shapes.append({"n": n, "valid": check.valid, "length": check.length, "steps": check.steps})
        report.results["odd_power_paths"] = shapes
        report.check("d̂(e, c^2n) <= 3 via e, c, c^(2n-1), c^2n", all(s["valid"] for s in shapes))
    return report


def _run_free_factor(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    rank = params["rank"]
    p = free_presentation(rank)
    sub = SubgroupSpec.free_factor(rank)
    ball = build_ball(p, params["radius"])
    coned = build_coned(ball, sub)
    report = Report(kind="case", case=spec.id, parameters=params)
    evidence = collect_evidence(spec.id, ball, sub, params["cap"], params["r_max"], horizons=params.get("horizons"), coned=coned)
    scan = malnormality_scan(automaton_for(["a", "b"], rank), params["malnormal_radius"], params["malnormal_cap"])
    report.results["evidence"] = evidence.to_dict()
    report.results["malnormality"] = scan.to_dict()
    report.check("X and H generate the ball", evidence.condition_a)
    report.check("geodesic coned diameter = 1", evidence.condition_b.max_diameter == 1)
    report.check("relative balls are {e}", all(row.count == 1 for row in evidence.condition_c))
    report.check("no malnormality violation", scan.none_within_bounds)
    return report


def _run_counterexample(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    p = one_relator_presentation(3, "aabbcc", name="aabbcc")
    sub = SubgroupSpec.squares()
    ball = build_ball(p, params["radius"], side_a={0, 1})
    coned = build_coned(ball, sub)
    resolver = coned.resolver
    report = Report(kind="case", case=spec.id, parameters=params)

    evidence = collect_evidence(spec.id, ball, sub, params["cap"], params["r_max"], horizons=params.get("horizons"), coned=coned)
    report.results["evidence"] = evidence.to_dict()
    report.check("local finiteness fails across horizons", evidence.verdict == "violated(c)", evidence.witness or "")

    a = Word.parse("a")
    paths = []
    for n in range(2, params["powers"] + 1):
        path = [Word(), a, power(a, 2 * n - 1), power(a, 2 * n)]
        check = verify_admissible_path(resolver, path)
        paths.append({"n": n, "valid": check.valid, "length": check.length, "steps": check.steps})
    report.results["power_paths"] = paths
    report.check("d̂(e, a^2n) <= 3 via e, a, a^(2n-1), a^2n", all(x["valid"] and x["length"] <= 3 for x in paths))

    in_ball = []
    for n in range(1, params["powers"] + 1):
        try:
            value = coned.dhat(power(a, 2 * n))
        except NotInBall:
            break
        in_ball.append({"n": n, **value.to_dict()})
    report.results["dhat_powers_in_ball"] = in_ball

    scan = ambient_malnormality_scan(p, sub, params["malnormal_radius"], params["malnormal_cap"], ball=ball)
    report.results["malnormality"] = scan.to_dict()
    report.check("a conjugates part of H into H", a in scan.violating_elements())
    report.results["a_conjugates_bb_into_H"] = resolver.contains(concat(concat(a, Word.parse("bb")), invert(a)))
    return report


def _run_free_malnormal(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    report = Report(kind="case", case=spec.id, parameters=params)
    aut = automaton_for(["aa", "ab", "aB"], 2)
    scan = malnormality_scan(aut, 1, 3)
    report.results["squares_and_products"] = {"automaton": aut.to_dict(), "scan": scan.to_dict()}
    report.check("b conjugates aa into H", Word.parse("b") in scan.violating_elements())

    family = fold(truncated_conjugate_family(params["truncation"]), 2)
    witnesses = conjugate_intersection(family, Word.parse("a"), params["cap"])
    report.results["truncated_family"] = {
        "states": family.num_states,
        "witness_count": len(witnesses),
        "first_witnesses": [format_word(w) for w in witnesses[:8]],
    }
    report.check("H ∩ aHa^-1 has at least 4 elements", len(witnesses) >= 4)
    return report


def _run_word_problem(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    p = surface_presentation(params["genus"])
    result = cross_validate(p, params["max_length"])
    report = Report(kind="case", case=spec.id, parameters=params, results={"cross_validation": result.to_dict()})
    report.check("strategies agree", not result.disagreements)
    report.check("unknown verdicts below 1%", result.unknown_fraction < 0.01, f"{result.unknown_fraction:.4f}")
    return report


# ---------------------------------------------------------------------------
# Seeded suites


def _run_brooks(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    seed = params["seed"]
    rng = np.random.default_rng(seed)
    report = Report(kind="case", case=spec.id, parameters=params)
    words = random_words(rng, 2, params["max_length"], params["samples"])
    rows = []
    antisymmetric = cauchy_ok = True
    for pattern in BROOKS_PATTERNS:
        f = brooks(pattern)
        defect = defect_estimate(f, PairSpec("exhaustive", params["defect_length"]))
        antisymmetric &= all(f(invert(g)) == -f(g) for g in words)
        cauchy = []
        for g in words[:10]:
            core, _ = cyclic_reduce(g)
            for depth in (5, 10, 20):
                check = cauchy_check(f, core, depth, defect.value)
                cauchy_ok &= check.holds
                cauchy.append(str(check.difference))
        rows.append({"pattern": pattern, "defect": defect.to_dict(), "cauchy_differences": cauchy})
    report.results["patterns"] = rows
    report.check("Brooks antisymmetry", antisymmetric)
    report.check("homogenization Cauchy bound", cauchy_ok)

    f = brooks("ab")
    c = from_quasimorphism(f, "left")
    tuples4 = sample_tuples(2, 4, params["max_length"], params["samples"], seed + 1)
    tuples3 = [t[:3] for t in tuples4]
    tuples2 = [t[:2] for t in tuples4]
    delta2 = coboundary(coboundary(c))
    bar = quasimorphism_cochain(f)
    delta2_bar = coboundary(coboundary(bar))
    report.check("δδ = 0 (homogeneous)", all(delta2(*t) == 0 for t in tuples4))
    report.check("δ̄δ̄ = 0 (inhomogeneous)", all(delta2_bar(*t) == 0 for t in tuples3))
    phi_delta = phi_iso(coboundary(c))
    delta_phi = coboundary(phi_iso(c))
    report.check("φδ = δ̄φ", all(phi_delta(*t) == delta_phi(*t) for t in tuples2))
    round_trip = phi_inverse(phi_iso(c))
    report.check("φ⁻¹φ = id", all(round_trip(*t) == c(*t) for t in tuples2))
    return report


def _run_ggh(spec: CaseSpec, params: Dict[str, Any]) -> Report:
    seed = params["seed"]
    rng = np.random.default_rng(seed)
    report = Report(kind="case", case=spec.id, parameters=params)
    measures = {
        COMPLEMENT: Fraction(1, 4),
        A_REGION: Fraction(1, 2),
        A_A_REGION: Fraction(1, 10),
        A_B_REGION: Fraction(1, 10),
        B_REGION: Fraction(1, 20),
    }
    base_model = region_model(measures)
    f = brooks("ab")
    c1 = from_quasimorphism(f, "left")
    c_right = from_quasimorphism(f, "right")
    c2 = BoundedCochain(2, lambda x, y, z: f(concat(invert(x), z)) - f(concat(invert(y), z)), True, None, "c2")
    samples, max_length = params["samples"], params["max_length"]

    cocycle = commute = invariance = linear = True
    for _ in range(samples):
        model = base_model.with_conjugators(random_conjugators(rng, 3))
        w = random_words(rng, 2, max_length, 4)
        h = random_words(rng, 2, max_length, 1)[0]
        for region_id in REGION_IDS:
            cocycle &= cocycle_check(model, w[0], w[1], region_id)
        commute &= delta_commute_check(model, c1, w[:3])
        commute &= delta_commute_check(model, c2, w[:4])
        invariance &= invariance_check(model, c_right, w[:2], h, side="right")
        alpha, beta = Fraction(int(rng.integers(-5, 6))), Fraction(int(rng.integers(-5, 6)))
        combined = c1.scale(alpha) + c_right.scale(beta)
        linear &= ib_eval(model, combined, w[:2]) == alpha * ib_eval(model, c1, w[:2]) + beta * ib_eval(model, c_right, w[:2])
    report.check("cocycle identity on every region", cocycle)
    report.check("I commutes with δ (n = 1, 2)", commute)
    report.check("I of a right-invariant cochain is right-invariant", invariance)
    report.check("I is linear", linear)

    control = BoundedCochain(1, lambda x, y: f(x), True, None, "control")
    detected = not invariance_check(base_model, control, ["", ""], "ab", side="right")
    report.check("non-invariant control is detected", detected)

    schedule = default_schedule(params["steps"])
    rows = lemma_residual(schedule, quasimorphism_cochain(f, bound=1), ["abAB"])
    report.results["lemma_residual"] = [row.to_dict() for row in rows]
    report.check("residual <= bound at every step", all(row.holds for row in rows))
    report.check(
        "residual decreases to below 1% of its start",
        all(b.residual < a.residual for a, b in zip(rows, rows[1:])) and rows[-1].residual < rows[0].residual / 100,
    )
    return report


RUNNERS: Dict[str, Callable[[CaseSpec, Dict[str, Any]], Report]] = {
    "g3": _run_surface,
    "g4": _run_surface,
    "g5plus": _run_surface,
    "f2-in-fn": _run_free_factor,
    "counterexample": _run_counterexample,
    "free-malnormal": _run_free_malnormal,
    "word-problem": _run_word_problem,
    "brooks-suite": _run_brooks,
    "ggh-suite": _run_ggh,
}


def run_case(spec: CaseSpec) -> Report:
    """Run one canned case; the report is deterministic for a given spec."""
    params = spec.resolved()
    logger.info("running case %s with %s", spec.id, params)
    report = RUNNERS[spec.id](spec, params)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        logger.warning("case %s failed checks: %s", spec.id, ", ".join(failed))
    return report
