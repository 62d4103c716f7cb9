"""
Finite-radius evidence for hyperbolic embedding.

Each check inspects one bounded ball and reports what it saw together with
the radii and caps used. A "consistent" verdict is evidence only.

Classes:
    DiameterScan: result of the diam <= M criterion scan
    FinitenessRow: one row of the local finiteness table
    EmbeddingEvidence: conditions (a), (b), (c) and a verdict for one case
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ggt.cayley import CayleyBall, build_ball
from ggt.coned import ConedGraph, SubgroupResolver, SubgroupSpec, build_coned
from ggt.errors import PreconditionError
from ggt.fpgroup import Presentation, SearchBudget, equality_oracle
from ggt.freesub import MalnormalityReport
from ggt.words import Word, concat, enumerate_words_over, format_word, invert, power

logger = logging.getLogger(__name__)

COMMUTATOR = Word.parse("abAB")

CATEGORY_BOTH = "both_in_H"
CATEGORY_ONE = "one_in_H"
CATEGORY_NONE = "none_in_H"


def condition_a(coned: ConedGraph) -> Tuple[bool, Optional[Word]]:
    """X ∪ H generates the ball; returns the shortlex-first unreachable vertex otherwise."""
    dist = coned.sigma_distances()
    for vid, d in enumerate(dist):
        if d < 0:
            return False, coned.ball.reps[vid]
    return True, None


@dataclass
class DiameterScan:
    cap: int
    max_diameter: int
    witness_h: Optional[Word]
    witness_geodesic: List[Word]
    by_category: Dict[str, int]
    scanned_elements: int
    scanned_geodesics: int
    certified: bool
    truncated_geodesics: bool = False

    def to_dict(self) -> dict:
        return {
            "cap": self.cap,
            "max_diameter": self.max_diameter,
            "witness_h": format_word(self.witness_h) if self.witness_h is not None else None,
            "witness_geodesic": [format_word(w) for w in self.witness_geodesic],
            "by_category": dict(self.by_category),
            "scanned_elements": self.scanned_elements,
            "scanned_geodesics": self.scanned_geodesics,
            "certified": self.certified,
            "truncated_geodesics": self.truncated_geodesics,
        }


def _category(a: bool, b: bool) -> str:
    if a and b:
        return CATEGORY_BOTH
    return CATEGORY_ONE if a or b else CATEGORY_NONE


def geodesic_sigma_diameter(coned: ConedGraph, path: Sequence[int]) -> Tuple[int, Dict[str, int]]:
    """
    Coned diameter of the vertex set of a ball geodesic, given as vertex ids.

    Pairwise distances use left invariance: ``d(p_i, p_j)`` is the coned
    distance from e to the subword read between them.
    """
    ball = coned.ball
    sigma = coned.sigma_distances()
    label = tuple(ball.path_label(path))
    best = 0
    by_category = {CATEGORY_BOTH: 0, CATEGORY_ONE: 0, CATEGORY_NONE: 0}
    for i in range(len(path)):
        for j in range(i + 1, len(path)):
            d = sigma[ball.vertex(label[i:j])]
            cat = _category(coned.in_h[path[i]], coned.in_h[path[j]])
            by_category[cat] = max(by_category[cat], d)
            best = max(best, d)
    return best, by_category


def diam_criterion_scan(
    ball: CayleyBall, coned: ConedGraph, h_length_cap: int, geodesic_limit: int = 500
) -> DiameterScan:
    """Maximum coned diameter over every ball geodesic from e to h in H with ``|h| <= h_length_cap``."""
    if h_length_cap > ball.radius:
        raise PreconditionError(f"cap {h_length_cap} exceeds ball radius {ball.radius}")
    scan = DiameterScan(
        cap=h_length_cap,
        max_diameter=0,
        witness_h=None,
        witness_geodesic=[],
        by_category={CATEGORY_BOTH: 0, CATEGORY_ONE: 0, CATEGORY_NONE: 0},
        scanned_elements=0,
        scanned_geodesics=0,
        certified=coned.certified,
    )
    for vid, level in enumerate(ball.levels):
        if level == 0 or level > h_length_cap or not coned.in_h[vid]:
            continue
        scan.scanned_elements += 1
        paths = ball.geodesic_id_paths(0, vid, geodesic_limit)
        if len(paths) >= geodesic_limit:
            scan.truncated_geodesics = True
        for path in paths:
            scan.scanned_geodesics += 1
            d, cats = geodesic_sigma_diameter(coned, path)
            for cat, value in cats.items():
                scan.by_category[cat] = max(scan.by_category[cat], value)
            if d > scan.max_diameter:
                scan.max_diameter = d
                scan.witness_h = ball.reps[vid]
                scan.witness_geodesic = [ball.reps[x] for x in path]
    logger.info(
        "diameter scan cap=%d: %d elements, %d geodesics, max %d",
        h_length_cap,
        scan.scanned_elements,
        scan.scanned_geodesics,
        scan.max_diameter,
    )
    return scan


@dataclass
class FinitenessRow:
    radius: int
    horizon: int
    count: int
    truncated: bool

    def to_dict(self) -> dict:
        return {"radius": self.radius, "horizon": self.horizon, "count": self.count, "truncated": self.truncated}


def local_finiteness_scan(coned: ConedGraph, r_max: int, horizon: Optional[int] = None) -> List[FinitenessRow]:
    """|B_d̂(e, r)| for r = 0..r_max."""
    rows = []
    for r in range(r_max + 1):
        rel = coned.dhat_ball(r, horizon)
        rows.append(FinitenessRow(r, rel.horizon, len(rel), rel.truncated))
    return rows


def horizon_growth(coned: ConedGraph, r: int, horizons: Sequence[int]) -> List[FinitenessRow]:
    """The same relative radius measured inside balls of increasing word-length radius."""
    rows = []
    for horizon in sorted(set(horizons)):
        rel = coned.dhat_ball(r, horizon)
        rows.append(FinitenessRow(r, rel.horizon, len(rel), rel.truncated))
    return rows


def default_horizons(radius: int) -> Tuple[int, ...]:
    return tuple(sorted({max(1, radius - 4), max(1, radius - 2), radius}))


def h_words(spec: SubgroupSpec, resolver: SubgroupResolver, cap: int) -> List[Word]:
    """Nontrivial reduced words of H up to ``cap`` letters, shortlex."""
    if resolver.automaton is not None:
        return resolver.automaton.accepted_words(cap)
    return list(enumerate_words_over(sorted(spec.factor), cap))[1:]


def ambient_malnormality_scan(
    p: Presentation,
    spec: SubgroupSpec,
    radius: int,
    cap: int,
    budget: Optional[SearchBudget] = None,
    ball: Optional[CayleyBall] = None,
) -> MalnormalityReport:
    """
    For each ball element x outside H, the words w in H with ``|w| <= cap`` and ``x^-1 w x`` in H.

    Elements x are the shortlex representatives of the ball, e excluded.
    """
    if radius < 1 or cap < 1:
        raise PreconditionError("radius and cap must be at least 1")
    if ball is None or ball.radius < radius:
        ball = build_ball(p, radius, budget)
    resolver = SubgroupResolver(p, spec, budget)
    words = h_words(spec, resolver, cap)
    report = MalnormalityReport(radius=radius, cap=cap)
    for vid, x in enumerate(ball.reps):
        if ball.levels[vid] == 0 or ball.levels[vid] > radius:
            continue
        member = resolver.contains(x)
        if member is not False:
            continue
        report.scanned += 1
        witnesses = []
        for w in words:
            if resolver.contains(concat(concat(invert(x), w), x)):
                witnesses.append(w)
        if witnesses:
            report.violations.append((x, witnesses[0], len(witnesses)))
    logger.info("ambient malnormality scan: %d of %d elements violate", len(report.violations), report.scanned)
    return report


def commutator_exponent(
    w: Sequence[int], p: Presentation, budget: Optional[SearchBudget] = None, base: Word = COMMUTATOR
) -> Optional[int]:
    """k with ``w = base^k`` in G, or None when no exponent up to ``|w|`` matches."""
    w = Word(w)
    bound = len(w) + 1
    splitting = p.splitting(base.generators()) if not p.is_free else None
    if splitting is not None:
        target = splitting.from_word(w)
        for k in sorted(range(-bound, bound + 1), key=abs):
            if splitting.from_word(power(base, k)) == target:
                return k
        return None
    for k in sorted(range(-bound, bound + 1), key=abs):
        if equality_oracle(w, power(base, k), p, budget).is_equal:
            return k
    return None


VERDICT_CONSISTENT = "consistent-with-embedding"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class EmbeddingEvidence:
    case: str
    radius: int
    certified: bool
    condition_a: bool
    condition_a_witness: Optional[Word]
    condition_b: DiameterScan
    condition_c: List[FinitenessRow]
    growth: List[FinitenessRow]
    verdict: str
    witness: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return self.verdict.startswith("violated")

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "radius": self.radius,
            "certified": self.certified,
            "condition_a": {
                "generates": self.condition_a,
                "witness": format_word(self.condition_a_witness) if self.condition_a_witness is not None else None,
            },
            "condition_b": self.condition_b.to_dict(),
            "condition_c": [row.to_dict() for row in self.condition_c],
            "growth": [row.to_dict() for row in self.growth],
            "verdict": self.verdict,
            "witness": self.witness,
            "notes": list(self.notes),
        }


def _growth_witness(coned: ConedGraph, r: int, horizons: Sequence[int]) -> Optional[str]:
    small, large = sorted(horizons)[-2:]
    before = set(coned.dhat_ball(r, small).elements)
    new = [w for w in coned.dhat_ball(r, large).elements if w not in before]
    return format_word(new[0]) if new else None


def collect_evidence(
    case: str,
    ball: CayleyBall,
    spec: SubgroupSpec,
    h_length_cap: int,
    r_max: int,
    diameter_bound: Optional[int] = None,
    horizons: Optional[Sequence[int]] = None,
    coned: Optional[ConedGraph] = None,
) -> EmbeddingEvidence:
    """
    Run the three condition checks on one ball.

    Condition (c) is reported violated when ``|B_d̂(e, r_max)|`` strictly
    increases across at least three horizons; the witness is an element that
    only the largest horizon sees.
    """
    coned = coned or build_coned(ball, spec)
    horizons = tuple(sorted(set(horizons or default_horizons(ball.radius))))
    generates, unreachable = condition_a(coned)
    scan = diam_criterion_scan(ball, coned, min(h_length_cap, ball.radius))
    table = local_finiteness_scan(coned, r_max)
    growth = horizon_growth(coned, r_max, horizons)
    evidence = EmbeddingEvidence(
        case=case,
        radius=ball.radius,
        certified=coned.certified,
        condition_a=generates,
        condition_a_witness=unreachable,
        condition_b=scan,
        condition_c=table,
        growth=growth,
        verdict=VERDICT_CONSISTENT,
    )
    counts = [row.count for row in growth]
    growing = len(counts) >= 3 and all(a < b for a, b in zip(counts, counts[1:]))
    if not generates:
        evidence.verdict = "violated(a)"
        evidence.witness = format_word(unreachable)
    elif growing:
        evidence.verdict = "violated(c)"
        evidence.witness = _growth_witness(coned, r_max, horizons)
        evidence.notes.append(f"|B(e,{r_max})| grows with the horizon: {counts}")
    elif diameter_bound is not None and scan.max_diameter > diameter_bound:
        evidence.verdict = VERDICT_INCONCLUSIVE
        evidence.notes.append(f"geodesic diameter {scan.max_diameter} exceeds {diameter_bound}")
    elif not coned.certified:
        evidence.verdict = VERDICT_INCONCLUSIVE
        evidence.notes.append("ball not certified")
    if evidence.violated:
        logger.warning("case %s: %s (witness %s)", case, evidence.verdict, evidence.witness)
    return evidence
