"""
Region-model evaluator for the Gambaudo–Ghys construction.

The surface is replaced by finitely many measured regions. On each region
the path map sends a word ω in the embedded F(a, b) to ``u t(ω) u^-1`` for
a fixed rule ``t`` and conjugator ``u``, so integrals over the surface are
exact finite sums.

Classes:
    Region: one measured region with its word rule
    RegionModel: a normalised family of regions and the constant Λ
    ResidualRow: one step of the residual table along a schedule
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from ggt.errors import ArityMismatch, ConfigError, PreconditionError, ScheduleError, UnknownRegion
from ggt.quasi import BoundedCochain, WordLike, as_word, coboundary
from ggt.words import IDENTITY, Word, concat, format_word, invert, random_word

logger = logging.getLogger(__name__)

COMPLEMENT = "complement"
A_REGION = "A"
A_A_REGION = "A_a"
A_B_REGION = "A_b"
B_REGION = "B"
REGION_IDS = (COMPLEMENT, A_REGION, A_A_REGION, A_B_REGION, B_REGION)
SIDE_REGIONS = (A_A_REGION, A_B_REGION, COMPLEMENT)

RULES = ("identity", "h_a", "h_b", "trivial", "homomorphism")
DEFAULT_RULES = {
    COMPLEMENT: "trivial",
    A_REGION: "identity",
    A_A_REGION: "h_a",
    A_B_REGION: "h_b",
    B_REGION: "trivial",
}

F2_RANK = 2


def _check_f2(w: Word) -> Word:
    if w.max_generator() >= F2_RANK:
        raise PreconditionError(f"{format_word(w)} is not a word in a, b")
    return w


def _substitute(w: Word, images: Tuple[Word, Word]) -> Word:
    out = IDENTITY
    for code in w:
        image = images[code >> 1]
        out = concat(out, invert(image) if code & 1 else image)
    return out


def retraction_to(generator: int):
    """Homomorphism F(a, b) -> <generator> killing the other letter."""

    def h(w: Word) -> Word:
        return Word(code for code in w if code >> 1 == generator)

    return h


h_a = retraction_to(0)
h_b = retraction_to(1)


@dataclass(frozen=True)
class Region:
    id: str
    measure: Fraction
    rule: str
    conjugator: Word = IDENTITY
    images: Optional[Tuple[Word, Word]] = None

    def __post_init__(self):
        if self.id not in REGION_IDS:
            raise UnknownRegion(f"unknown region {self.id!r}")
        if self.rule not in RULES:
            raise ConfigError(f"unknown rule {self.rule!r} for region {self.id}")
        if self.measure < 0:
            raise ConfigError(f"region {self.id} has negative measure")
        if self.rule == "homomorphism" and self.images is None:
            raise ConfigError(f"region {self.id} uses a homomorphism rule without images")

    def transform(self, w: Word) -> Word:
        if self.rule == "identity":
            t = w
        elif self.rule == "h_a":
            t = h_a(w)
        elif self.rule == "h_b":
            t = h_b(w)
        elif self.rule == "trivial":
            t = IDENTITY
        else:
            t = _substitute(w, self.images)
        return concat(concat(self.conjugator, t), invert(self.conjugator))

    def to_dict(self) -> dict:
        data = {
            "id": self.id,
            "measure": str(self.measure),
            "rule": self.rule,
            "conjugator": format_word(self.conjugator),
        }
        if self.images is not None:
            data["images"] = {"a": format_word(self.images[0]), "b": format_word(self.images[1])}
        return data


class RegionModel:
    """
    Measured regions of the surface and the constant Λ.

    Attributes:
        regions (dict[str, Region]): by region id
        lam (Fraction): Λ, the measure of the intersection of both neighbourhoods
    """

    def __init__(self, regions: Sequence[Region], lam: Fraction):
        self.regions: Dict[str, Region] = {}
        for region in regions:
            if region.id in self.regions:
                raise ConfigError(f"region {region.id} listed twice")
            self.regions[region.id] = region
        self.lam = Fraction(lam)
        total = sum((r.measure for r in self.regions.values()), Fraction(0))
        if total != 1:
            raise ConfigError(f"region measures sum to {total}, expected 1")
        if self.lam <= 0:
            raise ConfigError("Λ must be positive")
        if self.measure(A_REGION) > self.lam:
            raise ScheduleError(f"μ(A) = {self.measure(A_REGION)} exceeds Λ = {self.lam}")

    def region(self, region_id: str) -> Region:
        try:
            return self.regions[region_id]
        except KeyError:
            raise UnknownRegion(f"region {region_id!r} is not in the model") from None

    def measure(self, region_id: str) -> Fraction:
        region = self.regions.get(region_id)
        return region.measure if region is not None else Fraction(0)

    def with_conjugators(self, conjugators: Dict[str, Word]) -> "RegionModel":
        regions = [replace(r, conjugator=conjugators.get(r.id, r.conjugator)) for r in self.regions.values()]
        return RegionModel(regions, self.lam)

    def to_dict(self) -> dict:
        return {"lambda": str(self.lam), "regions": [r.to_dict() for r in self.regions.values()]}

    def __repr__(self) -> str:
        parts = ", ".join(f"{r.id}={r.measure}" for r in self.regions.values())
        return f"RegionModel(Λ={self.lam}, {parts})"


def region_model(
    measures: Dict[str, Fraction],
    lam: Fraction = Fraction(1, 2),
    rules: Optional[Dict[str, str]] = None,
    conjugators: Optional[Dict[str, Word]] = None,
    b_images: Optional[Tuple[Word, Word]] = None,
) -> RegionModel:
    """Model over the given measures with the default rule per region unless overridden."""
    rules = {**DEFAULT_RULES, **(rules or {})}
    conjugators = conjugators or {}
    regions = []
    for region_id, measure in measures.items():
        rule = rules.get(region_id, "trivial")
        images = b_images if rule == "homomorphism" else None
        regions.append(Region(region_id, Fraction(measure), rule, conjugators.get(region_id, IDENTITY), images))
    return RegionModel(regions, lam)


def random_conjugators(rng: np.random.Generator, max_length: int) -> Dict[str, Word]:
    return {rid: random_word(rng, F2_RANK, int(rng.integers(0, max_length + 1))) for rid in REGION_IDS}


# ---------------------------------------------------------------------------
# TOML models


class RegionConfig(BaseModel):
    id: str
    measure: str
    rule: Optional[str] = None
    conjugator: str = ""
    images: Optional[Dict[str, str]] = None

    @field_validator("measure")
    @classmethod
    def _rational(cls, value: str) -> str:
        Fraction(value)
        return value


class ModelConfig(BaseModel):
    lam: str = Field(default="1/2", alias="lambda")
    regions: List[RegionConfig]


def model_from_toml(text: str) -> RegionModel:
    """
    Parse a region model document::

        lambda = "1/2"
        [[regions]]
        id = "A"
        measure = "1/2"
    """
    try:
        config = ModelConfig.model_validate(tomllib.loads(text))
        regions = []
        for rc in config.regions:
            rule = rc.rule or DEFAULT_RULES.get(rc.id, "trivial")
            images = None
            if rc.images is not None:
                images = (Word.parse(rc.images.get("a", "a")), Word.parse(rc.images.get("b", "b")))
            regions.append(Region(rc.id, Fraction(rc.measure), rule, Word.parse(rc.conjugator), images))
        return RegionModel(regions, Fraction(config.lam))
    except (tomllib.TOMLDecodeError, ValidationError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid region model: {exc}") from exc


def model_to_toml(model: RegionModel) -> str:
    lines = [f'lambda = "{model.lam}"']
    for r in model.regions.values():
        lines += ["", "[[regions]]", f'id = "{r.id}"', f'measure = "{r.measure}"', f'rule = "{r.rule}"']
        lines.append(f'conjugator = "{format_word(r.conjugator)}"')
        if r.images is not None:
            lines.append(f'images = {{ a = "{format_word(r.images[0])}", b = "{format_word(r.images[1])}" }}')
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Evaluation


def gamma_symbolic(model: RegionModel, omega: WordLike, region_id: str) -> Word:
    """Image of ω under the path map on ``region_id``."""
    region = model.region(region_id)
    return region.transform(_check_f2(as_word(omega)))


def cocycle_check(model: RegionModel, omega1: WordLike, omega2: WordLike, region_id: str) -> bool:
    """γ(ω1 ω2) = γ(ω1) γ(ω2); regions are pointwise fixed so no base-point shift occurs."""
    w1, w2 = as_word(omega1), as_word(omega2)
    lhs = gamma_symbolic(model, concat(w1, w2), region_id)
    rhs = concat(gamma_symbolic(model, w1, region_id), gamma_symbolic(model, w2, region_id))
    return lhs == rhs


def ib_eval(model: RegionModel, c: BoundedCochain, words: Sequence[WordLike]) -> Fraction:
    """The integral of ``c`` over the surface as a finite weighted sum over regions."""
    if len(words) != c.slots:
        raise ArityMismatch(f"{c.name} takes {c.slots} arguments, got {len(words)}")
    words = [_check_f2(as_word(w)) for w in words]
    total = Fraction(0)
    for region in model.regions.values():
        if region.measure:
            total += region.measure * c(*(region.transform(w) for w in words))
    return total


def ib_cochain(model: RegionModel, c: BoundedCochain) -> BoundedCochain:
    return BoundedCochain(c.arity, lambda *w: ib_eval(model, c, w), c.homogeneous, c.bound, f"I({c.name})")


def delta_commute_check(model: RegionModel, c: BoundedCochain, words: Sequence[WordLike]) -> bool:
    """I(δc) and δI(c) agree on ``words``."""
    return ib_eval(model, coboundary(c), words) == coboundary(ib_cochain(model, c))(*words)


def invariance_check(
    model: RegionModel, c: BoundedCochain, words: Sequence[WordLike], h: WordLike, side: str = "right"
) -> bool:
    """I(c) is unchanged when every argument is translated by ``h`` on ``side``."""
    h = as_word(h)
    words = [as_word(w) for w in words]
    if side == "right":
        moved = [concat(w, h) for w in words]
    elif side == "left":
        moved = [concat(h, w) for w in words]
    else:
        raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")
    return ib_eval(model, c, moved) == ib_eval(model, c, words)


# ---------------------------------------------------------------------------
# Schedules and the residual bound


def default_schedule(steps: int = 10, lam: Fraction = Fraction(1, 2)) -> List[RegionModel]:
    """
    μ(A) = Λ(1 - 2^-k), μ(B) = 2^-k / 10, μ(A_a) = μ(A_b) = 1/10, complement takes the rest.
    """
    if steps < 1:
        raise ScheduleError("schedule needs at least one step")
    lam = Fraction(lam)
    side = Fraction(1, 10)
    models = []
    for k in range(1, steps + 1):
        a = lam * (1 - Fraction(1, 2**k))
        b = Fraction(1, 2**k) / 10
        rest = 1 - a - b - 2 * side
        if rest < 0:
            raise ScheduleError(f"step {k}: measures exceed 1")
        models.append(
            region_model(
                {COMPLEMENT: rest, A_REGION: a, A_A_REGION: side, A_B_REGION: side, B_REGION: b},
                lam,
            )
        )
    return models


def validate_schedule(schedule: Sequence[RegionModel]) -> None:
    if not schedule:
        raise ScheduleError("schedule is empty")
    lam = schedule[0].lam
    previous: Optional[Fraction] = None
    for k, model in enumerate(schedule, start=1):
        if model.lam != lam:
            raise ScheduleError(f"step {k} changes Λ")
        b = model.measure(B_REGION)
        if previous is not None and b >= previous:
            raise ScheduleError(f"μ(B) does not decrease at step {k}")
        previous = b


@dataclass
class ResidualRow:
    step: int
    residual: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.residual <= self.bound

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "residual": str(self.residual),
            "bound": str(self.bound),
            "residual_float": float(self.residual),
            "holds": self.holds,
        }


def _conjugation_invariant(c: BoundedCochain, words: Sequence[Word], u: Word) -> bool:
    return c(*(concat(concat(u, w), invert(u)) for w in words)) == c(*words)


def lemma_residual(schedule: Sequence[RegionModel], c: BoundedCochain, words: Sequence[WordLike]) -> List[ResidualRow]:
    """
    Residual ``|I(c) - side terms - Λ c|`` against ``(Λ - μ(A))|c| + μ(B)‖c‖`` per step.

    Side terms are the A_a, A_b and complement contributions, computed
    explicitly. ``c`` needs a declared bound and must be invariant under the
    A-region conjugator on ``words``.
    """
    validate_schedule(schedule)
    if c.bound is None:
        raise PreconditionError("lemma residual needs a declared sup-norm bound")
    words = [_check_f2(as_word(w)) for w in words]
    base = c(*words)
    rows = []
    for k, model in enumerate(schedule, start=1):
        region_a = model.regions.get(A_REGION)
        if region_a is not None and not _conjugation_invariant(c, words, region_a.conjugator):
            raise PreconditionError("cochain is not invariant under the A-region conjugator")
        side = Fraction(0)
        for region_id in SIDE_REGIONS:
            region = model.regions.get(region_id)
            if region is not None and region.measure:
                side += region.measure * c(*(region.transform(w) for w in words))
        residual = abs(ib_eval(model, c, words) - side - model.lam * base)
        bound = (model.lam - model.measure(A_REGION)) * abs(base) + model.measure(B_REGION) * c.bound
        row = ResidualRow(k, residual, bound)
        if not row.holds:
            logger.warning("residual %s exceeds bound %s at step %d", residual, bound, k)
        rows.append(row)
    return rows
