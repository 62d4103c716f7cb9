"""
Homomorphisms between presented groups and retraction checks.

Classes:
    HomSpec: images of the source generators as target words
    HomVerdict: verified / refuted / unknown with the offending relator
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence

from pydantic import BaseModel, ValidationError, model_validator

from ggt.errors import ArityMismatch, ConfigError, PreconditionError
from ggt.fpgroup import (
    Presentation,
    SearchBudget,
    equality_oracle,
    free_presentation,
    surface_presentation,
)
from ggt.words import IDENTITY, Word, concat, enumerate_words, format_word, invert

logger = logging.getLogger(__name__)

VERIFIED = "verified"
REFUTED = "refuted"
UNKNOWN = "unknown"


class HomSpec:
    """
    A map ``source -> target`` given on generators.

    Attributes:
        source (Presentation): domain
        target (Presentation): codomain
        images (tuple[Word]): reduced target word per source generator
    """

    def __init__(self, source: Presentation, target: Presentation, images: Sequence[Word], name: Optional[str] = None):
        if len(images) != source.rank:
            raise ArityMismatch(f"{source.rank} generators but {len(images)} images")
        self.source = source
        self.target = target
        self.images = tuple(Word(w) for w in images)
        self.name = name
        for w in self.images:
            if w.max_generator() >= target.rank:
                raise ConfigError(f"image {format_word(w)} uses letters outside the target")

    def apply(self, w: Sequence[int]) -> Word:
        out = IDENTITY
        for code in w:
            image = self.images[code >> 1]
            out = concat(out, invert(image) if code & 1 else image)
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "images": [format_word(w) for w in self.images],
        }

    def __repr__(self) -> str:
        images = ", ".join(f"{format_word((2 * i,))}->{format_word(w) or 'e'}" for i, w in enumerate(self.images))
        return f"HomSpec({self.source.name} -> {self.target.name}: {images})"


@dataclass(frozen=True)
class HomVerdict:
    status: str
    stage: str = "homomorphism"
    relator: Optional[str] = None
    image: Optional[str] = None

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> dict:
        return {"status": self.status, "stage": self.stage, "relator": self.relator, "image": self.image}


def verify_homomorphism(h: HomSpec, budget: Optional[SearchBudget] = None) -> HomVerdict:
    """Every source relator must map to e in the target."""
    unknown: Optional[HomVerdict] = None
    for r in h.source.relators:
        image = h.apply(r)
        verdict = equality_oracle(image, IDENTITY, h.target, budget)
        if verdict.is_distinct:
            return HomVerdict(REFUTED, "homomorphism", format_word(r), format_word(image))
        if verdict.is_unknown and unknown is None:
            unknown = HomVerdict(UNKNOWN, "homomorphism", format_word(r), format_word(image))
    return unknown or HomVerdict(VERIFIED)


def compose(second: HomSpec, first: HomSpec) -> HomSpec:
    """``second ∘ first``."""
    if first.target.rank != second.source.rank or first.target.relators != second.source.relators:
        raise PreconditionError("maps are not composable")
    name = f"{second.name or 'g'}∘{first.name or 'f'}"
    return HomSpec(first.source, second.target, [second.apply(w) for w in first.images], name)


def verify_retraction(r: HomSpec, i: HomSpec, budget: Optional[SearchBudget] = None) -> HomVerdict:
    """``r`` and ``i`` are homomorphisms and ``r(i(x)) = x`` for every generator x of i's source."""
    for stage, h in (("retraction", r), ("section", i)):
        verdict = verify_homomorphism(h, budget)
        if not verdict.verified:
            return HomVerdict(verdict.status, f"{stage} homomorphism", verdict.relator, verdict.image)
    composite = compose(r, i)
    pending: Optional[HomVerdict] = None
    for g in range(i.source.rank):
        x = Word((2 * g,))
        image = composite.images[g]
        verdict = equality_oracle(image, x, i.source, budget)
        if verdict.is_distinct:
            return HomVerdict(REFUTED, "identity", format_word(x), format_word(image))
        if verdict.is_unknown and pending is None:
            pending = HomVerdict(UNKNOWN, "identity", format_word(x), format_word(image))
    return pending or HomVerdict(VERIFIED, "identity")


def surface_section(genus: int) -> HomSpec:
    """``F(a, b) -> N_g``, a -> a1, b -> a2."""
    return HomSpec(free_presentation(2), surface_presentation(genus), [Word((0,)), Word((2,))], name="i")


def search_retraction(
    i: HomSpec, max_image_length: int = 2, budget: Optional[SearchBudget] = None
) -> Optional[HomSpec]:
    """
    Shortlex-first retraction ``r`` of ``i`` with short images.

    Generators hit by ``i`` are sent back to their preimage letters; the
    remaining images range over reduced words of length at most
    ``max_image_length``.
    """
    fixed = {}
    for g, w in enumerate(i.images):
        if len(w) != 1 or w[0] & 1:
            raise PreconditionError("section must send generators to distinct generators")
        fixed[w[0] >> 1] = Word((2 * g,))
    free = [g for g in range(i.target.rank) if g not in fixed]
    candidates = list(enumerate_words(i.source.rank, max_image_length))
    tried = 0
    for choice in product(candidates, repeat=len(free)):
        images = dict(fixed)
        images.update(zip(free, choice))
        r = HomSpec(i.target, i.source, [images[g] for g in range(i.target.rank)], name="r")
        tried += 1
        if verify_retraction(r, i, budget).verified:
            logger.info("retraction found after %d candidates: %r", tried, r)
            return r
    logger.info("no retraction with images up to length %d (%d candidates)", max_image_length, tried)
    return None


# ---------------------------------------------------------------------------
# TOML specs


class GroupConfig(BaseModel):
    name: Optional[str] = None
    genus: Optional[int] = None
    orientable: bool = False
    rank: Optional[int] = None
    relators: List[str] = []

    @model_validator(mode="after")
    def _one_shape(self) -> "GroupConfig":
        if (self.genus is None) == (self.rank is None):
            raise ValueError("give exactly one of genus or rank")
        return self

    def build(self) -> Presentation:
        if self.genus is not None:
            return surface_presentation(self.genus, self.orientable)
        return Presentation(self.rank, [Word.parse(r) for r in self.relators], name=self.name)


class HomConfig(BaseModel):
    name: Optional[str] = None
    source: GroupConfig
    target: GroupConfig
    images: List[str]


class RetractionConfig(BaseModel):
    retraction: HomConfig
    section: Optional[HomConfig] = None


def _build(config: HomConfig) -> HomSpec:
    return HomSpec(config.source.build(), config.target.build(), [Word.parse(w) for w in config.images], config.name)


def hom_from_toml(text: str) -> tuple:
    """
    Parse ``[retraction]`` (and optionally ``[section]``) tables.

    Returns ``(retraction, section_or_None)``.
    """
    try:
        config = RetractionConfig.model_validate(tomllib.loads(text))
        return _build(config.retraction), (_build(config.section) if config.section else None)
    except (tomllib.TOMLDecodeError, ValidationError, ValueError) as exc:
        raise ConfigError(f"invalid homomorphism spec: {exc}") from exc
