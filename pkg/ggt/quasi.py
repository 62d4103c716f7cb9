"""
Quasimorphisms on free groups and bounded cochains.

Values are exact: integers and ``fractions.Fraction``.

Classes:
    Quasimorphism: base class with a bounded per-instance evaluation cache
    BrooksQuasimorphism, HomogenizedQuasimorphism, LinearCombination
    PairSpec: exhaustive or seeded sampled pairs for defect estimates
    DefectEstimate: observed defect with its witnessing pair
    BoundedCochain: cochain in the homogeneous or non-homogeneous complex
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ggt.errors import ArityMismatch, PreconditionError
from ggt.words import (
    IDENTITY,
    Word,
    concat,
    count_occurrences,
    cyclic_reduce,
    enumerate_words,
    format_word,
    invert,
    power,
    random_words,
)

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
WordLike = Union[str, Sequence[int]]


def as_word(w: WordLike) -> Word:
    return Word.parse(w) if isinstance(w, str) else Word(w)


def brooks_eval(pattern: WordLike, g: WordLike) -> int:
    """Occurrences of ``pattern`` in ``g`` minus occurrences of its inverse."""
    pattern, g = as_word(pattern), as_word(g)
    if not pattern:
        raise PreconditionError("Brooks pattern must be nonempty")
    return count_occurrences(g, pattern) - count_occurrences(g, invert(pattern))


class Quasimorphism:
    """Callable on words; subclasses implement ``_evaluate``."""

    name = "quasimorphism"
    cache_size = 4096

    def __init__(self):
        self._cached = lru_cache(maxsize=self.cache_size)(self._evaluate)

    def _evaluate(self, g: Word) -> Number:
        raise NotImplementedError

    def __call__(self, g: WordLike) -> Number:
        return self._cached(as_word(g))

    def __add__(self, other: "Quasimorphism") -> "LinearCombination":
        return LinearCombination([(Fraction(1), self), (Fraction(1), other)])

    def __rmul__(self, scalar: Number) -> "LinearCombination":
        return LinearCombination([(Fraction(scalar), self)])

    def to_dict(self) -> dict:
        return {"kind": self.name}


class BrooksQuasimorphism(Quasimorphism):
    name = "brooks"

    def __init__(self, pattern: WordLike):
        super().__init__()
        self.pattern = as_word(pattern)
        if not self.pattern:
            raise PreconditionError("Brooks pattern must be nonempty")
        self._inverse = invert(self.pattern)

    def _evaluate(self, g: Word) -> int:
        return count_occurrences(g, self.pattern) - count_occurrences(g, self._inverse)

    def to_dict(self) -> dict:
        return {"kind": self.name, "pattern": format_word(self.pattern)}

    def __repr__(self) -> str:
        return f"brooks({format_word(self.pattern)})"


class HomogenizedQuasimorphism(Quasimorphism):
    """Depth-``N`` estimate ``f(g^N) / N`` of the homogenization of ``f``."""

    name = "homogenized"

    def __init__(self, base: Quasimorphism, depth: int):
        super().__init__()
        if depth < 1:
            raise PreconditionError("homogenization depth must be at least 1")
        self.base = base
        self.depth = depth

    def _evaluate(self, g: Word) -> Fraction:
        return Fraction(self.base(power(g, self.depth)), self.depth)

    def to_dict(self) -> dict:
        return {"kind": self.name, "depth": self.depth, "base": self.base.to_dict()}


class LinearCombination(Quasimorphism):
    name = "linear"

    def __init__(self, terms: Sequence[Tuple[Number, Quasimorphism]]):
        super().__init__()
        self.terms = [(Fraction(c), f) for c, f in terms]

    def _evaluate(self, g: Word) -> Fraction:
        return sum((c * f(g) for c, f in self.terms), Fraction(0))

    def to_dict(self) -> dict:
        return {"kind": self.name, "terms": [[str(c), f.to_dict()] for c, f in self.terms]}


def brooks(pattern: WordLike) -> BrooksQuasimorphism:
    return BrooksQuasimorphism(pattern)


def homogenize(f: Quasimorphism, g: WordLike, depth: int) -> Fraction:
    if depth < 1:
        raise PreconditionError("homogenization depth must be at least 1")
    return Fraction(f(power(as_word(g), depth)), depth)


# ---------------------------------------------------------------------------
# Defect


@dataclass(frozen=True)
class PairSpec:
    """
    Pairs ``(g1, g2)`` of reduced words over ``rank`` generators.

    ``exhaustive`` walks every pair up to ``max_length`` in shortlex order;
    ``sampled`` draws ``count`` pairs with ``numpy.random.default_rng(seed)``.
    """

    mode: str = "exhaustive"
    max_length: int = 3
    rank: int = 2
    count: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise PreconditionError(f"unknown pair mode {self.mode!r}")
        if self.max_length < 0 or self.count < 1 or self.rank < 1:
            raise PreconditionError("pair spec bounds must be positive")

    def pairs(self) -> Iterator[Tuple[Word, Word]]:
        if self.mode == "exhaustive":
            words = list(enumerate_words(self.rank, self.max_length))
            yield from product(words, words)
            return
        rng = np.random.default_rng(self.seed)
        left = random_words(rng, self.rank, self.max_length, self.count)
        right = random_words(rng, self.rank, self.max_length, self.count)
        yield from zip(left, right)

    def doubled(self) -> "PairSpec":
        if self.mode == "exhaustive":
            return PairSpec("exhaustive", self.max_length + 1, self.rank, self.count, self.seed)
        return PairSpec("sampled", self.max_length, self.rank, 2 * self.count, self.seed)


@dataclass
class DefectEstimate:
    value: Fraction
    argmax: Tuple[Word, Word]
    pairs_examined: int

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "argmax": [format_word(w) for w in self.argmax],
            "pairs_examined": self.pairs_examined,
        }


def defect_estimate(f: Quasimorphism, samples: PairSpec) -> DefectEstimate:
    """Largest observed ``|f(g1) + f(g2) - f(g1 g2)|``; a lower bound for the defect."""
    best = Fraction(0)
    argmax = (IDENTITY, IDENTITY)
    examined = 0
    for g1, g2 in samples.pairs():
        examined += 1
        d = abs(Fraction(f(g1) + f(g2) - f(concat(g1, g2))))
        if d > best:
            best, argmax = d, (g1, g2)
    logger.debug("defect estimate %s over %d pairs", best, examined)
    return DefectEstimate(best, argmax, examined)


def defect_stable(f: Quasimorphism, samples: PairSpec) -> Tuple[DefectEstimate, DefectEstimate, bool]:
    first = defect_estimate(f, samples)
    second = defect_estimate(f, samples.doubled())
    return first, second, first.value == second.value


@dataclass
class CauchyCheck:
    g: Word
    depth: int
    difference: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.difference <= self.bound


def cauchy_check(f: Quasimorphism, g: WordLike, depth: int, defect: Number) -> CauchyCheck:
    """Compare depth ``N`` and ``2N`` estimates on the cyclic core of ``g`` against ``D / N``."""
    core, _ = cyclic_reduce(as_word(g))
    difference = abs(homogenize(f, core, 2 * depth) - homogenize(f, core, depth))
    return CauchyCheck(core, depth, difference, Fraction(defect) / depth)


# ---------------------------------------------------------------------------
# Cochains


class BoundedCochain:
    """
    A bounded cochain of arity ``n``.

    Homogeneous cochains take ``n + 1`` words, non-homogeneous ones ``n``.
    ``bound`` is the declared sup norm, or None when unknown.
    """

    def __init__(
        self,
        arity: int,
        evaluator: Callable[..., Number],
        homogeneous: bool = True,
        bound: Optional[Number] = None,
        name: str = "c",
    ):
        if arity < 0:
            raise PreconditionError("arity must be nonnegative")
        self.arity = arity
        self.evaluator = evaluator
        self.homogeneous = homogeneous
        self.bound = Fraction(bound) if bound is not None else None
        self.name = name

    @property
    def slots(self) -> int:
        return self.arity + 1 if self.homogeneous else self.arity

    def __call__(self, *words: WordLike) -> Fraction:
        if len(words) != self.slots:
            raise ArityMismatch(f"{self.name} takes {self.slots} arguments, got {len(words)}")
        return Fraction(self.evaluator(*(as_word(w) for w in words)))

    def _check_compatible(self, other: "BoundedCochain") -> None:
        if other.arity != self.arity or other.homogeneous != self.homogeneous:
            raise ArityMismatch("cochains live in different degrees or complexes")

    def __add__(self, other: "BoundedCochain") -> "BoundedCochain":
        self._check_compatible(other)
        bound = self.bound + other.bound if self.bound is not None and other.bound is not None else None
        return BoundedCochain(
            self.arity,
            lambda *w: self(*w) + other(*w),
            self.homogeneous,
            bound,
            f"({self.name}+{other.name})",
        )

    def scale(self, scalar: Number) -> "BoundedCochain":
        scalar = Fraction(scalar)
        bound = abs(scalar) * self.bound if self.bound is not None else None
        return BoundedCochain(self.arity, lambda *w: scalar * self(*w), self.homogeneous, bound, f"{scalar}{self.name}")

    def __sub__(self, other: "BoundedCochain") -> "BoundedCochain":
        return self + other.scale(-1)

    def __repr__(self) -> str:
        kind = "homogeneous" if self.homogeneous else "inhomogeneous"
        return f"BoundedCochain({self.name}, arity={self.arity}, {kind})"

    @classmethod
    def constant(cls, arity: int, value: Number, homogeneous: bool = True) -> "BoundedCochain":
        value = Fraction(value)
        return cls(arity, lambda *w: value, homogeneous, abs(value), f"const({value})")

    @classmethod
    def zero(cls, arity: int, homogeneous: bool = True) -> "BoundedCochain":
        return cls.constant(arity, 0, homogeneous)


def coboundary(c: BoundedCochain) -> BoundedCochain:
    """δ in the homogeneous complex, δ̄ (trivial coefficients) in the non-homogeneous one."""
    n = c.arity
    bound = (n + 2) * c.bound if c.bound is not None else None
    if c.homogeneous:

        def delta(*g: Word) -> Fraction:
            return sum(((-1) ** i * c(*(g[:i] + g[i + 1 :])) for i in range(n + 2)), Fraction(0))

        return BoundedCochain(n + 1, delta, True, bound, f"δ{c.name}")

    def delta_bar(*g: Word) -> Fraction:
        total = c(*g[1:])
        for i in range(1, n + 1):
            merged = g[: i - 1] + (concat(g[i - 1], g[i]),) + g[i + 1 :]
            total += (-1) ** i * c(*merged)
        total += (-1) ** (n + 1) * c(*g[:n])
        return total

    return BoundedCochain(n + 1, delta_bar, False, bound, f"δ̄{c.name}")


def phi_iso(c: BoundedCochain) -> BoundedCochain:
    """``φ(c)(g1..gn) = c(e, g1, g1 g2, ..., g1...gn)``."""
    if not c.homogeneous:
        raise PreconditionError("φ takes a homogeneous cochain")

    def image(*g: Word) -> Fraction:
        points = [IDENTITY]
        for w in g:
            points.append(concat(points[-1], w))
        return c(*points)

    return BoundedCochain(c.arity, image, False, c.bound, f"φ{c.name}")


def phi_inverse(c: BoundedCochain) -> BoundedCochain:
    """``f(g0..gn) = c(g0^-1 g1, ..., g_{n-1}^-1 g_n)``; left invariant by construction."""
    if c.homogeneous:
        raise PreconditionError("φ⁻¹ takes a non-homogeneous cochain")

    def preimage(*g: Word) -> Fraction:
        return c(*(concat(invert(a), b) for a, b in zip(g, g[1:])))

    return BoundedCochain(c.arity, preimage, True, c.bound, f"φ⁻¹{c.name}")


def phi_eval(c: BoundedCochain, words: Sequence[WordLike]) -> Fraction:
    return phi_iso(c)(*words)


def from_quasimorphism(f: Quasimorphism, side: str = "left", bound: Optional[Number] = None) -> BoundedCochain:
    """
    Homogeneous 1-cochain built from ``f``.

    ``left``: ``c(g0, g1) = f(g0^-1 g1)``, invariant under left translation.
    ``right``: ``c(g0, g1) = f(g0 g1^-1)``, invariant under right translation.
    """
    if side == "left":
        return BoundedCochain(1, lambda a, b: f(concat(invert(a), b)), True, bound, f"{f!r}_L")
    if side == "right":
        return BoundedCochain(1, lambda a, b: f(concat(a, invert(b))), True, bound, f"{f!r}_R")
    raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")


def quasimorphism_cochain(f: Quasimorphism, bound: Optional[Number] = None) -> BoundedCochain:
    """``f`` itself as a non-homogeneous 1-cochain; ``bound`` is a declared norm on the words used."""
    return BoundedCochain(1, lambda g: f(g), False, bound, repr(f))


def left_translate_invariant(c: BoundedCochain, words: Sequence[WordLike], h: WordLike) -> bool:
    """``c(h g0, ..., h gn) == c(g0, ..., gn)`` on one tuple."""
    h = as_word(h)
    words = [as_word(w) for w in words]
    return c(*(concat(h, w) for w in words)) == c(*words)


def sample_tuples(rank: int, size: int, max_length: int, count: int, seed: int) -> List[Tuple[Word, ...]]:
    """``count`` tuples of ``size`` random reduced words, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    return [tuple(random_words(rng, rank, max_length, size)) for _ in range(count)]
