"""
Finitely presented groups and their word problem.

Two independent equality strategies are provided:

* ``rewrite``: abelianization invariants, Dehn reduction on the cyclic word
  and a budgeted breadth-first relator-insertion search.
* ``normal_form``: amalgamated-product normal forms for one-relator
  presentations whose relator splits cyclically as ``r_A r_B`` over disjoint
  generator sets, i.e. ``G = F(A) *_<z> F(B)`` with ``z = r_A = r_B^-1``.

Classes:
    Presentation: generators, relators and derived data
    SearchBudget: limits for the rewriting search
    EqualityVerdict: three-valued result of the equality oracle
    SplittingNormalForm: normal forms in an amalgamated splitting
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, Field, ValidationError, field_validator
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from ggt.config import get_settings
from ggt.errors import ConfigError, GenusOutOfBounds, MalformedBudget, PreconditionError
from ggt.words import (
    IDENTITY,
    MAX_RANK,
    Word,
    concat,
    cyclic_permutations,
    cyclic_reduce,
    enumerate_words,
    format_word,
    free_reduce,
    invert,
    invert_codes,
    is_cyclically_reduced,
)

logger = logging.getLogger(__name__)

SIDE_A = 0
SIDE_B = 1

NormalForm = Tuple[Tuple[Tuple[int, Tuple[int, ...]], ...], int]


class Presentation:
    """
    A finite presentation ``<a_0, ..., a_{rank-1} | relators>``.

    Attributes:
        rank (int): number of generators
        relators (tuple[Word]): cyclically reduced, nonempty relators
        symmetrized (tuple[Word]): all cyclic permutations of relators and inverses
        name (str | None): label used in reports
    """

    def __init__(
        self,
        rank: int,
        relators: Sequence[Word] = (),
        name: Optional[str] = None,
        splitting_hint: Optional[FrozenSet[int]] = None,
    ):
        if not 0 <= rank <= MAX_RANK:
            raise ConfigError(f"rank must be between 0 and {MAX_RANK}, got {rank}")
        checked = []
        for r in relators:
            r = Word(r)
            if not r:
                raise ConfigError("relators must be nonempty")
            if not is_cyclically_reduced(r):
                raise ConfigError(f"relator {format_word(r)!r} is not cyclically reduced")
            if r.max_generator() >= rank:
                raise ConfigError(f"relator {format_word(r)!r} uses a letter outside rank {rank}")
            checked.append(r)
        self.rank = rank
        self.relators: Tuple[Word, ...] = tuple(checked)
        self.name = name
        self.splitting_hint = splitting_hint

        sym = set()
        for r in self.relators:
            sym.update(cyclic_permutations(r))
            sym.update(cyclic_permutations(invert(r)))
        self.symmetrized: Tuple[Word, ...] = tuple(sorted(sym, key=lambda w: (len(w), tuple(w))))
        self._by_first: Dict[int, List[Word]] = {}
        for r in self.symmetrized:
            self._by_first.setdefault(r[0], []).append(r)

        self._lattice: Optional[List[Tuple[int, Tuple[int, ...]]]] = None
        self._dehn_complete: Optional[bool] = None
        self._splittings: Dict[Optional[FrozenSet[int]], Optional["SplittingNormalForm"]] = {}

    @property
    def is_free(self) -> bool:
        return not self.relators

    def relators_starting_with(self, code: int) -> List[Word]:
        return self._by_first.get(code, [])

    @property
    def dehn_complete(self) -> bool:
        """
        True when cyclic Dehn reduction decides the word problem.

        Certified for a single surface-word relator (every generator occurs
        exactly twice) of length at least 6 whose vertex link is connected:
        the Cayley complex is then a tiling by n-gons with n-valent vertices,
        n >= 6, and every reduced disc diagram has a face with more than half
        of its boundary on the diagram boundary.
        """
        if self._dehn_complete is None:
            self._dehn_complete = _surface_word_certificate(self)
        return self._dehn_complete

    def splitting(self, side_a: Optional[FrozenSet[int]] = None) -> Optional["SplittingNormalForm"]:
        key = frozenset(side_a) if side_a is not None else None
        if key not in self._splittings:
            self._splittings[key] = SplittingNormalForm.find(self, key if key is not None else self.splitting_hint)
        return self._splittings[key]

    def check_word(self, w: Sequence[int]) -> Word:
        """``w`` as a reduced word, or PreconditionError if it leaves the generators."""
        w = Word(w)
        if w.max_generator() >= self.rank:
            raise PreconditionError(f"{format_word(w)} uses a letter outside the {self.rank} generators")
        return w

    def lattice_basis(self) -> List[Tuple[int, Tuple[int, ...]]]:
        """Hermite basis of the relator exponent lattice as (pivot row, column) pairs."""
        if self._lattice is None:
            self._lattice = _hermite_basis(self)
        return self._lattice

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "relators": [format_word(r) for r in self.relators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        return cls(
            rank=data["rank"],
            relators=[Word.parse(r) for r in data.get("relators", [])],
            name=data.get("name"),
        )

    def to_toml(self) -> str:
        relators = ", ".join(f'"{format_word(r)}"' for r in self.relators)
        return f"rank = {self.rank}\nrelators = [{relators}]\n"

    def __repr__(self) -> str:
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"Presentation(rank={self.rank}, relators=[{rels}])"


class PresentationConfig(BaseModel):
    name: Optional[str] = None
    rank: int = Field(ge=0, le=MAX_RANK)
    relators: List[str] = []
    factor: Optional[str] = None

    @field_validator("relators")
    @classmethod
    def _letters_only(cls, value: List[str]) -> List[str]:
        for r in value:
            if not r.isalpha():
                raise ValueError(f"relator {r!r} must use letters only")
        return value


def presentation_from_toml(text: str) -> Presentation:
    """Parse ``rank = n`` / ``relators = [...]`` documents."""
    try:
        config = PresentationConfig(**tomllib.loads(text))
    except (tomllib.TOMLDecodeError, ValidationError) as exc:
        raise ConfigError(f"invalid presentation config: {exc}") from exc
    hint = frozenset(Word.parse(config.factor).generators()) if config.factor else None
    return Presentation(
        config.rank, [Word.parse(r) for r in config.relators], name=config.name, splitting_hint=hint
    )


def free_presentation(rank: int) -> Presentation:
    return Presentation(rank, (), name=f"F{rank}")


def one_relator_presentation(rank: int, relator: str, name: Optional[str] = None) -> Presentation:
    return Presentation(rank, [Word.parse(relator)], name=name or relator)


def surface_presentation(genus: int, orientable: bool = False) -> Presentation:
    """
    Standard one-relator presentation of a closed surface group.

    Non-orientable genus g >= 3: a1 a2 a1^-1 a2^-1 a3^2 ... ag^2.
    Non-orientable genus 1, 2: a1^2 ... ag^2 (projective plane, Klein bottle).
    Orientable genus g: [a1, b1] ... [ag, bg].
    """
    cap = get_settings().genus_cap
    if genus < 1 or genus > cap:
        raise GenusOutOfBounds(f"genus must be between 1 and {cap}, got {genus}")
    if orientable:
        if 2 * genus > MAX_RANK:
            raise GenusOutOfBounds(f"orientable genus {genus} needs more than {MAX_RANK} letters")
        codes: List[int] = []
        for i in range(genus):
            a, b = 2 * (2 * i), 2 * (2 * i + 1)
            codes += [a, b, a ^ 1, b ^ 1]
        return Presentation(2 * genus, [Word(codes)], name=f"S{genus}", splitting_hint=frozenset({0, 1}))
    if genus <= 2:
        codes = [c for i in range(genus) for c in (2 * i, 2 * i)]
        return Presentation(genus, [Word(codes)], name=f"N{genus}")
    codes = [0, 2, 1, 3]
    for i in range(2, genus):
        codes += [2 * i, 2 * i]
    return Presentation(genus, [Word(codes)], name=f"N{genus}", splitting_hint=frozenset({0, 1}))


def _surface_word_certificate(p: Presentation) -> bool:
    if len(p.relators) != 1:
        return False
    r = p.relators[0]
    if len(r) < 6:
        return False
    occurrences = [0] * p.rank
    for code in r:
        occurrences[code >> 1] += 1
    if any(n != 2 for n in occurrences):
        return False

    def terminal(code: int) -> Tuple[int, str]:
        return (code >> 1, "tail" if code & 1 else "head")

    def initial(code: int) -> Tuple[int, str]:
        return (code >> 1, "head" if code & 1 else "tail")

    link = nx.MultiGraph()
    for g in range(p.rank):
        link.add_nodes_from([(g, "head"), (g, "tail")])
    for i, code in enumerate(r):
        link.add_edge(terminal(code), initial(r[(i + 1) % len(r)]))
    return nx.is_connected(link)


# ---------------------------------------------------------------------------
# Abelianization


def exponent_vector(w: Sequence[int], rank: int) -> List[int]:
    vec = [0] * rank
    for code in w:
        vec[code >> 1] += -1 if code & 1 else 1
    return vec


def _hermite_basis(p: Presentation) -> List[Tuple[int, Tuple[int, ...]]]:
    columns = [exponent_vector(r, p.rank) for r in p.relators]
    columns = [c for c in columns if any(c)]
    if not columns or p.rank == 0:
        return []
    matrix = Matrix(p.rank, len(columns), lambda i, j: columns[j][i])
    hnf = hermite_normal_form(matrix)
    basis = []
    for j in range(hnf.cols):
        col = [int(hnf[i, j]) for i in range(hnf.rows)]
        rows = [i for i, x in enumerate(col) if x != 0]
        if not rows:
            continue
        pivot = rows[-1]
        if col[pivot] < 0:
            col = [-x for x in col]
        basis.append((pivot, tuple(col)))
    basis.sort(key=lambda item: item[0], reverse=True)
    return basis


def abelianized_invariant(w: Sequence[int], p: Presentation) -> Tuple[int, ...]:
    """Exponent vector of ``w`` reduced modulo the relator lattice (canonical)."""
    w = p.check_word(w)
    vec = exponent_vector(w, p.rank)
    for pivot, col in p.lattice_basis():
        q = vec[pivot] // col[pivot]
        if q:
            vec = [x - q * y for x, y in zip(vec, col)]
    return tuple(vec)


# ---------------------------------------------------------------------------
# Dehn reduction


def _find_dehn_step(current: Tuple[int, ...], p: Presentation) -> Optional[Tuple[int, int, Word]]:
    n = len(current)
    for i in range(n):
        best: Optional[Tuple[int, Word]] = None
        for r in p.relators_starting_with(current[i]):
            length = len(r)
            for m in range(min(length, n - i), length // 2, -1):
                if current[i : i + m] == r[:m]:
                    if best is None or m > best[0]:
                        best = (m, r)
                    break
        if best is not None:
            return i, best[0], best[1]
    return None


def dehn_reduce(w: Sequence[int], p: Presentation, trace: Optional[List[str]] = None) -> Word:
    """Greedily replace more than half of a relator by the shorter complement."""
    current = tuple(w)
    while True:
        step = _find_dehn_step(current, p)
        if step is None:
            return Word._trusted(current)
        i, m, r = step
        replacement = invert_codes(r[m:])
        if trace is not None:
            trace.append(f"{format_word(current[i:i + m])} -> {format_word(replacement) or 'e'}")
        current = free_reduce(current[:i] + replacement + current[i + m :])


def cyclic_dehn_reduce(w: Sequence[int], p: Presentation, trace: Optional[List[str]] = None) -> Word:
    """Dehn reduction on the cyclic word; the result is cyclically reduced."""
    current = cyclic_reduce(w)[0]
    while current:
        n = len(current)
        doubled = tuple(current) + tuple(current)
        found = None
        for i in range(n):
            for r in p.relators_starting_with(doubled[i]):
                length = len(r)
                for m in range(min(length, n), length // 2, -1):
                    if doubled[i : i + m] == r[:m]:
                        found = (i, m, r)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            break
        i, m, r = found
        rotated = doubled[i : i + n]
        replacement = invert_codes(r[m:])
        if trace is not None:
            trace.append(f"(cyclic) {format_word(rotated[:m])} -> {format_word(replacement) or 'e'}")
        current = cyclic_reduce(free_reduce(replacement + rotated[m:]))[0]
    return Word._trusted(tuple(current))


# ---------------------------------------------------------------------------
# Equality oracle


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 12
    max_length: int = 24
    max_states: int = 10**6

    def __post_init__(self):
        for name in ("max_depth", "max_length", "max_states"):
            if getattr(self, name) <= 0:
                raise MalformedBudget(f"{name} must be positive, got {getattr(self, name)}")

    def scaled(self, factor) -> "SearchBudget":
        return SearchBudget(
            max_depth=max(1, int(self.max_depth * factor)),
            max_length=max(1, int(self.max_length * factor)),
            max_states=max(1, int(self.max_states * factor)),
        )


def default_budget() -> SearchBudget:
    scale = get_settings().budget_scale
    return SearchBudget() if scale == 1 else SearchBudget().scaled(scale)


class VerdictKind(str, Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EqualityVerdict:
    kind: VerdictKind
    strategy: str
    witness: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_equal(self) -> bool:
        return self.kind is VerdictKind.EQUAL

    @property
    def is_distinct(self) -> bool:
        return self.kind is VerdictKind.DISTINCT

    @property
    def is_unknown(self) -> bool:
        return self.kind is VerdictKind.UNKNOWN

    def to_dict(self) -> dict:
        return {"verdict": self.kind.value, "strategy": self.strategy, "witness": list(self.witness)}


STRATEGIES = ("auto", "rewrite", "normal_form")


def equality_oracle(
    u: Sequence[int],
    v: Sequence[int],
    p: Presentation,
    budget: Optional[SearchBudget] = None,
    strategy: str = "auto",
) -> EqualityVerdict:
    """Decide u = v in G; Equal and Distinct are always sound."""
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown strategy {strategy!r}")
    u, v = p.check_word(u), p.check_word(v)
    budget = budget or default_budget()
    w = concat(u, invert(v))
    if p.is_free:
        if w:
            return EqualityVerdict(VerdictKind.DISTINCT, "free", (f"reduced quotient {format_word(w)}",))
        return EqualityVerdict(VerdictKind.EQUAL, "free", ("free reduction",))
    if strategy == "auto":
        strategy = "normal_form" if p.splitting() is not None else "rewrite"
    if strategy == "normal_form":
        return _normal_form_verdict(u, v, p)
    return _rewrite_verdict(w, p, budget)


def _normal_form_verdict(u: Sequence[int], v: Sequence[int], p: Presentation) -> EqualityVerdict:
    splitting = p.splitting()
    if splitting is None:
        return EqualityVerdict(VerdictKind.UNKNOWN, "normal_form", ("no amalgam splitting",))
    nu, nv = splitting.from_word(u), splitting.from_word(v)
    if nu == nv:
        return EqualityVerdict(VerdictKind.EQUAL, "normal_form", (splitting.describe(nu),))
    return EqualityVerdict(
        VerdictKind.DISTINCT, "normal_form", (splitting.describe(nu), splitting.describe(nv))
    )


def _rewrite_verdict(w: Word, p: Presentation, budget: SearchBudget) -> EqualityVerdict:
    inv = abelianized_invariant(w, p)
    if any(inv):
        return EqualityVerdict(VerdictKind.DISTINCT, "rewrite", (f"abelianization {list(inv)}",))
    trace: List[str] = []
    residue = cyclic_dehn_reduce(w, p, trace)
    if not residue:
        return EqualityVerdict(VerdictKind.EQUAL, "rewrite", tuple(trace))
    if p.dehn_complete:
        return EqualityVerdict(
            VerdictKind.DISTINCT, "rewrite", (f"Dehn-irreducible residue {format_word(residue)}",)
        )
    found = _insertion_search(residue, p, budget)
    if found is not None:
        return EqualityVerdict(VerdictKind.EQUAL, "rewrite", tuple(trace + found))
    logger.debug("equality search exhausted for %s", format_word(w))
    return EqualityVerdict(VerdictKind.UNKNOWN, "rewrite", ("budget exhausted",))


def _substitution_moves(word: Tuple[int, ...], p: Presentation):
    # replace a prefix u of a symmetrized relator u*v by v^-1 (u may be empty)
    n = len(word)
    for i in range(n + 1):
        for r in p.symmetrized:
            yield free_reduce(word[:i] + invert_codes(r) + word[i:])
            for m in range(1, min(len(r), n - i) + 1):
                if word[i : i + m] != r[:m]:
                    break
                yield free_reduce(word[:i] + invert_codes(r[m:]) + word[i + m :])


def _insertion_search(start: Word, p: Presentation, budget: SearchBudget) -> Optional[List[str]]:
    """Breadth-first search over relator substitutions, bounded by ``budget``."""
    start_t = tuple(dehn_reduce(start, p))
    if not start_t:
        return ["dehn"]
    seen: Dict[Tuple[int, ...], Optional[Tuple[int, ...]]] = {start_t: None}
    queue = deque([(start_t, 0)])
    while queue:
        word, depth = queue.popleft()
        if depth >= budget.max_depth:
            continue
        for nxt in _substitution_moves(word, p):
            if nxt in seen or len(nxt) > budget.max_length:
                continue
            seen[nxt] = word
            if not nxt:
                return _replay(seen, nxt)
            if len(seen) >= budget.max_states:
                return None
            queue.append((nxt, depth + 1))
    return None


def _replay(seen: Dict[Tuple[int, ...], Optional[Tuple[int, ...]]], end: Tuple[int, ...]) -> List[str]:
    chain = []
    node: Optional[Tuple[int, ...]] = end
    while node is not None:
        chain.append(format_word(node) or "e")
        node = seen[node]
    return ["insert: " + " <- ".join(chain)]


# ---------------------------------------------------------------------------
# Amalgam normal forms


class SplittingNormalForm:
    """
    Normal forms in ``F(A) *_C F(B)`` with ``C = <z>``.

    A normal form is ``(syllables, k)`` meaning ``s_1 ... s_m z^k`` where the
    syllables alternate sides and each is the shortlex-least element of its
    coset ``s C`` other than ``e``.
    """

    def __init__(self, presentation: Presentation, side_a: FrozenSet[int], z_a: Word, z_b: Word):
        self.presentation = presentation
        self.side_a = frozenset(side_a)
        self.side_of = tuple(SIDE_A if g in self.side_a else SIDE_B for g in range(presentation.rank))
        self._z = (tuple(z_a), tuple(z_b))
        self._core = (len(cyclic_reduce(z_a)[0]), len(cyclic_reduce(z_b)[0]))
        self._decompose = lru_cache(maxsize=None)(self._decompose_uncached)
        self._power = lru_cache(maxsize=None)(self._power_uncached)

    identity: NormalForm = ((), 0)

    @classmethod
    def find(cls, p: Presentation, side_a: Optional[FrozenSet[int]] = None) -> Optional["SplittingNormalForm"]:
        if len(p.relators) != 1:
            return None
        r = p.relators[0]
        if r.generators() != frozenset(range(p.rank)):
            return None
        n = len(r)
        for start in range(n):
            rotated = tuple(r[start:]) + tuple(r[:start])
            for k in range(1, n):
                block_a, block_b = rotated[:k], rotated[k:]
                gens_a = frozenset(c >> 1 for c in block_a)
                gens_b = frozenset(c >> 1 for c in block_b)
                if gens_a & gens_b:
                    continue
                if side_a is not None and gens_a != side_a:
                    continue
                return cls(p, gens_a, Word(block_a), Word(invert_codes(block_b)))
        return None

    def z(self, side: int) -> Word:
        return Word._trusted(self._z[side])

    def _power_uncached(self, side: int, j: int) -> Tuple[int, ...]:
        base = self._z[side] if j >= 0 else invert_codes(self._z[side])
        out: Tuple[int, ...] = ()
        for _ in range(abs(j)):
            out = free_reduce(out + base)
        return out

    def _decompose_uncached(self, side: int, t: Tuple[int, ...]) -> Tuple[Tuple[int, ...], int]:
        # t = rep * z^k with rep shortlex-least in t C
        bound = 2 * len(t) // self._core[side] + 1
        best, best_j = t, 0
        for j in range(-bound, bound + 1):
            cand = free_reduce(t + self._power(side, j))
            if (len(cand), cand) < (len(best), best):
                best, best_j = cand, j
        return best, -best_j

    def multiply_letter(self, nf: NormalForm, code: int) -> NormalForm:
        syllables, k = nf
        side = self.side_of[code >> 1]
        t = free_reduce(self._power(side, k) + (code,))
        if syllables and syllables[-1][0] == side:
            t = free_reduce(syllables[-1][1] + t)
            syllables = syllables[:-1]
        rep, k2 = self._decompose(side, t)
        if rep:
            syllables = syllables + ((side, rep),)
        return syllables, k2

    def from_word(self, word: Sequence[int], start: Optional[NormalForm] = None) -> NormalForm:
        nf = start if start is not None else self.identity
        for code in word:
            nf = self.multiply_letter(nf, code)
        return nf

    def to_word(self, nf: NormalForm) -> Word:
        out: Tuple[int, ...] = ()
        for _, rep in nf[0]:
            out = out + rep
        return Word(out + self._power(SIDE_A, nf[1]))

    def factor_part(self, nf: NormalForm, side: int = SIDE_A) -> Tuple[Tuple, Word]:
        """Split ``g = P * q`` with ``q`` in the factor of ``side`` and ``P`` fixing the coset ``gF``."""
        syllables, k = nf
        if syllables and syllables[-1][0] == side:
            q = free_reduce(syllables[-1][1] + self._power(side, k))
            return syllables[:-1], Word._trusted(q)
        return syllables, Word._trusted(self._power(side, k))

    def describe(self, nf: NormalForm) -> str:
        parts = [f"{'AB'[s]}:{format_word(rep)}" for s, rep in nf[0]]
        parts.append(f"z^{nf[1]}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Cross-validation


@dataclass
class CrossValidationReport:
    pairs: int = 0
    disagreements: List[Tuple[str, str]] = field(default_factory=list)
    unknown_rewrite: int = 0
    unknown_normal_form: int = 0

    @property
    def unknown_fraction(self) -> float:
        return (self.unknown_rewrite + self.unknown_normal_form) / max(1, 2 * self.pairs)

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "disagreements": [list(d) for d in self.disagreements],
            "unknown_rewrite": self.unknown_rewrite,
            "unknown_normal_form": self.unknown_normal_form,
        }


def cross_validate(p: Presentation, max_length: int, budget: Optional[SearchBudget] = None) -> CrossValidationReport:
    """Compare both strategies on every unordered pair of words up to ``max_length``."""
    words = list(enumerate_words(p.rank, max_length))
    report = CrossValidationReport()
    for i, u in enumerate(words):
        for v in words[i:]:
            report.pairs += 1
            a = equality_oracle(u, v, p, budget, strategy="rewrite")
            b = equality_oracle(u, v, p, budget, strategy="normal_form")
            report.unknown_rewrite += a.is_unknown
            report.unknown_normal_form += b.is_unknown
            if a.is_unknown or b.is_unknown:
                continue
            if a.kind is not b.kind:
                report.disagreements.append((format_word(u), format_word(v)))
    logger.info("cross-validated %d pairs, %d disagreements", report.pairs, len(report.disagreements))
    return report


def is_identity(w: Sequence[int], p: Presentation, budget: Optional[SearchBudget] = None) -> EqualityVerdict:
    return equality_oracle(w, IDENTITY, p, budget)
