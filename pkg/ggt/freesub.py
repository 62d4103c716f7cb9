"""
Stallings folding for finitely generated subgroups of free groups.

Classes:
    SubgroupAutomaton: folded core graph with a basepoint
    MalnormalityReport: result of a conjugation scan
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import graphviz
import networkx as nx

from ggt.errors import PreconditionError
from ggt.words import (
    IDENTITY,
    Word,
    concat,
    enumerate_words,
    format_word,
    invert,
    shortlex_key,
)

logger = logging.getLogger(__name__)

BASEPOINT = 0


class SubgroupAutomaton:
    """
    Folded Stallings graph of ``H = <generator_words>`` in ``F(ambient_rank)``.

    Attributes:
        ambient_rank (int): rank of the ambient free group
        generator_words (tuple[Word]): the defining generators
        num_states (int): states are ``0 .. num_states-1``, 0 is the basepoint
        transitions (dict): ``(state, letter code) -> state``, both orientations
    """

    def __init__(
        self,
        ambient_rank: int,
        generator_words: Sequence[Word],
        num_states: int,
        transitions: Dict[Tuple[int, int], int],
    ):
        self.ambient_rank = ambient_rank
        self.generator_words = tuple(generator_words)
        self.num_states = num_states
        self.transitions = dict(transitions)

    @property
    def basepoint(self) -> int:
        return BASEPOINT

    def edges(self) -> List[Tuple[int, int, int]]:
        """Positive-letter edges ``(source, generator code, target)``, sorted."""
        return sorted((s, c, t) for (s, c), t in self.transitions.items() if not c & 1)

    def read(self, w: Sequence[int], start: int = BASEPOINT) -> Tuple[int, int]:
        """Follow ``w`` as far as possible; returns (state reached, letters consumed)."""
        state = start
        for i, code in enumerate(w):
            nxt = self.transitions.get((state, code))
            if nxt is None:
                return state, i
            state = nxt
        return state, len(w)

    def contains(self, w: Sequence[int]) -> bool:
        state, consumed = self.read(w)
        return consumed == len(w) and state == BASEPOINT

    def right_coset_key(self, w: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
        """Vertex of the Schreier graph reached by ``w``: equal keys iff ``Hu = Hv``."""
        state, consumed = self.read(w)
        return state, tuple(w[consumed:])

    def left_coset_key(self, w: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
        """Equal keys iff ``uH = vH``."""
        return self.right_coset_key(invert(w))

    def accepted_words(self, max_length: int, min_length: int = 1) -> List[Word]:
        """All nontrivial reduced words of H up to ``max_length``, in shortlex order."""
        found: List[Word] = []
        stack: List[Tuple[int, Tuple[int, ...]]] = [(BASEPOINT, ())]
        codes = range(2 * self.ambient_rank)
        while stack:
            state, word = stack.pop()
            if word and state == BASEPOINT and len(word) >= min_length:
                found.append(Word._trusted(word))
            if len(word) == max_length:
                continue
            for code in codes:
                if word and word[-1] == code ^ 1:
                    continue
                nxt = self.transitions.get((state, code))
                if nxt is not None:
                    stack.append((nxt, word + (code,)))
        found.sort(key=shortlex_key)
        return found

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        for s in range(self.num_states):
            graph.add_node(s, basepoint=(s == BASEPOINT))
        for s, c, t in self.edges():
            graph.add_edge(s, t, key=c, label=format_word((c,)))
        return graph

    def to_dot(self) -> str:
        dot = graphviz.Digraph("stallings")
        for s in range(self.num_states):
            dot.node(str(s), shape="doublecircle" if s == BASEPOINT else "circle")
        for s, c, t in self.edges():
            dot.edge(str(s), str(t), label=format_word((c,)))
        return dot.source

    def to_dict(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "generators": [format_word(g) for g in self.generator_words],
            "states": self.num_states,
            "edges": [[s, format_word((c,)), t] for s, c, t in self.edges()],
        }

    def __repr__(self) -> str:
        gens = ",".join(format_word(g) for g in self.generator_words)
        return f"SubgroupAutomaton(<{gens}>, states={self.num_states})"


def fold(generators: Sequence[Word], ambient_rank: int) -> SubgroupAutomaton:
    """Build the folded core automaton of the subgroup generated by ``generators``."""
    generators = [Word(g) for g in generators]
    edges: List[Tuple[int, int, int]] = []
    count = 1
    for w in generators:
        if not w:
            continue
        prev = BASEPOINT
        for i, code in enumerate(w):
            if i == len(w) - 1:
                target = BASEPOINT
            else:
                target = count
                count += 1
            if code & 1:
                edges.append((target, code ^ 1, prev))
            else:
                edges.append((prev, code, target))
            prev = target

    parent = list(range(count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    changed = True
    while changed:
        changed = False
        out: Dict[Tuple[int, int], int] = {}
        for s, c, t in edges:
            s, t = find(s), find(t)
            for key, val in (((s, c), t), ((t, c ^ 1), s)):
                other = out.get(key)
                if other is None:
                    out[key] = val
                    continue
                a, b = find(other), find(val)
                if a != b:
                    # keep the smaller id so the basepoint survives merges
                    parent[max(a, b)] = min(a, b)
                    changed = True
    folded = {(find(s), c, find(t)) for s, c, t in edges}
    folded = _prune(folded)
    return _canonical(ambient_rank, generators, folded)


def _prune(edges: set) -> set:
    # drop non-basepoint leaves until the graph is a core
    while True:
        degree: Dict[int, int] = {}
        for s, _, t in edges:
            degree[s] = degree.get(s, 0) + 1
            degree[t] = degree.get(t, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1 and v != BASEPOINT}
        if not leaves:
            return edges
        edges = {e for e in edges if e[0] not in leaves and e[2] not in leaves}


def _canonical(ambient_rank: int, generators: Sequence[Word], edges: set) -> SubgroupAutomaton:
    raw: Dict[Tuple[int, int], int] = {}
    for s, c, t in edges:
        raw[(s, c)] = t
        raw[(t, c ^ 1)] = s
    order = {BASEPOINT: 0}
    queue = [BASEPOINT]
    for state in queue:
        for code in range(2 * ambient_rank):
            nxt = raw.get((state, code))
            if nxt is not None and nxt not in order:
                order[nxt] = len(order)
                queue.append(nxt)
    transitions = {(order[s], c): order[t] for (s, c), t in raw.items() if s in order}
    return SubgroupAutomaton(ambient_rank, generators, len(order), transitions)


def contains(aut: SubgroupAutomaton, w: Sequence[int]) -> bool:
    return aut.contains(w)


def truncated_conjugate_family(n: int) -> List[Word]:
    """Generators ``a^k b a^-k`` for ``|k| <= n`` of the infinitely generated ``<a^k b a^-k>``."""
    a, b = Word((0,)), Word((2,))
    return [concat(concat(a**k, b), a**-k) for k in range(-n, n + 1)]


def _product_search(first: SubgroupAutomaton, second: SubgroupAutomaton, cap: int) -> List[Word]:
    found: List[Word] = []
    stack: List[Tuple[int, int, Tuple[int, ...]]] = [(BASEPOINT, BASEPOINT, ())]
    codes = range(2 * first.ambient_rank)
    while stack:
        s1, s2, word = stack.pop()
        if word and s1 == BASEPOINT and s2 == BASEPOINT:
            found.append(Word._trusted(word))
        if len(word) == cap:
            continue
        for code in codes:
            if word and word[-1] == code ^ 1:
                continue
            n1 = first.transitions.get((s1, code))
            if n1 is None:
                continue
            n2 = second.transitions.get((s2, code))
            if n2 is not None:
                stack.append((n1, n2, word + (code,)))
    found.sort(key=shortlex_key)
    return found


def conjugate_intersection(aut: SubgroupAutomaton, x: Sequence[int], length_cap: int) -> List[Word]:
    """Nontrivial ``w`` with ``|w| <= length_cap``, ``w in H`` and ``x^-1 w x in H``."""
    if length_cap < 1:
        raise PreconditionError("length_cap must be at least 1")
    x = Word(x)
    conjugated = fold([concat(concat(x, g), invert(x)) for g in aut.generator_words], aut.ambient_rank)
    return _product_search(aut, conjugated, length_cap)


@dataclass
class MalnormalityReport:
    radius: int
    cap: int
    violations: List[Tuple[Word, Word, int]] = field(default_factory=list)
    scanned: int = 0

    @property
    def none_within_bounds(self) -> bool:
        return not self.violations

    def violating_elements(self) -> List[Word]:
        return [x for x, _, _ in self.violations]

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "cap": self.cap,
            "scanned": self.scanned,
            "violations": [
                {"x": format_word(x), "witness": format_word(w), "witness_count": n}
                for x, w, n in self.violations
            ],
        }


def malnormality_scan(aut: SubgroupAutomaton, radius: int, cap: int) -> MalnormalityReport:
    """Scan all reduced ``x`` with ``|x| <= radius`` outside H for conjugation overlaps."""
    if radius < 1 or cap < 1:
        raise PreconditionError("radius and cap must be at least 1")
    report = MalnormalityReport(radius=radius, cap=cap)
    for x in enumerate_words(aut.ambient_rank, radius, min_length=1):
        if aut.contains(x):
            continue
        report.scanned += 1
        witnesses = conjugate_intersection(aut, x, cap)
        if witnesses:
            report.violations.append((x, witnesses[0], len(witnesses)))
    logger.info("malnormality scan of %r: %d violations", aut, len(report.violations))
    return report


def subgroup_elements(generators: Sequence[Word], max_letters: int) -> set:
    """Elements expressible as products of at most ``max_letters`` generators or inverses."""
    letters = [Word(g) for g in generators] + [invert(Word(g)) for g in generators]
    seen = {IDENTITY}
    frontier = [IDENTITY]
    for _ in range(max_letters):
        nxt = []
        for w in frontier:
            for g in letters:
                p = concat(w, g)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def automaton_for(generators: Sequence[str], ambient_rank: int) -> SubgroupAutomaton:
    return fold([Word.parse(g) for g in generators], ambient_rank)

