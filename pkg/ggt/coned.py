"""
Coned-off Cayley graphs over a bounded ball and the relative metric d̂.

Every pair ``u, v`` with ``u^-1 v`` in H is joined by a cone edge, so the
cone edges at a vertex are exactly its left coset ``uH``. Breadth-first
search therefore expands each coset once. Cone edges inside H itself form
Γ_H and are masked for admissible paths.

Classes:
    SubgroupSpec: H (a free factor or a subgroup of one) and the letters X
    SubgroupResolver: membership and coset keys for H
    ConedGraph: the coned-off graph over a CayleyBall
    DhatValue, RelativeBall: results of d̂ queries
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import graphviz
import networkx as nx

from ggt.cayley import OUTSIDE, CayleyBall, _SplittingKeyer
from ggt.errors import NotInSubgroup, PreconditionError
from ggt.fpgroup import SIDE_A, Presentation, SearchBudget, dehn_reduce, default_budget
from ggt.freesub import SubgroupAutomaton, fold
from ggt.words import Word, concat, format_word, invert, shortlex_key

logger = logging.getLogger(__name__)

FALLBACK_VERTEX_LIMIT = 3000


class SubgroupSpec:
    """
    H inside G together with the extra generators X.

    Attributes:
        x_generators (tuple[int]): generator indices forming X
        factor (frozenset[int]): generator indices spanning the free factor containing H
        generators (tuple[Word] | None): generators of H; None means H is the whole factor
        name (str | None): label used in reports
    """

    def __init__(
        self,
        x_generators: Sequence[int],
        factor: Sequence[int],
        generators: Optional[Sequence[Word]] = None,
        name: Optional[str] = None,
    ):
        self.x_generators = tuple(sorted(set(x_generators)))
        self.factor = frozenset(factor)
        self.generators = tuple(Word(g) for g in generators) if generators is not None else None
        self.name = name
        if self.generators is not None:
            for g in self.generators:
                if not g.generators() <= self.factor:
                    raise PreconditionError(f"generator {format_word(g)} leaves the factor")

    @property
    def x_codes(self) -> Tuple[int, ...]:
        return tuple(c for g in self.x_generators for c in (2 * g, 2 * g + 1))

    @classmethod
    def surface(cls, genus: int) -> "SubgroupSpec":
        """H = <a1, a2>, X = {a3, ..., ag} in the non-orientable genus-g group."""
        return cls(range(2, genus), (0, 1), name=f"N{genus}")

    @classmethod
    def free_factor(cls, rank: int) -> "SubgroupSpec":
        """H = <a1, a2>, X = {a3, ..., an} in F_n."""
        return cls(range(2, rank), (0, 1), name=f"F2-in-F{rank}")

    @classmethod
    def squares(cls) -> "SubgroupSpec":
        """H = <a^2, b^2>, X = {a, b, c} in <a, b, c | a^2 b^2 c^2>."""
        return cls((0, 1, 2), (0, 1), generators=[Word.parse("aa"), Word.parse("bb")], name="squares")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "x": [format_word((2 * g,)) for g in self.x_generators],
            "factor": [format_word((2 * g,)) for g in sorted(self.factor)],
            "generators": [format_word(g) for g in self.generators] if self.generators is not None else None,
        }


class SubgroupResolver:
    """
    Decides ``w in H`` and computes left-coset keys ``wH``.

    Modes: ``whole`` (H = G), ``free`` (ambient free group), ``splitting``
    (H inside the A factor of an amalgam splitting, exact) and ``fallback``
    (Dehn reduction to H's letters, sound only for positive answers).
    """

    def __init__(self, presentation: Presentation, spec: SubgroupSpec, budget: Optional[SearchBudget] = None):
        self.presentation = presentation
        self.spec = spec
        self.budget = budget or default_budget()
        self.automaton: Optional[SubgroupAutomaton] = (
            fold(spec.generators, presentation.rank) if spec.generators is not None else None
        )
        self.splitting = None
        every = frozenset(range(presentation.rank))
        if spec.factor == every and spec.generators is None:
            self.mode = "whole"
        elif presentation.is_free:
            self.mode = "free"
        else:
            self.splitting = presentation.splitting(spec.factor)
            self.mode = "splitting" if self.splitting is not None else "fallback"

    @property
    def exact(self) -> bool:
        return self.mode != "fallback"

    def _factor_split(self, word: Sequence[int], nf=None) -> Tuple[Hashable, Word]:
        if self.mode == "free":
            i = len(word)
            while i > 0 and (word[i - 1] >> 1) in self.spec.factor:
                i -= 1
            return tuple(word[:i]), Word._trusted(tuple(word[i:]))
        if nf is None:
            nf = self.splitting.from_word(word)
        return self.splitting.factor_part(nf, SIDE_A)

    def _from_parts(self, prefix: Hashable, q: Word) -> Tuple[bool, Hashable]:
        if self.automaton is None:
            return not prefix, prefix
        return (not prefix and self.automaton.contains(q)), (prefix, self.automaton.left_coset_key(q))

    def classify(self, word: Sequence[int], nf=None) -> Tuple[Optional[bool], Optional[Hashable]]:
        """Return ``(w in H, key of wH)``; None entries mean undecided."""
        word = self.presentation.check_word(word)
        if self.mode == "whole":
            return True, ()
        if self.mode == "fallback":
            return self._fallback_contains(word), None
        return self._from_parts(*self._factor_split(word, nf))

    def contains(self, word: Sequence[int]) -> Optional[bool]:
        return self.classify(Word(word))[0]

    def _fallback_contains(self, word: Sequence[int]) -> Optional[bool]:
        reduced = dehn_reduce(Word(word), self.presentation)
        if reduced.generators() <= self.spec.factor:
            return self.automaton is None or self.automaton.contains(reduced) or None
        return None


@dataclass
class DhatValue:
    value: Optional[int]
    status: str
    truncated: bool
    certified: bool
    path: List[Word] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "status": self.status,
            "truncated": self.truncated,
            "certified": self.certified,
            "path": [format_word(w) for w in self.path],
        }


@dataclass
class RelativeBall:
    radius: int
    horizon: int
    elements: List[Word]
    truncated: bool
    certified: bool

    def __len__(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "horizon": self.horizon,
            "count": len(self.elements),
            "elements": [format_word(w) for w in self.elements],
            "truncated": self.truncated,
            "certified": self.certified,
        }


class ConedGraph:
    """
    Γ(G, X ⊔ H) restricted to a CayleyBall.

    Attributes:
        ball (CayleyBall): underlying ball
        spec (SubgroupSpec): H and X
        in_h (list[bool]): membership of each vertex in H
        coset_of (list[int]): coset group index of each vertex
        groups (list[list[int]]): vertices of each left coset meeting the ball
        h_group (int): the group of the identity, i.e. the vertices of Γ_H
        certified (bool): ball certified and every membership decided
    """

    def __init__(self, ball: CayleyBall, spec: SubgroupSpec, resolver: SubgroupResolver):
        self.ball = ball
        self.spec = spec
        self.resolver = resolver
        self.x_codes = spec.x_codes
        self.in_h: List[bool] = []
        self.coset_of: List[int] = []
        self.groups: List[List[int]] = []
        self.certified = ball.certified
        self._distances: Dict[Tuple[int, bool, int], List[int]] = {}
        self._classify()
        self.h_group = self.coset_of[0]

    def _classify(self) -> None:
        ball = self.ball
        reuse = (
            isinstance(ball.keyer, _SplittingKeyer)
            and self.resolver.splitting is not None
            and ball.keyer.splitting is self.resolver.splitting
        )
        if self.resolver.mode == "fallback":
            self._classify_pairwise()
            return
        index: Dict[Hashable, int] = {}
        for vid, rep in enumerate(ball.reps):
            member, key = self.resolver.classify(rep, ball.keys[vid] if reuse else None)
            self.in_h.append(bool(member))
            group = index.get(key)
            if group is None:
                group = index[key] = len(self.groups)
                self.groups.append([])
            self.groups[group].append(vid)
            self.coset_of.append(group)

    def _classify_pairwise(self) -> None:
        ball = self.ball
        if len(ball) > FALLBACK_VERTEX_LIMIT:
            raise PreconditionError(
                f"pairwise coset grouping is limited to {FALLBACK_VERTEX_LIMIT} vertices, ball has {len(ball)}"
            )
        logger.warning("no amalgam splitting for %s; grouping cosets pairwise", ball.presentation.name)
        for vid, rep in enumerate(ball.reps):
            member = self.resolver.contains(rep)
            if member is None:
                self.certified = False
            self.in_h.append(bool(member))
            placed = None
            for gid, members in enumerate(self.groups):
                verdict = self.resolver.contains(concat(invert(ball.reps[members[0]]), rep))
                if verdict is None:
                    self.certified = False
                elif verdict:
                    placed = gid
                    break
            if placed is None:
                placed = len(self.groups)
                self.groups.append([])
            self.groups[placed].append(vid)
            self.coset_of.append(placed)

    # -- metric -----------------------------------------------------------

    def distances(self, admissible: bool = True, source: int = 0, horizon: Optional[int] = None) -> List[int]:
        """
        BFS distances from ``source``, -1 where unreachable.

        Admissible search never uses Γ_H edges. ``horizon`` restricts the search
        to vertices of word length at most ``horizon``, i.e. to a smaller ball.
        """
        horizon = self.ball.radius if horizon is None else min(horizon, self.ball.radius)
        cache_key = (source, admissible, horizon)
        if cache_key in self._distances:
            return self._distances[cache_key]
        adjacency = self.ball.adjacency
        levels = self.ball.levels
        dist = [-1] * len(self.ball)
        dist[source] = 0
        expanded = set()
        if admissible:
            expanded.add(self.h_group)
        queue = deque([source])
        while queue:
            v = queue.popleft()
            d = dist[v] + 1
            for code in self.x_codes:
                u = adjacency[v][code]
                if u != OUTSIDE and dist[u] < 0 and levels[u] <= horizon:
                    dist[u] = d
                    queue.append(u)
            group = self.coset_of[v]
            if group in expanded:
                continue
            expanded.add(group)
            for u in self.groups[group]:
                if dist[u] < 0 and levels[u] <= horizon:
                    dist[u] = d
                    queue.append(u)
        self._distances[cache_key] = dist
        return dist

    def sigma_distances(self) -> List[int]:
        return self.distances(admissible=False)

    def is_cone_edge(self, u: int, v: int) -> bool:
        return u != v and self.coset_of[u] == self.coset_of[v]

    def is_masked(self, u: int, v: int) -> bool:
        return self.is_cone_edge(u, v) and self.coset_of[u] == self.h_group

    def _truncated(self, dist: List[int], below: int, horizon: Optional[int] = None) -> bool:
        radius = self.ball.radius if horizon is None else min(horizon, self.ball.radius)
        levels = self.ball.levels
        return any(0 <= d < below and levels[v] == radius for v, d in enumerate(dist))

    def _require_member(self, h: Sequence[int]) -> int:
        vid = self.ball.vertex(h)
        if not self.in_h[vid]:
            member = self.resolver.contains(h)
            if member is False or self.resolver.exact:
                raise NotInSubgroup(f"{format_word(h) or 'e'} is not in H")
        return vid

    def dhat(self, h: Sequence[int]) -> DhatValue:
        """Admissible distance from e to h inside the ball."""
        vid = self._require_member(h)
        dist = self.distances()
        if dist[vid] < 0:
            status = "infinite_within_ball" if self.certified else "unknown"
            return DhatValue(None, status, self._truncated(dist, 10**9), self.certified)
        paths = self._admissible_id_paths(vid, dist, limit=1)
        path = [self.ball.reps[x] for x in paths[0]] if paths else []
        return DhatValue(dist[vid], "finite", self._truncated(dist, dist[vid]), self.certified, path)

    def dhat_ball(self, r: int, horizon: Optional[int] = None) -> RelativeBall:
        """All h in H (within the ball, or within ``horizon``) with d̂(e, h) <= r."""
        horizon = self.ball.radius if horizon is None else min(horizon, self.ball.radius)
        dist = self.distances(horizon=horizon)
        elements = [self.ball.reps[v] for v, d in enumerate(dist) if 0 <= d <= r and self.in_h[v]]
        elements.sort(key=shortlex_key)
        return RelativeBall(r, horizon, elements, self._truncated(dist, r, horizon), self.certified)

    def _admissible_id_paths(self, target: int, dist: List[int], limit: int) -> List[List[int]]:
        adjacency = self.ball.adjacency
        paths: List[List[int]] = []
        stack = [[target]]
        while stack and len(paths) < limit:
            path = stack.pop()
            head = path[-1]
            if dist[head] == 0:
                paths.append(path[::-1])
                continue
            want = dist[head] - 1
            preds = {adjacency[head][c] for c in self.x_codes if adjacency[head][c] != OUTSIDE}
            group = self.coset_of[head]
            if group != self.h_group:
                preds.update(self.groups[group])
            preds = sorted((u for u in preds if u != head and dist[u] == want), reverse=True)
            for u in preds:
                stack.append(path + [u])
        return paths

    def admissible_geodesics(self, h: Sequence[int], limit: int = 1000) -> List[List[Word]]:
        """Admissible shortest paths from e to h, as vertex representatives."""
        vid = self._require_member(h)
        dist = self.distances()
        if dist[vid] < 0:
            raise NotInSubgroup(f"no admissible path to {format_word(h)} inside the ball")
        paths = self._admissible_id_paths(vid, dist, limit)
        paths.sort(key=lambda p: [shortlex_key(self.ball.reps[v]) for v in p])
        return [[self.ball.reps[x] for x in p] for p in paths]

    def generates_ball(self) -> bool:
        """Every ball vertex is reachable from e using X and cone edges."""
        return all(d >= 0 for d in self.sigma_distances())

    # -- export -----------------------------------------------------------

    def to_networkx(self, max_vertices: int = 2000) -> nx.MultiGraph:
        if len(self.ball) > max_vertices:
            raise PreconditionError(f"export limited to {max_vertices} vertices")
        graph = nx.MultiGraph()
        for v, rep in enumerate(self.ball.reps):
            graph.add_node(v, rep=format_word(rep), in_h=self.in_h[v])
        adjacency = self.ball.adjacency
        for v in range(len(self.ball)):
            for code in self.x_codes:
                u = adjacency[v][code]
                if u != OUTSIDE and not code & 1:
                    graph.add_edge(v, u, kind="X", label=format_word((code,)))
        for gid, members in enumerate(self.groups):
            kind = "gamma_H" if gid == self.h_group else "cone"
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    graph.add_edge(a, b, kind=kind)
        return graph

    def to_dot(self, max_vertices: int = 500) -> str:
        styles = {"X": "solid", "cone": "dashed", "gamma_H": "dotted"}
        graph = self.to_networkx(max_vertices)
        dot = graphviz.Graph("coned")
        for v, data in graph.nodes(data=True):
            dot.node(str(v), label=data["rep"] or "e", shape="box" if data["in_h"] else "ellipse")
        for a, b, data in graph.edges(data=True):
            dot.edge(str(a), str(b), label=data.get("label", ""), style=styles[data["kind"]])
        return dot.source


def build_coned(ball: CayleyBall, spec: SubgroupSpec, budget: Optional[SearchBudget] = None) -> ConedGraph:
    resolver = SubgroupResolver(ball.presentation, spec, budget or ball.budget)
    coned = ConedGraph(ball, spec, resolver)
    logger.info("coned graph over %r: %d cosets meet the ball", ball, len(coned.groups))
    return coned


def dhat(coned: ConedGraph, h: Sequence[int]) -> DhatValue:
    return coned.dhat(h)


def dhat_ball(coned: ConedGraph, r: int, horizon: Optional[int] = None) -> RelativeBall:
    return coned.dhat_ball(r, horizon)


def admissible_geodesics(coned: ConedGraph, h: Sequence[int]) -> List[List[Word]]:
    return coned.admissible_geodesics(h)


# ---------------------------------------------------------------------------
# Checks beyond the ball


@dataclass
class PathCheck:
    valid: bool
    length: int
    steps: List[str]
    failure: Optional[str] = None


def verify_admissible_path(resolver: SubgroupResolver, path: Sequence[Sequence[int]]) -> PathCheck:
    """Check each step of ``path`` is an X edge or a cone edge outside Γ_H."""
    x_codes = set(resolver.spec.x_codes)
    words = [Word(w) for w in path]
    steps: List[str] = []
    rank = resolver.presentation.rank
    for w in words:
        if w.max_generator() >= rank:
            return PathCheck(False, 0, steps, f"{format_word(w)} uses a letter outside the {rank} generators")
    for u, v in zip(words, words[1:]):
        t = concat(invert(u), v)
        if len(t) == 1 and t[0] in x_codes:
            steps.append(f"X:{format_word(t)}")
            continue
        if not t or not resolver.contains(t):
            return PathCheck(False, len(steps), steps, f"{format_word(u)} -> {format_word(v)} is not an edge")
        if resolver.contains(u) and resolver.contains(v):
            return PathCheck(False, len(steps), steps, f"{format_word(u)} -> {format_word(v)} lies in Γ_H")
        steps.append(f"H:{format_word(t)}")
    return PathCheck(True, len(steps), steps)


def coned_distance_bound(resolver: SubgroupResolver, t: Sequence[int]) -> Optional[int]:
    """
    Upper bound for the coned distance from e to ``t``.

    Shapes tried: X, H (1); XX, XH, HX (2); XXX, XXH, HXX, XHX (3).
    Values up to 2 are exact. None means no listed shape fits.
    """
    t = Word(t)
    if not t:
        return 0
    x_codes = resolver.spec.x_codes
    xs = [Word((c,)) for c in x_codes]

    def in_h(w: Word) -> bool:
        return bool(w) and bool(resolver.contains(w))

    if t in xs or in_h(t):
        return 1
    for x in xs:
        if concat(invert(x), t) in xs:
            return 2
        if in_h(concat(invert(x), t)) or in_h(concat(t, invert(x))):
            return 2
    for x in xs:
        for y in xs:
            xy = concat(x, y)
            if not xy:
                continue
            rest = concat(invert(xy), t)
            if rest in xs or in_h(rest) or in_h(concat(t, invert(xy))):
                return 3
            if in_h(concat(concat(invert(x), t), invert(y))):
                return 3
    return None


def path_sigma_diameter(resolver: SubgroupResolver, word: Sequence[int]) -> Tuple[Optional[int], Tuple[int, int]]:
    """Coned diameter bound of the vertex set of the path read from e along ``word``."""
    word = tuple(Word(word))
    best, witness = 0, (0, 0)
    for i in range(len(word)):
        for j in range(i + 1, len(word) + 1):
            d = coned_distance_bound(resolver, word[i:j])
            if d is None:
                return None, (i, j)
            if d > best:
                best, witness = d, (i, j)
    return best, witness
