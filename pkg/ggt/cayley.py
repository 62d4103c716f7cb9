"""
Bounded Cayley balls.

Vertices are group elements within word length ``radius`` of ``e``, each
stored with its shortlex-least representative. Vertex identity comes from
a keyer: reduced words in free groups, amalgam normal forms when the
relator splits, and equality-oracle buckets otherwise.

Classes:
    CayleyBall: the ball, its adjacency and certification record
"""

import json
import logging
import os
from collections import deque
from itertools import combinations
from typing import Dict, Hashable, Iterable, List, Optional, Sequence

import graphviz
import networkx as nx

from ggt.config import get_settings
from ggt.errors import NotInBall, RadiusAboveCap, StrategyDisagreement
from ggt.fpgroup import (
    Presentation,
    SearchBudget,
    SplittingNormalForm,
    abelianized_invariant,
    default_budget,
    equality_oracle,
)
from ggt.words import IDENTITY, Word, format_word, free_reduce, shortlex_key

logger = logging.getLogger(__name__)

OUTSIDE = -1


class _FreeKeyer:
    kind = "free"

    def key_of(self, word: Sequence[int]) -> Hashable:
        return tuple(word)

    def extend(self, key: Hashable, code: int) -> Hashable:
        return free_reduce(key + (code,))  # type: ignore[operator]


class _SplittingKeyer:
    kind = "normal_form"

    def __init__(self, splitting: SplittingNormalForm):
        self.splitting = splitting

    def key_of(self, word: Sequence[int]) -> Hashable:
        return self.splitting.from_word(word)

    def extend(self, key: Hashable, code: int) -> Hashable:
        return self.splitting.multiply_letter(key, code)  # type: ignore[arg-type]


class CayleyBall:
    """
    Ball of radius ``radius`` around ``e`` in the Cayley graph of ``presentation``.

    Attributes:
        presentation (Presentation): the group
        radius (int): word-length radius
        reps (list[Word]): shortlex-least representative per vertex, BFS order
        levels (list[int]): word length of each vertex
        adjacency (list[list[int]]): ``adjacency[v][code]`` is a vertex id or -1
        certified (bool): no Unknown verdict occurred while identifying vertices
        identifications (int): cycle-closing identifications examined
    """

    def __init__(self, presentation: Presentation, radius: int, keyer=None, budget: Optional[SearchBudget] = None):
        self.presentation = presentation
        self.radius = radius
        self.budget = budget or default_budget()
        self.keyer = keyer
        self.reps: List[Word] = []
        self.levels: List[int] = []
        self.adjacency: List[List[int]] = []
        self.keys: List[Hashable] = []
        self.index: Dict[Hashable, int] = {}
        self.buckets: Dict[tuple, List[int]] = {}
        self.certified = True
        self.identifications = 0
        self.cross_checked = 0

    # -- construction -----------------------------------------------------

    def _add_vertex(self, word: Word, level: int, key: Hashable) -> int:
        vid = len(self.reps)
        self.reps.append(word)
        self.levels.append(level)
        self.adjacency.append([OUTSIDE] * (2 * self.presentation.rank))
        self.keys.append(key)
        if self.keyer is not None:
            self.index[key] = vid
        else:
            self.buckets.setdefault(abelianized_invariant(word, self.presentation), []).append(vid)
        return vid

    def _fallback_lookup(self, word: Word, levels: Optional[Iterable[int]] = None) -> Optional[int]:
        bucket = self.buckets.get(abelianized_invariant(word, self.presentation), [])
        allowed = set(levels) if levels is not None else None
        for vid in bucket:
            if allowed is not None and self.levels[vid] not in allowed:
                continue
            verdict = equality_oracle(word, self.reps[vid], self.presentation, self.budget)
            if verdict.is_equal:
                return vid
            if verdict.is_unknown:
                self.certified = False
        return None

    def _link(self, v: int, code: int, u: int) -> None:
        self.adjacency[v][code] = u
        self.adjacency[u][code ^ 1] = v

    def _build(self, cross_check: bool) -> None:
        rank = self.presentation.rank
        root_key = self.keyer.key_of(()) if self.keyer is not None else None
        self._add_vertex(IDENTITY, 0, root_key)
        v = -1
        while v + 1 < len(self.reps):
            v += 1
            level = self.levels[v]
            for code in range(2 * rank):
                if self.adjacency[v][code] != OUTSIDE:
                    continue
                word = Word._trusted(tuple(self.reps[v]) + (code,))
                if self.keyer is not None:
                    key = self.keyer.extend(self.keys[v], code)
                    u = self.index.get(key)
                else:
                    key = None
                    u = self._fallback_lookup(word, (level - 1, level, level + 1))
                if u is None:
                    if level < self.radius:
                        self._link(v, code, self._add_vertex(word, level + 1, key))
                    continue
                self.identifications += 1
                if cross_check and self.keyer is not None and not self.presentation.is_free:
                    self._cross_check(word, u)
                self._link(v, code, u)
        logger.info(
            "built ball radius %d for %s: %d vertices, %d identifications, certified=%s",
            self.radius,
            self.presentation.name,
            len(self.reps),
            self.identifications,
            self.certified,
        )

    def _cross_check(self, word: Word, u: int) -> None:
        self.cross_checked += 1
        verdict = equality_oracle(word, self.reps[u], self.presentation, self.budget, strategy="rewrite")
        if verdict.is_distinct:
            raise StrategyDisagreement(
                f"normal forms identify {format_word(word)} with {format_word(self.reps[u])}, "
                f"rewriting separates them: {verdict.witness}"
            )
        if verdict.is_unknown:
            self.certified = False

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def vertex_count(self) -> int:
        return len(self.reps)

    def locate(self, word: Sequence[int]) -> Optional[int]:
        """Vertex id of the element represented by ``word``, or None outside the ball."""
        word = self.presentation.check_word(word)
        if self.keyer is not None:
            return self.index.get(self.keyer.key_of(word))
        return self._fallback_lookup(word)

    def vertex(self, word: Sequence[int]) -> int:
        vid = self.locate(word)
        if vid is None:
            raise NotInBall(f"{format_word(word) or 'e'} is not within the radius-{self.radius} ball")
        return vid

    def representative(self, word: Sequence[int]) -> Word:
        return self.reps[self.vertex(word)]

    def normal_form(self, vid: int) -> Hashable:
        return self.keys[vid]

    def neighbors(self, vid: int) -> List[int]:
        return [u for u in self.adjacency[vid] if u != OUTSIDE]

    def sphere(self, level: int) -> List[int]:
        return [v for v, lv in enumerate(self.levels) if lv == level]

    def _bfs(self, source: int) -> List[int]:
        if source == 0:
            return list(self.levels)
        dist = [-1] * len(self.reps)
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u != OUTSIDE and dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def distance(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Graph distance inside the ball."""
        a, b = self.vertex(u), self.vertex(v)
        if a == 0 or b == 0:
            return self.levels[a + b]
        d = self._bfs(a)[b]
        if d < 0:
            raise NotInBall("vertices are not connected inside the ball")
        return d

    def geodesic_id_paths(self, source: int, target: int, limit: int = 100_000) -> List[List[int]]:
        """All shortest vertex-id paths from ``source`` to ``target`` inside the ball."""
        dist = self._bfs(source)
        if dist[target] < 0:
            raise NotInBall("target not reachable inside the ball")
        paths: List[List[int]] = []
        stack = [[target]]
        while stack and len(paths) < limit:
            path = stack.pop()
            head = path[-1]
            if head == source:
                paths.append(path[::-1])
                continue
            preds = sorted({u for u in self.adjacency[head] if u != OUTSIDE and dist[u] == dist[head] - 1}, reverse=True)
            for u in preds:
                stack.append(path + [u])
        if len(paths) >= limit:
            logger.warning("geodesic enumeration truncated at %d paths", limit)
        paths.sort(key=lambda p: [shortlex_key(self.reps[v]) for v in p])
        return paths

    def all_geodesics(self, u: Sequence[int], v: Sequence[int], limit: int = 100_000) -> List[List[Word]]:
        """Every geodesic from ``u`` to ``v`` as a list of vertex representatives."""
        paths = self.geodesic_id_paths(self.vertex(u), self.vertex(v), limit)
        return [[self.reps[x] for x in p] for p in paths]

    def path_label(self, path: Sequence[int]) -> Word:
        """Letter sequence read along a vertex-id path."""
        codes = []
        for a, b in zip(path, path[1:]):
            codes.append(self.adjacency[a].index(b))
        return Word(codes)

    # -- export -----------------------------------------------------------

    def edges(self) -> List[tuple]:
        out = []
        for v, row in enumerate(self.adjacency):
            for code in range(0, len(row), 2):
                if row[code] != OUTSIDE:
                    out.append((v, code, row[code]))
        return out

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        for v, rep in enumerate(self.reps):
            graph.add_node(v, rep=format_word(rep), level=self.levels[v])
        for v, code, u in self.edges():
            graph.add_edge(v, u, key=code, label=format_word((code,)))
        return graph

    def to_dot(self) -> str:
        dot = graphviz.Digraph("cayley_ball")
        for v, rep in enumerate(self.reps):
            dot.node(str(v), label=format_word(rep) or "e")
        for v, code, u in self.edges():
            dot.edge(str(v), str(u), label=format_word((code,)))
        return dot.source

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation.to_dict(),
            "radius": self.radius,
            "certified": self.certified,
            "vertices": [format_word(rep) for rep in self.reps],
            "edges": [[v, format_word((code,)), u] for v, code, u in self.edges()],
        }

    def save(self, filepath: str) -> None:
        """Write the ball as JSON."""
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "CayleyBall":
        presentation = Presentation.from_dict(data["presentation"])
        ball = cls(presentation, data["radius"], keyer=_keyer_for(presentation, None))
        for text in data["vertices"]:
            rep = Word.parse(text)
            key = ball.keyer.key_of(rep) if ball.keyer is not None else None
            ball._add_vertex(rep, len(rep), key)
        for v, letter, u in data["edges"]:
            ball._link(v, Word.parse(letter)[0], u)
        ball.certified = data["certified"]
        return ball

    @classmethod
    def load(cls, filepath: str) -> "CayleyBall":
        with open(filepath, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def __repr__(self) -> str:
        return f"CayleyBall({self.presentation.name}, radius={self.radius}, vertices={len(self.reps)})"


def _keyer_for(p: Presentation, side_a):
    if p.is_free:
        return _FreeKeyer()
    splitting = p.splitting(side_a)
    if splitting is not None:
        return _SplittingKeyer(splitting)
    return None


def build_ball(
    p: Presentation,
    radius: int,
    budget: Optional[SearchBudget] = None,
    side_a: Optional[Iterable[int]] = None,
    cross_check: bool = True,
) -> CayleyBall:
    """
    Breadth-first ball construction from ``e``.

    Normal-form identifications are cross-checked against the rewriting
    strategy; an Unknown verdict leaves the ball uncertified and a Distinct
    verdict raises ``StrategyDisagreement``.
    """
    cap = get_settings().ball_radius_cap
    if radius < 0 or radius > cap:
        raise RadiusAboveCap(f"radius must be between 0 and {cap}, got {radius}")
    keyer = _keyer_for(p, frozenset(side_a) if side_a is not None else None)
    ball = CayleyBall(p, radius, keyer=keyer, budget=budget)
    ball._build(cross_check)
    return ball


def distance(ball: CayleyBall, u: Sequence[int], v: Sequence[int]) -> int:
    return ball.distance(u, v)


def all_geodesics(ball: CayleyBall, u: Sequence[int], v: Sequence[int]) -> List[List[Word]]:
    return ball.all_geodesics(u, v)


def set_diameter_in(other: nx.Graph, vertex_set: Iterable[Hashable]) -> int:
    """Maximum pairwise distance of ``vertex_set`` measured in ``other``."""
    vertices = list(dict.fromkeys(vertex_set))
    for v in vertices:
        if v not in other:
            raise NotInBall(f"vertex {v!r} missing from graph")
    best = 0
    graph = other.to_undirected(as_view=True) if other.is_directed() else other
    for a, b in combinations(vertices, 2):
        try:
            best = max(best, nx.shortest_path_length(graph, a, b))
        except nx.NetworkXNoPath as exc:
            raise NotInBall(f"{a!r} and {b!r} are disconnected") from exc
    return best

