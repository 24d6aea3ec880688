"""Quivers, quiver morphisms, standard families and walk analytics.

A quiver is a directed multigraph with loops.  Vertices and edges are
identified by strings, and both sets keep their insertion order: every
search in this package resolves free choices to the least element in that
order, so all outputs are reproducible.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .errors import (
    DanglingEndpoint,
    DuplicateId,
    InvalidSize,
    UnknownEdge,
    UnknownVertex,
    ValidationError,
)

__all__ = [
    "Quiver",
    "QuiverMorphism",
    "WalkWitness",
    "validate",
    "edges_between",
    "is_loaded",
    "path_quiver",
    "cycle_quiver",
    "independent_set",
    "loaded_quiver",
    "product",
    "product_projections",
    "coproduct",
    "weak_components",
    "component_quivers",
    "adjacency_matrix",
    "walk_matrix",
    "walk_pairs",
    "find_walk",
    "min_closed_walk",
]


class Quiver:
    """Immutable finite quiver.

    ``edges`` is given as ``(id, source, target)`` triples.  Construction
    validates everything and raises :class:`ValidationError` listing every
    dangling endpoint and duplicate id at once.
    """

    __slots__ = ("vertices", "edges", "_src", "_tgt", "_vpos", "_epos", "_between", "_out", "_in")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str, str]] = ()):
        vertices = tuple(vertices)
        triples = [tuple(t) for t in edges]
        problems: list = []

        vpos: dict[str, int] = {}
        for v in vertices:
            if v in vpos:
                problems.append(DuplicateId(v, "vertex"))
            else:
                vpos[v] = len(vpos)

        epos: dict[str, int] = {}
        src: dict[str, str] = {}
        tgt: dict[str, str] = {}
        for e, s, t in triples:
            if e in epos:
                problems.append(DuplicateId(e, "edge"))
                continue
            for end in (s, t):
                if end not in vpos:
                    problems.append(DanglingEndpoint(e, end))
            epos[e] = len(epos)
            src[e] = s
            tgt[e] = t
        if problems:
            raise ValidationError(problems)

        set_ = object.__setattr__
        set_(self, "vertices", tuple(vpos))
        set_(self, "edges", tuple(epos))
        set_(self, "_src", src)
        set_(self, "_tgt", tgt)
        set_(self, "_vpos", vpos)
        set_(self, "_epos", epos)

        between: dict[tuple[str, str], list[str]] = {}
        out: dict[str, list[str]] = {v: [] for v in vpos}
        inc: dict[str, list[str]] = {v: [] for v in vpos}
        for e in epos:
            between.setdefault((src[e], tgt[e]), []).append(e)
            out[src[e]].append(e)
            inc[tgt[e]].append(e)
        set_(self, "_between", {k: tuple(v) for k, v in between.items()})
        set_(self, "_out", {k: tuple(v) for k, v in out.items()})
        set_(self, "_in", {k: tuple(v) for k, v in inc.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Quiver is immutable")

    # -- structure maps -------------------------------------------------
    def src(self, e: str) -> str:
        try:
            return self._src[e]
        except KeyError:
            raise UnknownEdge(e) from None

    def tgt(self, e: str) -> str:
        try:
            return self._tgt[e]
        except KeyError:
            raise UnknownEdge(e) from None

    def ends(self, e: str) -> tuple[str, str]:
        return self.src(e), self.tgt(e)

    def triples(self) -> list[tuple[str, str, str]]:
        return [(e, self._src[e], self._tgt[e]) for e in self.edges]

    def between(self, v: str, w: str) -> tuple[str, ...]:
        """Edges from ``v`` to ``w`` in edge order (no membership check)."""
        return self._between.get((v, w), ())

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def vertex_index(self, v: str) -> int:
        try:
            return self._vpos[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def edge_index(self, e: str) -> int:
        try:
            return self._epos[e]
        except KeyError:
            raise UnknownEdge(e) from None

    def has_vertex(self, v: str) -> bool:
        return v in self._vpos

    def has_edge(self, e: str) -> bool:
        return e in self._epos

    def is_loop(self, e: str) -> bool:
        return self._src[e] == self._tgt[e]

    def loops(self) -> list[str]:
        return [e for e in self.edges if self._src[e] == self._tgt[e]]

    def subquiver(self, vertices: Iterable[str], edges: Iterable[str]) -> "Quiver":
        keep_v = set(vertices)
        keep_e = set(edges)
        return Quiver(
            [v for v in self.vertices if v in keep_v],
            [(e, self._src[e], self._tgt[e]) for e in self.edges if e in keep_e],
        )

    # -- dunder ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def _key(self):
        return self.vertices, tuple(self.triples())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Quiver(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __reduce__(self):
        return Quiver, (self.vertices, self.triples())


@dataclass(frozen=True, eq=False)
class QuiverMorphism:
    """A candidate homomorphism; :func:`check_morphism` decides whether it is one."""

    domain: Quiver
    codomain: Quiver
    vmap: Mapping[str, str]
    emap: Mapping[str, str]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuiverMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and dict(self.vmap) == dict(other.vmap)
            and dict(self.emap) == dict(other.emap)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, tuple(sorted(self.vmap.items())), tuple(sorted(self.emap.items()))))

    def then(self, other: "QuiverMorphism") -> "QuiverMorphism":
        """Composite ``other ∘ self``."""
        return QuiverMorphism(
            self.domain,
            other.codomain,
            {v: other.vmap[w] for v, w in self.vmap.items()},
            {e: other.emap[f] for e, f in self.emap.items()},
        )

    def assignment_vector(self) -> tuple[int, ...]:
        """Codomain indices of the images, vertices first, each in domain order."""
        cod = self.codomain
        return tuple(cod.vertex_index(self.vmap[v]) for v in self.domain.vertices) + tuple(
            cod.edge_index(self.emap[e]) for e in self.domain.edges
        )

    @classmethod
    def identity(cls, q: Quiver) -> "QuiverMorphism":
        return cls(q, q, {v: v for v in q.vertices}, {e: e for e in q.edges})


@dataclass(frozen=True)
class WalkWitness:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def initial(self) -> str:
        return self.vertices[0]

    @property
    def terminal(self) -> str:
        return self.vertices[-1]

    def is_valid_in(self, q: Quiver) -> bool:
        if len(self.vertices) != len(self.edges) + 1:
            return False
        if not all(q.has_vertex(v) for v in self.vertices):
            return False
        for j, e in enumerate(self.edges):
            if not q.has_edge(e) or q.ends(e) != (self.vertices[j], self.vertices[j + 1]):
                return False
        return True

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": list(self.edges)}


def validate(raw) -> Quiver:
    """Build a :class:`Quiver` from a raw JSON-like description.

    Accepts ``{"vertices": [...], "edges": [{"id", "src", "tgt"}, ...]}``
    or an existing Quiver.  Raises :class:`ValidationError` with every
    violation found.
    """
    if isinstance(raw, Quiver):
        return raw
    if not isinstance(raw, Mapping):
        raise ValidationError([f"expected a mapping, got {type(raw).__name__}"])
    vertices = [str(v) for v in raw.get("vertices", [])]
    edges = []
    for item in raw.get("edges", []):
        if isinstance(item, Mapping):
            edges.append((str(item["id"]), str(item["src"]), str(item["tgt"])))
        else:
            e, s, t = item
            edges.append((str(e), str(s), str(t)))
    return Quiver(vertices, edges)


def _require_vertex(q: Quiver, v: str) -> None:
    if not q.has_vertex(v):
        raise UnknownVertex(v)


def edges_between(q: Quiver, v: str, w: str) -> frozenset[str]:
    _require_vertex(q, v)
    _require_vertex(q, w)
    return frozenset(q.between(v, w))


def is_loaded(q: Quiver) -> bool:
    """True iff every ordered vertex pair, diagonal included, has an edge.

    Vacuously true for the empty quiver.
    """
    return all(q.between(v, w) for v in q.vertices for w in q.vertices)


# -- standard families ------------------------------------------------------

def path_quiver(n: int) -> Quiver:
    """Directed path ``a_1 -x_1-> a_2 -> ... -> a_n``."""
    if n < 1:
        raise InvalidSize(f"path_quiver needs n >= 1, got {n}")
    vs = [f"a_{j}" for j in range(1, n + 1)]
    return Quiver(vs, [(f"x_{j}", f"a_{j}", f"a_{j + 1}") for j in range(1, n)])


def cycle_quiver(n: int) -> Quiver:
    """Directed cycle: the path of order ``n`` plus ``x_n: a_n -> a_1``."""
    if n < 1:
        raise InvalidSize(f"cycle_quiver needs n >= 1, got {n}")
    vs = [f"a_{j}" for j in range(1, n + 1)]
    es = [(f"x_{j}", f"a_{j}", f"a_{j % n + 1}") for j in range(1, n + 1)]
    return Quiver(vs, es)


def independent_set(m: int) -> Quiver:
    if m < 0:
        raise InvalidSize(f"independent_set needs m >= 0, got {m}")
    return Quiver([f"a_{j}" for j in range(1, m + 1)])


def loaded_quiver(m: int, multiplicity: int = 1) -> Quiver:
    """Complete digraph with loops on ``m`` vertices, ``multiplicity`` edges per ordered pair."""
    if m < 1 or multiplicity < 1:
        raise InvalidSize(f"loaded_quiver needs m, multiplicity >= 1, got {m}, {multiplicity}")
    vs = [f"v_{j}" for j in range(1, m + 1)]
    es = [
        (f"e_{i}_{j}_{k}", f"v_{i}", f"v_{j}")
        for i in range(1, m + 1)
        for j in range(1, m + 1)
        for k in range(1, multiplicity + 1)
    ]
    return Quiver(vs, es)


# -- categorical constructions ---------------------------------------------

def _pair(x: str, y: str) -> str:
    return f"({x},{y})"


def product_projections(g: Quiver, h: Quiver) -> tuple[Quiver, QuiverMorphism, QuiverMorphism]:
    """Categorical product with its two projections.

    Ids of pairs are rendered ``(x,y)``; nesting stays unambiguous.
    """
    vs = [_pair(v, w) for v in g.vertices for w in h.vertices]
    es = [
        (_pair(e, f), _pair(g.src(e), h.src(f)), _pair(g.tgt(e), h.tgt(f)))
        for e in g.edges
        for f in h.edges
    ]
    p = Quiver(vs, es)
    p1 = QuiverMorphism(
        p, g,
        {_pair(v, w): v for v in g.vertices for w in h.vertices},
        {_pair(e, f): e for e in g.edges for f in h.edges},
    )
    p2 = QuiverMorphism(
        p, h,
        {_pair(v, w): w for v in g.vertices for w in h.vertices},
        {_pair(e, f): f for e in g.edges for f in h.edges},
    )
    return p, p1, p2


def product(g: Quiver, h: Quiver) -> Quiver:
    return product_projections(g, h)[0]


def coproduct(quivers: Iterable[Quiver]) -> tuple[Quiver, list[QuiverMorphism]]:
    """Disjoint union; summand ``i`` has its ids prefixed with ``i.``."""
    quivers = list(quivers)
    vs: list[str] = []
    es: list[tuple[str, str, str]] = []
    for i, q in enumerate(quivers):
        vs.extend(f"{i}.{v}" for v in q.vertices)
        es.extend((f"{i}.{e}", f"{i}.{s}", f"{i}.{t}") for e, s, t in q.triples())
    total = Quiver(vs, es)
    injections = [
        QuiverMorphism(
            q, total,
            {v: f"{i}.{v}" for v in q.vertices},
            {e: f"{i}.{e}" for e in q.edges},
        )
        for i, q in enumerate(quivers)
    ]
    return total, injections


def weak_components(q: Quiver) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Weakly connected components as ``(vertices, edges)``, each in quiver order.

    Components are listed by their least vertex.
    """
    comp: dict[str, int] = {}
    count = 0
    for root in q.vertices:
        if root in comp:
            continue
        comp[root] = count
        stack = [root]
        while stack:
            v = stack.pop()
            for e in q.out_edges(v):
                w = q.tgt(e)
                if w not in comp:
                    comp[w] = count
                    stack.append(w)
            for e in q.in_edges(v):
                w = q.src(e)
                if w not in comp:
                    comp[w] = count
                    stack.append(w)
        count += 1
    vs: list[list[str]] = [[] for _ in range(count)]
    es: list[list[str]] = [[] for _ in range(count)]
    for v in q.vertices:
        vs[comp[v]].append(v)
    for e in q.edges:
        es[comp[q.src(e)]].append(e)
    return [(tuple(a), tuple(b)) for a, b in zip(vs, es)]


def component_quivers(q: Quiver) -> list[Quiver]:
    return [q.subquiver(vs, es) for vs, es in weak_components(q)]


# -- walks --------------------------------------------------------------------

def adjacency_matrix(q: Quiver) -> np.ndarray:
    """Boolean adjacency relation indexed by vertex order."""
    n = len(q.vertices)
    a = np.zeros((n, n), dtype=bool)
    for e in q.edges:
        a[q.vertex_index(q.src(e)), q.vertex_index(q.tgt(e))] = True
    return a


def _bool_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x.astype(np.int64) @ y.astype(np.int64)) > 0


def walk_matrix(q: Quiver, k: int) -> np.ndarray:
    """Boolean ``k``-th power of the adjacency relation, by repeated squaring."""
    if k < 0:
        raise ValueError("walk length must be non-negative")
    n = len(q.vertices)
    result = np.eye(n, dtype=bool)
    base = adjacency_matrix(q)
    while k:
        if k & 1:
            result = _bool_matmul(result, base)
        k >>= 1
        if k:
            base = _bool_matmul(base, base)
    return result


def walk_pairs(q: Quiver, k: int) -> frozenset[tuple[str, str]]:
    """Pairs ``(u, v)`` joined by a walk of exactly ``k`` edges."""
    m = walk_matrix(q, k)
    vs = q.vertices
    return frozenset((vs[i], vs[j]) for i, j in zip(*np.nonzero(m)))


def find_walk(q: Quiver, u: str, v: str, k: int) -> WalkWitness | None:
    """Lexicographically least walk of exactly ``k`` edges from ``u`` to ``v``.

    Edges are compared by their position in ``q.edges``.  Returns ``None``
    when no such walk exists.
    """
    _require_vertex(q, u)
    _require_vertex(q, v)
    if k < 0:
        raise ValueError("walk length must be non-negative")
    # reach[t]: vertices with a walk of exactly t edges ending at v
    reach = [{v}]
    for _ in range(k):
        prev = reach[-1]
        reach.append({q.src(e) for w in prev for e in q.in_edges(w)})
    if u not in reach[k]:
        return None
    vertices = [u]
    edges: list[str] = []
    cur = u
    for step in range(k):
        remaining = reach[k - step - 1]
        e = next(e for e in q.out_edges(cur) if q.tgt(e) in remaining)
        edges.append(e)
        cur = q.tgt(e)
        vertices.append(cur)
    return WalkWitness(tuple(vertices), tuple(edges))


def min_closed_walk(q: Quiver) -> tuple[int, WalkWitness] | None:
    """Shortest closed walk, or ``None`` if ``q`` is acyclic.

    A shortest closed walk never repeats a vertex, so lengths beyond
    ``|V|`` need not be searched.
    """
    n = len(q.vertices)
    if n == 0:
        return None
    a = adjacency_matrix(q)
    power = a.copy()
    for m in range(1, n + 1):
        diag = np.nonzero(np.diagonal(power))[0]
        if diag.size:
            v = q.vertices[int(diag[0])]
            walk = find_walk(q, v, v, m)
            assert walk is not None
            return m, walk
        power = _bool_matmul(power, a)
    return None
