"""Homomorphism checking and search, sections and retractions.

All searches are depth-first with vertices assigned before edges, each in
domain order, trying codomain values in codomain order.  The first
solution found is therefore the least one, and enumeration order is
lexicographic in the assignment vector.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping
from dataclasses import dataclass

from .core import Quiver, QuiverMorphism
from .errors import Budget, PrecondViolation, TotalityViolation

__all__ = [
    "MorphismCheck",
    "SectionCertificate",
    "RetractionCertificate",
    "check_morphism",
    "is_morphism",
    "is_monic",
    "compose",
    "identity",
    "enumerate_homs",
    "count_homs",
    "find_isomorphism",
    "is_isomorphic",
    "extend_morphism",
    "find_retraction",
    "find_section",
    "verify_section_certificate",
    "verify_retraction_certificate",
]


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    edge: str | None = None
    square: str | None = None  # "source" or "target"

    def __bool__(self) -> bool:
        return self.ok


def _check_total(m: QuiverMorphism) -> None:
    dom, cod = m.domain, m.codomain
    for v in dom.vertices:
        if v not in m.vmap:
            raise TotalityViolation(f"vertex {v!r} has no image")
        if not cod.has_vertex(m.vmap[v]):
            raise TotalityViolation(f"vertex {v!r} maps to {m.vmap[v]!r}, not a codomain vertex")
    for e in dom.edges:
        if e not in m.emap:
            raise TotalityViolation(f"edge {e!r} has no image")
        if not cod.has_edge(m.emap[e]):
            raise TotalityViolation(f"edge {e!r} maps to {m.emap[e]!r}, not a codomain edge")
    extra = [v for v in m.vmap if not dom.has_vertex(v)] + [e for e in m.emap if not dom.has_edge(e)]
    if extra:
        raise TotalityViolation(f"map defined outside the domain: {extra[0]!r}")


def check_morphism(m: QuiverMorphism) -> MorphismCheck:
    """Test both homomorphism squares; report the first failing edge in edge order.

    Raises :class:`TotalityViolation` if the maps are not total functions
    into the codomain.
    """
    _check_total(m)
    cod = m.codomain
    for e in m.domain.edges:
        s, t = m.domain.ends(e)
        f = m.emap[e]
        if cod.src(f) != m.vmap[s]:
            return MorphismCheck(False, e, "source")
        if cod.tgt(f) != m.vmap[t]:
            return MorphismCheck(False, e, "target")
    return MorphismCheck(True)


def is_morphism(m: QuiverMorphism) -> bool:
    try:
        return check_morphism(m).ok
    except TotalityViolation:
        return False


def is_monic(m: QuiverMorphism) -> bool:
    """Monomorphisms of quivers are exactly the componentwise-injective maps."""
    vs = [m.vmap[v] for v in m.domain.vertices]
    es = [m.emap[e] for e in m.domain.edges]
    return len(set(vs)) == len(vs) and len(set(es)) == len(es)


def compose(f: QuiverMorphism, g: QuiverMorphism) -> QuiverMorphism:
    """``g ∘ f`` (apply ``f`` first)."""
    if f.codomain != g.domain:
        raise PrecondViolation("composite is undefined: codomain of f differs from domain of g")
    return f.then(g)


identity = QuiverMorphism.identity


def _edge_checks(g: Quiver, order: list[str]):
    """Group the edges of ``g`` by the search depth at which both endpoints are known."""
    pos = {v: i for i, v in enumerate(order)}
    upfront: list[tuple[str, str, str]] = []
    checks: list[list[tuple[str, str, str]]] = [[] for _ in order]
    for e in g.edges:
        s, t = g.ends(e)
        depth = max(pos.get(s, -1), pos.get(t, -1))
        if depth < 0:
            upfront.append((e, s, t))
        else:
            checks[depth].append((e, s, t))
    return upfront, checks


def _vertex_search(g: Quiver, h: Quiver, budget: Budget, injective: bool = False) -> Iterator[dict[str, str]]:
    order = list(g.vertices)
    _, checks = _edge_checks(g, order)
    vmap: dict[str, str] = {}
    used: set[str] = set()

    def rec(i: int):
        if i == len(order):
            yield dict(vmap)
            return
        v = order[i]
        for w in h.vertices:
            if injective and w in used:
                continue
            budget.tick()
            vmap[v] = w
            if all(h.between(vmap[s], vmap[t]) for _, s, t in checks[i]):
                used.add(w)
                yield from rec(i + 1)
                used.discard(w)
        vmap.pop(v, None)

    yield from rec(0)


def enumerate_homs(
    g: Quiver, h: Quiver, limit: int | None = None, budget: Budget | int | None = None
) -> Iterator[QuiverMorphism]:
    """Yield every homomorphism ``g -> h`` once, in lexicographic order.

    Vertices are assigned first with forward checking on edges whose
    endpoints are both placed; edge images then range independently over
    the parallel edges between the chosen endpoints.
    """
    budget = Budget.coerce(budget)
    if limit is not None and limit <= 0:
        return
    produced = 0
    for vmap in _vertex_search(g, h, budget):
        choices = [h.between(vmap[g.src(e)], vmap[g.tgt(e)]) for e in g.edges]
        for combo in itertools.product(*choices):
            budget.tick()
            yield QuiverMorphism(g, h, dict(vmap), dict(zip(g.edges, combo)))
            produced += 1
            if limit is not None and produced >= limit:
                return


def count_homs(g: Quiver, h: Quiver, budget: Budget | int | None = None) -> int:
    """Number of homomorphisms ``g -> h`` without materialising them."""
    budget = Budget.coerce(budget)
    total = 0
    for vmap in _vertex_search(g, h, budget):
        n = 1
        for e in g.edges:
            n *= len(h.between(vmap[g.src(e)], vmap[g.tgt(e)]))
        total += n
    return total


def find_isomorphism(g: Quiver, h: Quiver, budget: Budget | int | None = None) -> QuiverMorphism | None:
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    budget = Budget.coerce(budget)
    for vmap in _vertex_search(g, h, budget, injective=True):
        # parallel classes must match in size; then pair them off in order
        emap: dict[str, str] = {}
        pools: dict[tuple[str, str], list[str]] = {}
        ok = True
        for e in g.edges:
            key = (vmap[g.src(e)], vmap[g.tgt(e)])
            pool = pools.setdefault(key, list(h.between(*key)))
            if not pool:
                ok = False
                break
            emap[e] = pool.pop(0)
        if ok and all(not p for p in pools.values()):
            return QuiverMorphism(g, h, vmap, emap)
    return None


def is_isomorphic(g: Quiver, h: Quiver) -> bool:
    return find_isomorphism(g, h) is not None


def extend_morphism(
    phi: QuiverMorphism, psi: QuiverMorphism, budget: Budget | int | None = None
) -> QuiverMorphism | None:
    """Find ``ext: C -> J`` with ``ext ∘ phi == psi`` for monic ``phi: D -> C``.

    Images on the range of ``phi`` are forced by ``psi``; the remaining
    vertices of ``C`` are searched least-first, and each remaining edge
    takes the least parallel edge between its endpoints' images.
    """
    if phi.domain != psi.domain:
        raise PrecondViolation("phi and psi must share a domain")
    if not check_morphism(phi).ok or not is_monic(phi):
        raise PrecondViolation("phi must be a monic quiver homomorphism")
    budget = Budget.coerce(budget)
    c, j = phi.codomain, psi.codomain

    forced_v = {phi.vmap[d]: psi.vmap[d] for d in phi.domain.vertices}
    forced_e = {phi.emap[d]: psi.emap[d] for d in phi.domain.edges}
    free = [v for v in c.vertices if v not in forced_v]
    vmap = dict(forced_v)

    upfront, checks = _edge_checks(c, free)

    def edge_ok(e: str, s: str, t: str) -> bool:
        if e in forced_e:
            return j.ends(forced_e[e]) == (vmap[s], vmap[t])
        return bool(j.between(vmap[s], vmap[t]))

    if not all(edge_ok(*item) for item in upfront):
        return None

    def rec(i: int) -> bool:
        if i == len(free):
            return True
        v = free[i]
        for w in j.vertices:
            budget.tick()
            vmap[v] = w
            if all(edge_ok(*item) for item in checks[i]) and rec(i + 1):
                return True
        vmap.pop(v, None)
        return False

    if not rec(0):
        return None
    emap = {
        e: forced_e[e] if e in forced_e else j.between(vmap[c.src(e)], vmap[c.tgt(e)])[0]
        for e in c.edges
    }
    return QuiverMorphism(c, j, {v: vmap[v] for v in c.vertices}, emap)


# -- sections and retractions -------------------------------------------------

@dataclass(frozen=True)
class SectionCertificate:
    """Blocks ``A_v`` of V(H) and ``B_e`` of E(H), keyed by the ids of G."""

    partition_v: Mapping[str, tuple[str, ...]]
    partition_e: Mapping[str, tuple[str, ...]]

    def to_json(self) -> dict:
        return {
            "partition_v": {k: list(v) for k, v in self.partition_v.items()},
            "partition_e": {k: list(v) for k, v in self.partition_e.items()},
        }


@dataclass(frozen=True)
class RetractionCertificate:
    """Chosen preimages ``w_v`` in V(H) and ``f_e`` in E(H), keyed by the ids of G."""

    chosen_v: Mapping[str, str]
    chosen_e: Mapping[str, str]

    def to_json(self) -> dict:
        return {"chosen_v": dict(self.chosen_v), "chosen_e": dict(self.chosen_e)}


def _partition_problems(blocks: Mapping[str, tuple[str, ...]], index: tuple[str, ...],
                        universe: tuple[str, ...], what: str) -> list[str]:
    problems = []
    if set(blocks) != set(index):
        problems.append(f"{what} blocks are not indexed exactly by the expected ids")
    seen: dict[str, str] = {}
    for key, block in blocks.items():
        for x in block:
            if x in seen:
                problems.append(f"{what} element {x!r} lies in blocks {seen[x]!r} and {key!r}")
            seen[x] = key
    missing = [x for x in universe if x not in seen]
    if missing:
        problems.append(f"{what} elements not covered: {missing}")
    stray = [x for x in seen if x not in set(universe)]
    if stray:
        problems.append(f"{what} blocks contain unknown ids: {stray}")
    return problems


def verify_section_certificate(j: QuiverMorphism, cert: SectionCertificate) -> list[str]:
    """Re-check a partition certificate for ``j: G -> H``; empty list means valid."""
    g, h = j.domain, j.codomain
    problems = _partition_problems(cert.partition_v, g.vertices, h.vertices, "vertex")
    problems += _partition_problems(cert.partition_e, g.edges, h.edges, "edge")
    if problems:
        return problems
    for v in g.vertices:
        if j.vmap[v] not in cert.partition_v[v]:
            problems.append(f"j({v}) = {j.vmap[v]} not in A_{v}")
    for e in g.edges:
        if j.emap[e] not in cert.partition_e[e]:
            problems.append(f"j({e}) = {j.emap[e]} not in B_{e}")
        s, t = g.ends(e)
        for f in cert.partition_e[e]:
            if h.src(f) not in cert.partition_v[s]:
                problems.append(f"source of {f} not in A_{s}")
            if h.tgt(f) not in cert.partition_v[t]:
                problems.append(f"target of {f} not in A_{t}")
    return problems


def verify_retraction_certificate(q: QuiverMorphism, cert: RetractionCertificate) -> list[str]:
    """Re-check chosen preimages for ``q: H -> G``; empty list means valid."""
    h, g = q.domain, q.codomain
    problems = []
    if set(cert.chosen_v) != set(g.vertices) or set(cert.chosen_e) != set(g.edges):
        return ["certificate is not indexed exactly by the vertices and edges of G"]
    for v, w in cert.chosen_v.items():
        if not h.has_vertex(w) or q.vmap[w] != v:
            problems.append(f"q(w_{v}) != {v}")
    for e, f in cert.chosen_e.items():
        if not h.has_edge(f) or q.emap[f] != e:
            problems.append(f"q(f_{e}) != {e}")
            continue
        s, t = g.ends(e)
        if h.src(f) != cert.chosen_v[s]:
            problems.append(f"source of f_{e} is not w_{s}")
        if h.tgt(f) != cert.chosen_v[t]:
            problems.append(f"target of f_{e} is not w_{t}")
    return problems


def find_retraction(
    j: QuiverMorphism, budget: Budget | int | None = None
) -> tuple[QuiverMorphism, SectionCertificate] | None:
    """Left inverse ``q`` of ``j: G -> H`` with its partition certificate.

    A left inverse is exactly an extension of ``id_G`` along ``j``; sections
    are monic, so a non-monic ``j`` is rejected without search.
    """
    if not is_monic(j):
        return None
    g, h = j.domain, j.codomain
    q = extend_morphism(j, identity(g), budget)
    if q is None:
        return None
    part_v = {v: tuple(w for w in h.vertices if q.vmap[w] == v) for v in g.vertices}
    part_e = {e: tuple(f for f in h.edges if q.emap[f] == e) for e in g.edges}
    return q, SectionCertificate(part_v, part_e)


def find_section(
    q: QuiverMorphism, budget: Budget | int | None = None
) -> tuple[QuiverMorphism, RetractionCertificate] | None:
    """Right inverse ``j`` of ``q: H -> G`` with its chosen-preimage certificate."""
    budget = Budget.coerce(budget)
    h, g = q.domain, q.codomain
    pre_v = {v: [w for w in h.vertices if q.vmap[w] == v] for v in g.vertices}
    order = list(g.vertices)
    _, checks = _edge_checks(g, order)
    chosen: dict[str, str] = {}

    def lift(e: str, s: str, t: str) -> str | None:
        return next((f for f in h.between(chosen[s], chosen[t]) if q.emap[f] == e), None)

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in pre_v[v]:
            budget.tick()
            chosen[v] = w
            if all(lift(*item) is not None for item in checks[i]) and rec(i + 1):
                return True
        chosen.pop(v, None)
        return False

    if not rec(0):
        return None
    chosen_e = {e: lift(e, *g.ends(e)) for e in g.edges}
    j = QuiverMorphism(g, h, dict(chosen), dict(chosen_e))
    return j, RetractionCertificate(dict(chosen), chosen_e)
