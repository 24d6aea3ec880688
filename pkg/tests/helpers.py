"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the search code under test: they
enumerate raw assignment vectors and edge sequences directly.
"""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from quiverlab import Quiver, QuiverMorphism
from quiverlab.blowup import BlowupSpec


# -- quivers drawn in the source examples ------------------------------------

def badness_middle() -> Quiver:
    """The 2-cycle v <-> w with pendant edges v -> w' and w -> v'."""
    return Quiver(
        ["w_p", "v", "w", "v_p"],
        [("e", "v", "w"), ("f", "w", "v"), ("e_p", "v", "w_p"), ("f_p", "w", "v_p")],
    )


def badness_inclusion() -> QuiverMorphism:
    from quiverlab import cycle_quiver

    c2 = cycle_quiver(2)
    return QuiverMorphism(c2, badness_middle(), {"a_1": "v", "a_2": "w"}, {"x_1": "e", "x_2": "f"})


def thebadcase() -> Quiver:
    """Two parallel edges p -> q, one edge q -> p, and a loop at q."""
    return Quiver(["p", "q"], [("g1", "p", "q"), ("g2", "p", "q"), ("h", "q", "p"), ("l", "q", "q")])


def propagation_fixture() -> Quiver:
    return Quiver(["u", "w"], [("g", "u", "w"), ("f", "w", "w")])


def projectivefail() -> Quiver:
    """Two left vertices, each joined to both right vertices."""
    return Quiver(
        ["l1", "r1", "l2", "r2"],
        [("h1", "l1", "r1"), ("d1", "l1", "r2"), ("h2", "l2", "r2"), ("d2", "l2", "r1")],
    )


# -- random generation -----------------------------------------------------------

def random_quiver(rng: random.Random, max_vertices: int = 6, max_edges: int = 8,
                  loop_p: float = 0.2, min_vertices: int = 0) -> Quiver:
    nv = rng.randint(min_vertices, max_vertices)
    ne = rng.randint(0, max_edges) if nv else 0
    edges = []
    for k in range(ne):
        if nv == 1 or rng.random() < loop_p:
            v = rng.randrange(nv)
            edges.append((f"e{k}", f"v{v}", f"v{v}"))
        else:
            a, b = rng.sample(range(nv), 2)
            edges.append((f"e{k}", f"v{a}", f"v{b}"))
    return Quiver([f"v{i}" for i in range(nv)], edges)


def random_morphism(rng: random.Random, g: Quiver, h: Quiver) -> QuiverMorphism | None:
    """A uniformly random homomorphism g -> h, or None if there is none."""
    homs = brute_homs(g, h)
    return rng.choice(homs) if homs else None


def random_blowup_spec(rng: random.Random, base: Quiver, max_size: int = 3, max_mult: int = 2) -> BlowupSpec:
    sizes = {v: rng.randint(1, max_size) for v in base.vertices}
    mult = {e: rng.randint(1, max_mult) for e in base.edges}
    return BlowupSpec(base, sizes, mult)


@st.composite
def quivers(draw, max_vertices: int = 5, max_edges: int = 7):
    nv = draw(st.integers(0, max_vertices))
    vs = [f"v{i}" for i in range(nv)]
    if not nv:
        return Quiver()
    pairs = draw(st.lists(st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)), max_size=max_edges))
    return Quiver(vs, [(f"e{k}", vs[a], vs[b]) for k, (a, b) in enumerate(pairs)])


# -- oracles ----------------------------------------------------------------------

def exhaustive_homs(g: Quiver, h: Quiver) -> list[QuiverMorphism]:
    """Every homomorphism g -> h by filtering all raw assignment vectors.

    Cost is |V_h|^|V_g| * |E_h|^|E_g|; keep inputs tiny.
    """
    from quiverlab import check_morphism

    out = []
    for vs in itertools.product(h.vertices, repeat=len(g.vertices)):
        for es in itertools.product(h.edges, repeat=len(g.edges)):
            m = QuiverMorphism(g, h, dict(zip(g.vertices, vs)), dict(zip(g.edges, es)))
            if check_morphism(m).ok:
                out.append(m)
    return out


def brute_homs(g: Quiver, h: Quiver) -> list[QuiverMorphism]:
    """Every homomorphism g -> h: all vertex maps, then per-edge candidates by scanning E(h)."""
    out = []
    for vs in itertools.product(h.vertices, repeat=len(g.vertices)):
        vmap = dict(zip(g.vertices, vs))
        options = [
            [f for f in h.edges if h.src(f) == vmap[g.src(e)] and h.tgt(f) == vmap[g.tgt(e)]]
            for e in g.edges
        ]
        for es in itertools.product(*options):
            out.append(QuiverMorphism(g, h, vmap, dict(zip(g.edges, es))))
    return out


def brute_walks(q: Quiver, k: int) -> list[tuple[str, ...]]:
    """All edge sequences of length k forming a walk, by extending prefixes."""
    if k == 0:
        return [()]
    walks = [(e,) for e in q.edges]
    for _ in range(k - 1):
        walks = [w + (e,) for w in walks for e in q.edges if q.src(e) == q.tgt(w[-1])]
    return walks


def brute_walk_pairs(q: Quiver, k: int) -> set[tuple[str, str]]:
    if k == 0:
        return {(v, v) for v in q.vertices}
    return {(q.src(w[0]), q.tgt(w[-1])) for w in brute_walks(q, k)}


def compose_maps(f: QuiverMorphism, g: QuiverMorphism) -> QuiverMorphism:
    """g after f, computed pointwise."""
    return QuiverMorphism(
        f.domain, g.codomain,
        {v: g.vmap[f.vmap[v]] for v in f.domain.vertices},
        {e: g.emap[f.emap[e]] for e in f.domain.edges},
    )


def is_identity(m: QuiverMorphism) -> bool:
    return all(m.vmap[v] == v for v in m.domain.vertices) and all(m.emap[e] == e for e in m.domain.edges)
