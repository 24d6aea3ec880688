"""Injectivity of quivers relative to monic maps, and the structure of
quivers injective relative to ``phi_n: P_n -> C_n``.

Two independent routes decide ``phi_n``-injectivity:

* :func:`is_phi_injective_brute` applies the definition: every map from
  the domain of ``phi`` must extend along ``phi``.
* :func:`is_phin_injective` uses the walk criterion: every walk of length
  ``n - 1`` must be closed up by an edge from its terminal vertex back to
  its initial vertex.

:func:`classify` splits a quiver into weak components and labels each as
short (no walk of length ``n - 1``), loaded, a blow-up of ``C_l`` with
``l | n``, or not injective, attaching a certificate that
:func:`verify_classification` re-checks from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .blowup import BlowupWitness, verify_blowup_witness
from .core import (
    Quiver,
    QuiverMorphism,
    WalkWitness,
    component_quivers,
    cycle_quiver,
    is_loaded,
    min_closed_walk,
    path_quiver,
    walk_matrix,
    find_walk,
)
from .errors import Budget, BudgetExceeded, InternalInconsistency, PrecondViolation
from .morphisms import check_morphism, enumerate_homs, extend_morphism, is_monic

__all__ = [
    "phi_n",
    "InjectivityVerdict",
    "is_phi_injective_brute",
    "is_phin_injective",
    "phi2_structure",
    "layering",
    "Short",
    "NotInjective",
    "Loaded",
    "CycleBlowup",
    "Phi2",
    "Classification",
    "classify",
    "verify_component",
    "verify_classification",
    "ClosureViolation",
    "check_lemma_closures",
]


def phi_n(n: int) -> QuiverMorphism:
    """The embedding of ``P_n`` into ``C_n`` fixing every ``a_j`` and ``x_j``."""
    if n < 2:
        raise PrecondViolation(f"phi_n needs n >= 2, got {n}")
    p, c = path_quiver(n), cycle_quiver(n)
    return QuiverMorphism(p, c, {v: v for v in p.vertices}, {e: e for e in p.edges})


@dataclass
class InjectivityVerdict:
    """``injective`` is ``None`` when a budget ran out before a decision."""

    injective: bool | None
    counterexample: tuple[QuiverMorphism, QuiverMorphism] | None = None
    walk: WalkWitness | None = None
    checked: int = 0
    extension_table: list[tuple[tuple[int, ...], tuple[int, ...]]] | None = None

    @property
    def status(self) -> str:
        return {True: "injective", False: "not_injective", None: "unknown"}[self.injective]

    def to_json(self) -> dict:
        from .formats import morphism_to_json

        out: dict = {"injective": self.injective, "status": self.status, "checked": self.checked}
        if self.counterexample is not None:
            phi, psi = self.counterexample
            out["counterexample"] = {"phi": morphism_to_json(phi), "psi": morphism_to_json(psi)}
        if self.walk is not None:
            out["walk"] = self.walk.to_json()
        if self.extension_table is not None:
            out["extension_table"] = [[list(a), list(b)] for a, b in self.extension_table]
        return out


def is_phi_injective_brute(
    j: Quiver,
    phi: QuiverMorphism,
    budget: Budget | int | None = None,
    keep_table: bool = False,
) -> InjectivityVerdict:
    """Decide injectivity of ``j`` relative to one monic ``phi`` from the definition.

    Every homomorphism from ``phi.domain`` into ``j`` is enumerated and
    extended along ``phi``; the first one that does not extend is returned
    as the counterexample.
    """
    if not check_morphism(phi).ok or not is_monic(phi):
        raise PrecondViolation("phi must be a monic quiver homomorphism")
    budget = Budget.coerce(budget)
    table = [] if keep_table else None
    checked = 0
    try:
        for psi in enumerate_homs(phi.domain, j, budget=budget):
            ext = extend_morphism(phi, psi, budget)
            checked += 1
            if ext is None:
                return InjectivityVerdict(False, (phi, psi), checked=checked, extension_table=table)
            if table is not None:
                table.append((psi.assignment_vector(), ext.assignment_vector()))
    except BudgetExceeded:
        return InjectivityVerdict(None, checked=checked, extension_table=table)
    return InjectivityVerdict(True, checked=checked, extension_table=table)


def _walk_morphism(walk: WalkWitness, j: Quiver) -> QuiverMorphism:
    p = path_quiver(len(walk.vertices))
    return QuiverMorphism(
        p, j,
        {f"a_{k}": v for k, v in enumerate(walk.vertices, start=1)},
        {f"x_{k}": e for k, e in enumerate(walk.edges, start=1)},
    )


def is_phin_injective(j: Quiver, n: int) -> InjectivityVerdict:
    """Walk criterion for ``phi_n``-injectivity.

    Pairs ``(u, v)`` are scanned in vertex order; the first pair joined by a
    walk of length ``n - 1`` but lacking an edge ``v -> u`` yields the
    lexicographically least such walk as counterexample.
    """
    if n < 2:
        raise PrecondViolation(f"n must be at least 2, got {n}")
    reach = walk_matrix(j, n - 1)
    vs = j.vertices
    for i, k in zip(*np.nonzero(reach)):
        u, v = vs[i], vs[k]
        if not j.between(v, u):
            walk = find_walk(j, u, v, n - 1)
            return InjectivityVerdict(False, (phi_n(n), _walk_morphism(walk, j)), walk=walk)
    return InjectivityVerdict(True)


def phi2_structure(j: Quiver) -> tuple[bool, str | None]:
    """Every non-loop edge must have a reverse companion; returns the first that does not."""
    for e in j.edges:
        s, t = j.ends(e)
        if s != t and not j.between(t, s):
            return False, e
    return True, None


def layering(component: Quiver, n: int) -> list[tuple[str, ...]] | None:
    """Layers by longest path ending at each vertex, or ``None`` if a walk of length ``n - 1`` exists.

    Layer ``i`` holds the vertices whose longest incoming path has ``i``
    edges, so every edge goes strictly upward.
    """
    if n < 2:
        raise PrecondViolation(f"n must be at least 2, got {n}")
    if walk_matrix(component, n - 1).any():
        return None
    # no walk of length n-1 >= 1 rules out cycles, so Kahn's order exists
    indeg = {v: 0 for v in component.vertices}
    for e in component.edges:
        indeg[component.tgt(e)] += 1
    depth = {v: 0 for v in component.vertices}
    ready = [v for v in component.vertices if indeg[v] == 0]
    while ready:
        v = ready.pop()
        for e in component.out_edges(v):
            w = component.tgt(e)
            depth[w] = max(depth[w], depth[v] + 1)
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    if not component.vertices:
        return []
    top = max(depth.values())
    return [tuple(v for v in component.vertices if depth[v] == i) for i in range(top + 1)]


# -- per-component verdicts ---------------------------------------------------

@dataclass
class _Component:
    kind: ClassVar[str]
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    def _base_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "edges": list(self.edges)}

    def clusters(self) -> list[tuple[str, tuple[str, ...]]]:
        return []


@dataclass
class Short(_Component):
    kind: ClassVar[str] = "short"
    layers: tuple[tuple[str, ...], ...] = ()
    vacuous: bool = False

    def to_json(self) -> dict:
        out = self._base_json()
        out["layers"] = [list(layer) for layer in self.layers]
        if self.vacuous:
            out["vacuous"] = True
        return out

    def clusters(self):
        return [(f"layer {i}", layer) for i, layer in enumerate(self.layers)]


@dataclass
class NotInjective(_Component):
    kind: ClassVar[str] = "not_injective"
    walk: WalkWitness = field(default_factory=lambda: WalkWitness((), ()))

    def to_json(self) -> dict:
        out = self._base_json()
        out["walk"] = self.walk.to_json()
        return out


@dataclass
class Loaded(_Component):
    kind: ClassVar[str] = "loaded"
    loop: str = ""
    witness: BlowupWitness | None = None

    @property
    def ell(self) -> int:
        return 1

    def to_json(self) -> dict:
        out = self._base_json()
        out["loop"] = self.loop
        out["witness"] = self.witness.to_json(include_quivers=False)
        return out

    def clusters(self):
        return [(f"A_{v}", block) for v, block in self.witness.A.items()]


@dataclass
class CycleBlowup(_Component):
    kind: ClassVar[str] = "cycle_blowup"
    ell: int = 0
    cycle: WalkWitness = field(default_factory=lambda: WalkWitness((), ()))
    witness: BlowupWitness | None = None

    def to_json(self) -> dict:
        out = self._base_json()
        out["ell"] = self.ell
        out["cycle"] = self.cycle.to_json()
        out["witness"] = self.witness.to_json(include_quivers=False)
        return out

    def clusters(self):
        return [(f"A_{v}", block) for v, block in self.witness.A.items()]


@dataclass
class Phi2(_Component):
    """Injective component at ``n = 2``: each non-loop edge paired with a reverse edge."""

    kind: ClassVar[str] = "phi2"
    reverse: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = self._base_json()
        out["reverse"] = dict(self.reverse)
        return out


@dataclass
class Classification:
    n: int
    injective: bool
    components: list[_Component]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "injective": self.injective,
            "components": [c.to_json() for c in self.components],
        }


def _cycle_blowup(comp: Quiver, n: int) -> CycleBlowup:
    found = min_closed_walk(comp)
    if found is None:
        raise InternalInconsistency("injective component with a long walk has no closed walk")
    ell, cycle = found
    if n % ell:
        raise InternalInconsistency(f"shortest closed walk has length {ell}, which does not divide {n}")
    ring = cycle.vertices[:-1]
    # class k collects the targets of edges leaving the k-1'th cycle vertex
    classes: list[set[str]] = [set() for _ in range(ell)]
    for j, v in enumerate(ring):
        classes[(j + 1) % ell].update(comp.tgt(e) for e in comp.out_edges(v))
    where: dict[str, int] = {}
    for k, members in enumerate(classes):
        for x in members:
            if x in where:
                raise InternalInconsistency(f"vertex {x!r} lies in partite sets {where[x]} and {k}")
            where[x] = k
    missing = [x for x in comp.vertices if x not in where]
    if missing:
        raise InternalInconsistency(f"partite sets miss vertices {missing}")

    base = cycle_quiver(ell)
    A = {f"a_{k + 1}": tuple(x for x in comp.vertices if where[x] == k) for k in range(ell)}
    blocks: dict[str, list[str]] = {f"x_{k + 1}": [] for k in range(ell)}
    for f in comp.edges:
        k = where[comp.src(f)]
        if where[comp.tgt(f)] != (k + 1) % ell:
            raise InternalInconsistency(f"edge {f!r} skips between partite sets")
        blocks[f"x_{k + 1}"].append(f)
    witness = BlowupWitness(base, comp, A, {e: tuple(b) for e, b in blocks.items()})
    problems = verify_blowup_witness(witness)
    if problems:
        raise InternalInconsistency("cycle blow-up witness fails verification: " + "; ".join(problems))
    return CycleBlowup(comp.vertices, comp.edges, ell=ell, cycle=cycle, witness=witness)


def _loaded(comp: Quiver) -> Loaded:
    if not is_loaded(comp):
        raise InternalInconsistency("injective component with a loop is not loaded")
    base = cycle_quiver(1)
    witness = BlowupWitness(base, comp, {"a_1": comp.vertices}, {"x_1": comp.edges})
    problems = verify_blowup_witness(witness)
    if problems:
        raise InternalInconsistency("loaded witness fails verification: " + "; ".join(problems))
    return Loaded(comp.vertices, comp.edges, loop=comp.loops()[0], witness=witness)


def classify_component(comp: Quiver, n: int) -> _Component:
    layers = layering(comp, n)
    if layers is not None:
        return Short(comp.vertices, comp.edges, layers=tuple(layers))
    verdict = is_phin_injective(comp, n)
    if not verdict.injective:
        return NotInjective(comp.vertices, comp.edges, walk=verdict.walk)
    if n == 2:
        reverse = {e: comp.between(comp.tgt(e), comp.src(e))[0] for e in comp.edges if not comp.is_loop(e)}
        return Phi2(comp.vertices, comp.edges, reverse=reverse)
    if comp.loops():
        return _loaded(comp)
    return _cycle_blowup(comp, n)


def classify(j: Quiver, n: int) -> Classification:
    """Label every weak component of ``j`` and decide ``phi_n``-injectivity.

    Checks run in the order short, walk criterion, loop, cycle blow-up.
    Structural claims are never trusted: every witness is re-verified, and a
    failed check raises :class:`InternalInconsistency`.  At ``n = 2`` no
    cycle structure is claimed; injective components carry their reverse
    edges instead.  The empty quiver yields one vacuous short component.
    """
    if n < 2:
        raise PrecondViolation(f"n must be at least 2, got {n}")
    comps = component_quivers(j)
    if not comps:
        return Classification(n, True, [Short((), (), layers=(), vacuous=True)])
    results = [classify_component(c, n) for c in comps]
    return Classification(n, not any(isinstance(c, NotInjective) for c in results), results)


# -- independent verification --------------------------------------------------

def verify_component(comp: Quiver, cert: _Component, n: int) -> list[str]:
    """Re-check one component certificate against the component itself."""
    problems: list[str] = []
    if isinstance(cert, Short):
        if not comp.vertices:
            return [] if cert.vacuous and not cert.layers else ["empty component with non-vacuous layering"]
        layer_of: dict[str, int] = {}
        for i, layer in enumerate(cert.layers):
            for v in layer:
                if v in layer_of:
                    problems.append(f"vertex {v!r} in two layers")
                layer_of[v] = i
        if set(layer_of) != set(comp.vertices):
            problems.append("layers do not partition the component")
            return problems
        for e in comp.edges:
            s, t = comp.ends(e)
            if layer_of[s] >= layer_of[t]:
                problems.append(f"edge {e!r} does not go upward")
        # each edge climbs a layer, so at most n-1 layers rules out walks of length n-1
        if len(cert.layers) > n - 1:
            problems.append(f"{len(cert.layers)} layers admit a walk of length {n - 1}")
    elif isinstance(cert, NotInjective):
        w = cert.walk
        if not w.is_valid_in(comp):
            problems.append("walk is not a walk in the component")
        elif w.length != n - 1:
            problems.append(f"walk has length {w.length}, expected {n - 1}")
        elif comp.between(w.terminal, w.initial):
            problems.append("walk is closed up by an edge, so it is no counterexample")
    elif isinstance(cert, Loaded):
        if not comp.vertices:
            problems.append("loaded component is empty")
        for v in comp.vertices:
            for w in comp.vertices:
                if not comp.between(v, w):
                    problems.append(f"no edge from {v!r} to {w!r}")
        if not comp.has_edge(cert.loop) or not comp.is_loop(cert.loop):
            problems.append(f"{cert.loop!r} is not a loop")
        if cert.witness is None or cert.witness.base != cycle_quiver(1) or cert.witness.blown != comp:
            problems.append("witness is not over C_1 and this component")
        else:
            problems += verify_blowup_witness(cert.witness)
    elif isinstance(cert, CycleBlowup):
        if cert.ell < 1 or n % cert.ell:
            problems.append(f"cycle length {cert.ell} does not divide {n}")
        elif cert.witness is None or cert.witness.base != cycle_quiver(cert.ell) or cert.witness.blown != comp:
            problems.append(f"witness is not over C_{cert.ell} and this component")
        else:
            problems += verify_blowup_witness(cert.witness)
    elif isinstance(cert, Phi2):
        if n != 2:
            problems.append("phi2 certificate used with n != 2")
        for e in comp.edges:
            if comp.is_loop(e):
                continue
            r = cert.reverse.get(e)
            if r is None or not comp.has_edge(r) or comp.ends(r) != comp.ends(e)[::-1]:
                problems.append(f"edge {e!r} lacks a valid reverse edge")
    else:
        problems.append(f"unknown certificate type {type(cert).__name__}")
    return problems


def verify_classification(j: Quiver, cls: Classification) -> list[str]:
    """Re-check a whole classification against ``j``; empty list means valid."""
    problems: list[str] = []
    seen_v = [v for c in cls.components for v in c.vertices]
    seen_e = [e for c in cls.components for e in c.edges]
    if sorted(seen_v) != sorted(j.vertices) or sorted(seen_e) != sorted(j.edges):
        problems.append("components do not partition the quiver")
        return problems
    for k, cert in enumerate(cls.components):
        edges = set(cert.edges)
        vertices = set(cert.vertices)
        if any(j.src(e) not in vertices or j.tgt(e) not in vertices for e in edges):
            problems.append(f"component {k} has edges leaving it")
            continue
        # a component must also keep every edge that touches it
        touching = {e for e in j.edges if j.src(e) in vertices or j.tgt(e) in vertices}
        if touching != edges:
            problems.append(f"component {k} is not closed under incident edges")
            continue
        comp = j.subquiver(cert.vertices, cert.edges)
        problems += [f"component {k}: {p}" for p in verify_component(comp, cert, cls.n)]
    negative = any(isinstance(c, NotInjective) for c in cls.components)
    if cls.injective == negative:
        problems.append("overall verdict disagrees with the component verdicts")
    return problems


# -- lemma audits --------------------------------------------------------------

@dataclass(frozen=True)
class ClosureViolation:
    lemma: str  # "propagation" or "triangulation"
    edges: tuple[str, ...]
    missing: str

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "edges": list(self.edges), "missing": self.missing}


def check_lemma_closures(j: Quiver, n: int) -> list[ClosureViolation]:
    """Audit the local closure properties every ``phi_n``-injective quiver has (``n >= 3``).

    Propagation: an edge between distinct ``u`` and ``w`` next to a loop at
    either end needs the reverse edge and a loop at the other end.
    Triangulation: edges ``w - x - y`` (any orientation, three distinct
    vertices) with a loop at ``y`` need edges both ways between ``w`` and
    ``y``.  For an injective input the report is empty.
    """
    if n < 3:
        raise PrecondViolation(f"closure lemmas need n >= 3, got {n}")
    out: list[ClosureViolation] = []
    seen: set[tuple[str, str]] = set()

    def loop_at(v: str) -> str | None:
        found = j.between(v, v)
        return found[0] if found else None

    def require(lemma, edges, missing):
        if (lemma, missing) not in seen:
            seen.add((lemma, missing))
            out.append(ClosureViolation(lemma, edges, missing))

    for g in j.edges:
        u, w = j.ends(g)
        if u == w:
            continue
        for end, other in ((w, u), (u, w)):
            loop = loop_at(end)
            if loop is None:
                continue
            involved = (g, loop) if end == w else (loop, g)
            if not j.between(w, u):
                require("propagation", involved, f"edge {w} -> {u}")
            if loop_at(other) is None:
                require("propagation", involved, f"loop at {other}")

    def neighbours(v: str):
        for e in j.out_edges(v):
            if not j.is_loop(e):
                yield e, j.tgt(e)
        for e in j.in_edges(v):
            if not j.is_loop(e):
                yield e, j.src(e)

    for y in j.vertices:
        loop = loop_at(y)
        if loop is None:
            continue
        for c, x in neighbours(y):
            for a, w in neighbours(x):
                if w in (x, y):
                    continue
                if not j.between(w, y):
                    require("triangulation", (a, c, loop), f"edge {w} -> {y}")
                if not j.between(y, w):
                    require("triangulation", (a, c, loop), f"edge {y} -> {w}")
    return out
