"""Blow-ups: construction, recognition, and the induced retraction.

A blow-up of ``G`` replaces each vertex ``v`` by a nonempty class ``A_v``
and each edge ``e: v -> w`` by a block ``B_e`` of edges running from
``A_v`` to ``A_w``, with at least one edge of ``B_e`` between every
``x in A_v`` and ``y in A_w``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .core import Quiver, QuiverMorphism
from .errors import Budget, InvalidSpec

__all__ = [
    "BlowupSpec",
    "BlowupWitness",
    "construct_blowup",
    "recognize_blowup",
    "verify_blowup_witness",
    "blowup_retraction",
    "identity_witness",
]


@dataclass(frozen=True)
class BlowupSpec:
    """Class sizes per base vertex and edge multiplicities.

    ``multiplicity`` is either one integer for every edge and pair, a map
    from base edge id to an integer, or a map from base edge id to a map
    ``"i.j" -> int`` addressing individual pairs (1-based class indices);
    unlisted entries default to 1.
    """

    base: Quiver
    vertex_sizes: Mapping[str, int]
    multiplicity: int | Mapping[str, int | Mapping[str, int]] = 1

    def __post_init__(self):
        problems = []
        for v in self.base.vertices:
            size = self.vertex_sizes.get(v)
            if not isinstance(size, int) or size < 1:
                problems.append(f"vertex {v!r} needs a positive size, got {size!r}")
        unknown = [v for v in self.vertex_sizes if not self.base.has_vertex(v)]
        if unknown:
            problems.append(f"sizes given for unknown vertices {unknown}")
        m = self.multiplicity
        if isinstance(m, Mapping):
            for e, spec in m.items():
                if not self.base.has_edge(e):
                    problems.append(f"multiplicity given for unknown edge {e!r}")
                    continue
                values = spec.values() if isinstance(spec, Mapping) else [spec]
                if any(not isinstance(k, int) or k < 1 for k in values):
                    problems.append(f"edge {e!r} has a non-positive multiplicity")
                if isinstance(spec, Mapping) and not problems:
                    s, t = self.base.ends(e)
                    for key in spec:
                        try:
                            i, j = (int(p) for p in key.split("."))
                        except ValueError:
                            problems.append(f"bad pair key {key!r} for edge {e!r}")
                            continue
                        if not (1 <= i <= self.vertex_sizes[s] and 1 <= j <= self.vertex_sizes[t]):
                            problems.append(f"pair {key!r} out of range for edge {e!r}")
        elif not isinstance(m, int) or m < 1:
            problems.append(f"multiplicity must be a positive integer, got {m!r}")
        if problems:
            raise InvalidSpec("; ".join(problems))

    def count(self, e: str, i: int, j: int) -> int:
        m = self.multiplicity
        if isinstance(m, int):
            return m
        spec = m.get(e, 1)
        if isinstance(spec, int):
            return spec
        return spec.get(f"{i}.{j}", 1)


@dataclass(frozen=True)
class BlowupWitness:
    base: Quiver
    blown: Quiver
    A: Mapping[str, tuple[str, ...]]
    B: Mapping[str, tuple[str, ...]]
    _vclass: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_vclass", {x: v for v, block in self.A.items() for x in block})

    def vertex_class(self, x: str) -> str:
        return self._vclass[x]

    def to_json(self, include_quivers: bool = True) -> dict:
        from .formats import quiver_to_json

        out: dict = {}
        if include_quivers:
            out["base"] = quiver_to_json(self.base)
            out["blown"] = quiver_to_json(self.blown)
        out["A"] = {v: list(self.A[v]) for v in self.base.vertices if v in self.A}
        out["B"] = {e: list(self.B[e]) for e in self.base.edges if e in self.B}
        return out


def construct_blowup(spec: BlowupSpec) -> tuple[Quiver, BlowupWitness]:
    """Build the blow-up described by ``spec``.

    Vertex ``i`` of class ``A_v`` is named ``v.i``; the ``k``-th edge of
    ``B_e`` from ``v.i`` to ``w.j`` is named ``e.i.j.k`` (all 1-based).
    """
    base = spec.base
    A = {v: tuple(f"{v}.{i}" for i in range(1, spec.vertex_sizes[v] + 1)) for v in base.vertices}
    edges = []
    B = {}
    for e in base.edges:
        s, t = base.ends(e)
        block = []
        for i in range(1, spec.vertex_sizes[s] + 1):
            for j in range(1, spec.vertex_sizes[t] + 1):
                for k in range(1, spec.count(e, i, j) + 1):
                    name = f"{e}.{i}.{j}.{k}"
                    edges.append((name, f"{s}.{i}", f"{t}.{j}"))
                    block.append(name)
        B[e] = tuple(block)
    blown = Quiver([x for v in base.vertices for x in A[v]], edges)
    return blown, BlowupWitness(base, blown, A, B)


def identity_witness(g: Quiver) -> BlowupWitness:
    return BlowupWitness(g, g, {v: (v,) for v in g.vertices}, {e: (e,) for e in g.edges})


def verify_blowup_witness(w: BlowupWitness) -> list[str]:
    """Check all blow-up conditions directly; an empty list means valid.

    Independent of how the witness was produced.
    """
    base, h = w.base, w.blown
    problems: list[str] = []
    if set(w.A) != set(base.vertices):
        problems.append("vertex classes are not indexed by the base vertices")
    if set(w.B) != set(base.edges):
        problems.append("edge blocks are not indexed by the base edges")
    if problems:
        return problems

    vclass: dict[str, str] = {}
    for v, block in w.A.items():
        if not block:
            problems.append(f"class A_{v} is empty")
        for x in block:
            if x in vclass:
                problems.append(f"vertex {x!r} lies in A_{vclass[x]} and A_{v}")
            elif not h.has_vertex(x):
                problems.append(f"class A_{v} contains unknown vertex {x!r}")
            vclass[x] = v
    eclass: dict[str, str] = {}
    for e, block in w.B.items():
        for f in block:
            if f in eclass:
                problems.append(f"edge {f!r} lies in B_{eclass[f]} and B_{e}")
            elif not h.has_edge(f):
                problems.append(f"block B_{e} contains unknown edge {f!r}")
            eclass[f] = e
    uncovered_v = [x for x in h.vertices if x not in vclass]
    uncovered_e = [f for f in h.edges if f not in eclass]
    if uncovered_v:
        problems.append(f"vertices outside every class: {uncovered_v}")
    if uncovered_e:
        problems.append(f"edges outside every block: {uncovered_e}")
    if problems:
        return problems

    for e in base.edges:
        s, t = base.ends(e)
        for f in w.B[e]:
            if vclass[h.src(f)] != s:
                problems.append(f"source of {f!r} is not in A_{s}")
            if vclass[h.tgt(f)] != t:
                problems.append(f"target of {f!r} is not in A_{t}")
        for x in w.A[s]:
            for y in w.A[t]:
                if not any(eclass[f] == e for f in h.between(x, y)):
                    problems.append(f"no edge of B_{e} from {x!r} to {y!r}")
    return problems


def recognize_blowup(base: Quiver, h: Quiver, budget: Budget | int | None = None) -> BlowupWitness | None:
    """Find a witness that ``h`` is a blow-up of ``base``, or ``None``.

    Vertices of ``h`` are assigned to classes least-first.  A pair of
    classes ``(c, d)`` joined by ``b`` base edges is compatible with a pair
    ``(x, y)`` of ``h`` carrying ``m`` edges exactly when ``b == m == 0`` or
    ``m >= b >= 1``: each base edge needs its own edge from ``x`` to ``y``,
    and every edge from ``x`` to ``y`` must belong to some block.  Once all
    pairs are compatible and no class is empty, edges are dealt out to the
    blocks directly.
    """
    budget = Budget.coerce(budget)
    if not base.vertices:
        return BlowupWitness(base, h, {}, {}) if not h.vertices else None
    if len(h.vertices) < len(base.vertices):
        return None

    def compatible(x: str, y: str, cx: str, cy: str) -> bool:
        b = len(base.between(cx, cy))
        m = len(h.between(x, y))
        return m == 0 if b == 0 else m >= b

    order = list(h.vertices)
    cls: dict[str, str] = {}
    sizes = {v: 0 for v in base.vertices}
    n_base = len(base.vertices)

    def rec(i: int, empty: int) -> bool:
        if i == len(order):
            return empty == 0
        if empty > len(order) - i:
            return False
        x = order[i]
        for c in base.vertices:
            budget.tick()
            if not compatible(x, x, c, c):
                continue
            if not all(compatible(x, y, c, cls[y]) and compatible(y, x, cls[y], c) for y in order[:i]):
                continue
            cls[x] = c
            sizes[c] += 1
            if rec(i + 1, empty - (sizes[c] == 1)):
                return True
            sizes[c] -= 1
            del cls[x]
        return False

    if not rec(0, n_base):
        return None

    A = {v: tuple(x for x in order if cls[x] == v) for v in base.vertices}
    blocks: dict[str, list[str]] = {e: [] for e in base.edges}
    assigned: dict[str, str] = {}
    for x in order:
        for y in order:
            targets = base.between(cls[x], cls[y])
            for k, f in enumerate(h.between(x, y)):
                assigned[f] = targets[k] if k < len(targets) else targets[0]
    for f in h.edges:
        blocks[assigned[f]].append(f)
    return BlowupWitness(base, h, A, {e: tuple(b) for e, b in blocks.items()})


def blowup_retraction(w: BlowupWitness) -> tuple[QuiverMorphism, QuiverMorphism]:
    """The class-collapsing retraction ``q`` and a section ``j`` with ``q ∘ j = id``.

    ``j`` picks the least vertex of each class and the least edge of
    ``B_e`` between the chosen endpoints.
    """
    base, h = w.base, w.blown
    q_v = {x: v for v, block in w.A.items() for x in block}
    q_e = {f: e for e, block in w.B.items() for f in block}
    q = QuiverMorphism(h, base, {x: q_v[x] for x in h.vertices}, {f: q_e[f] for f in h.edges})
    pick_v = {v: min(w.A[v], key=h.vertex_index) for v in base.vertices}
    pick_e = {}
    for e in base.edges:
        s, t = base.ends(e)
        pick_e[e] = next(f for f in h.between(pick_v[s], pick_v[t]) if q_e[f] == e)
    return q, QuiverMorphism(base, h, pick_v, pick_e)
