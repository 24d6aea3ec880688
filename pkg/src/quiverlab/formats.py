"""Reading and writing quivers, morphisms, blow-up specs, and DOT.

Quiver text format, one declaration per line, ``#`` starts a comment::

    vertex a
    edge e : a -> b

JSON form: ``{"vertices": [...], "edges": [{"id": .., "src": .., "tgt": ..}]}``.

Morphism files (``.morph``) name their domain and codomain files, then
list images::

    domain p3.quiver
    codomain c3.quiver
    vmap a_1 -> a_1
    emap x_1 -> x_1

Relative paths resolve against the morphism file's directory.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .blowup import BlowupSpec
from .core import Quiver, QuiverMorphism, validate
from .errors import ParseError, ValidationError

__all__ = [
    "NAME",
    "parse_quiver",
    "format_quiver",
    "quiver_to_json",
    "quiver_from_json",
    "load_quiver",
    "dump_quiver",
    "parse_morphism",
    "format_morphism",
    "load_morphism",
    "morphism_to_json",
    "blowup_spec_from_json",
    "load_blowup_spec",
    "export_dot",
]

# '.', ',' and parentheses appear in ids produced by blow-ups, products and coproducts
NAME = r"[A-Za-z0-9_.,()]+"
_VERTEX = re.compile(rf"vertex\s+({NAME})")
_EDGE = re.compile(rf"edge\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})")
_MAP = re.compile(rf"(vmap|emap)\s+({NAME})\s*->\s*({NAME})")
_HEADER = re.compile(r"(domain|codomain)\s+(\S+)")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_quiver(text: str, source: str | None = None) -> Quiver:
    """Parse the text format.

    Syntax errors raise :class:`ParseError`; structural problems
    (dangling endpoints, duplicate ids) raise :class:`ValidationError`.
    """
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    for lineno, line in _lines(text):
        if m := _VERTEX.fullmatch(line):
            vertices.append(m.group(1))
        elif m := _EDGE.fullmatch(line):
            edges.append(m.groups())
        else:
            raise ParseError(f"cannot parse {line!r}", lineno, source)
    return Quiver(vertices, edges)


def format_quiver(q: Quiver) -> str:
    lines = [f"vertex {v}" for v in q.vertices]
    lines += [f"edge {e} : {s} -> {t}" for e, s, t in q.triples()]
    return "".join(line + "\n" for line in lines)


def quiver_to_json(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "edges": [{"id": e, "src": s, "tgt": t} for e, s, t in q.triples()],
    }


def quiver_from_json(data) -> Quiver:
    try:
        return validate(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(f"malformed quiver JSON: {exc}") from exc


def load_quiver(path: str | Path) -> Quiver:
    path = Path(path)
    text = path.read_text()
    if path.name.endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), exc.lineno, str(path)) from exc
        return quiver_from_json(data)
    return parse_quiver(text, str(path))


def dump_quiver(q: Quiver, path: str | Path) -> None:
    path = Path(path)
    if path.name.endswith(".json"):
        path.write_text(json.dumps(quiver_to_json(q), indent=2) + "\n")
    else:
        path.write_text(format_quiver(q))


def parse_morphism(text: str, domain: Quiver | None = None, codomain: Quiver | None = None,
                   base_dir: str | Path = ".", source: str | None = None) -> QuiverMorphism:
    """Parse a morphism file.

    ``domain``/``codomain`` override the header; otherwise the named files
    are loaded relative to ``base_dir``.
    """
    header: dict[str, str] = {}
    vmap: dict[str, str] = {}
    emap: dict[str, str] = {}
    for lineno, line in _lines(text):
        if m := _MAP.fullmatch(line):
            kind, a, b = m.groups()
            target = vmap if kind == "vmap" else emap
            if a in target:
                raise ParseError(f"{a!r} mapped twice", lineno, source)
            target[a] = b
        elif m := _HEADER.fullmatch(line):
            header[m.group(1)] = m.group(2)
        else:
            raise ParseError(f"cannot parse {line!r}", lineno, source)
    if domain is None:
        if "domain" not in header:
            raise ParseError("missing 'domain' header", source=source)
        domain = load_quiver(Path(base_dir) / header["domain"])
    if codomain is None:
        if "codomain" not in header:
            raise ParseError("missing 'codomain' header", source=source)
        codomain = load_quiver(Path(base_dir) / header["codomain"])
    return QuiverMorphism(domain, codomain, vmap, emap)


def format_morphism(m: QuiverMorphism, domain_path: str, codomain_path: str) -> str:
    lines = [f"domain {domain_path}", f"codomain {codomain_path}"]
    lines += [f"vmap {v} -> {m.vmap[v]}" for v in m.domain.vertices]
    lines += [f"emap {e} -> {m.emap[e]}" for e in m.domain.edges]
    return "".join(line + "\n" for line in lines)


def load_morphism(path: str | Path) -> QuiverMorphism:
    path = Path(path)
    return parse_morphism(path.read_text(), base_dir=path.parent, source=str(path))


def morphism_to_json(m: QuiverMorphism) -> dict:
    return {
        "vmap": {v: m.vmap[v] for v in m.domain.vertices},
        "emap": {e: m.emap[e] for e in m.domain.edges},
    }


def blowup_spec_from_json(data, base_dir: str | Path = ".") -> BlowupSpec:
    """``{"base": <file or quiver JSON>, "sizes": {...}, "multiplicity": int|map}``.

    Base vertices missing from ``sizes`` default to size 1.
    """
    if not isinstance(data, dict) or "base" not in data:
        raise ParseError("blow-up spec needs a 'base' entry")
    base_ref = data["base"]
    base = load_quiver(Path(base_dir) / base_ref) if isinstance(base_ref, str) else quiver_from_json(base_ref)
    sizes = {v: 1 for v in base.vertices}
    sizes.update(data.get("sizes", {}))
    return BlowupSpec(base, sizes, data.get("multiplicity", 1))


def load_blowup_spec(path: str | Path) -> BlowupSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), exc.lineno, str(path)) from exc
    return blowup_spec_from_json(data, path.parent)


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(q: Quiver, classification=None, name: str = "quiver") -> str:
    """Render ``q`` as a DOT digraph, one statement per edge.

    With a classification, each component contributes its clusters (blow-up
    classes or layers) as ``subgraph cluster_*`` blocks.
    """
    lines = [f"digraph {name} {{"]
    clustered: set[str] = set()
    clusters: list[tuple[str, tuple[str, ...]]] = []
    if classification is not None:
        for ci, comp in enumerate(classification.components):
            for label, members in comp.clusters():
                clusters.append((f"component {ci}: {label}", members))
                clustered.update(members)
    for v in q.vertices:
        if v not in clustered:
            lines.append(f"  {_q(v)};")
    for k, (label, members) in enumerate(clusters):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f"    label={_q(label)};")
        for v in members:
            lines.append(f"    {_q(v)};")
        lines.append("  }")
    for e, s, t in q.triples():
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
