"""Reading meshes and fields, writing reports and Reeb graphs.

Mesh files are OFF (coordinates are read and ignored) or a JSON document
``{"vertex_count": n, "triangles": [[a, b, c], ...]}``. Field files hold one
exact value per vertex: integers, decimals such as ``0.25`` or rationals such
as ``1/3``, separated by whitespace. ``#`` starts a comment; a comment line
``# codomain: circle`` selects the codomain when the caller does not.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Optional

from .errors import CountMismatch, NonNumeric, ParseError
from .orbitcalc import HomotopyType, KValue
from .pipeline import Analysis
from .plmorse import CIRCLE, REAL, ScalarField
from .reeb import NodeKind, ReebGraph
from .surface import TriSurface, validate_surface

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?")


# --------------------------------------------------------------------------
# meshes


def _content_lines(text: str):
    """``(line number, tokens)`` for every non-blank line, comments stripped."""
    for no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield no, tokens


def parse_off(text: str) -> TriSurface:
    """Parse an OFF mesh made of triangles.

    Raises
    ------
    ParseError
        On a malformed file, with the offending line number. Surface
        validation errors pass through unchanged.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty mesh file", 1)
    no, tokens = lines[0]
    if tokens[0] != "OFF":
        raise ParseError(f"expected header 'OFF', found {tokens[0]!r}", no)
    rest = tokens[1:]
    pos = 1
    if not rest:
        if len(lines) < 2:
            raise ParseError("missing counts line", no + 1)
        no, rest = lines[1]
        pos = 2
    if len(rest) not in (2, 3) or not all(t.isdigit() for t in rest):
        raise ParseError("counts line must be 'V F E' with non-negative integers", no)
    nv, nf = int(rest[0]), int(rest[1])
    body = lines[pos:]
    if len(body) < nv + nf:
        last = body[-1][0] + 1 if body else no + 1
        raise ParseError(f"expected {nv} vertex and {nf} face lines, found {len(body)} lines", last)
    for no, tokens in body[:nv]:
        if len(tokens) < 3:
            raise ParseError("vertex line needs three coordinates", no)
        for t in tokens[:3]:
            try:
                float(t)
            except ValueError:
                raise ParseError(f"coordinate {t!r} is not a number", no) from None
    triangles = []
    for no, tokens in body[nv:nv + nf]:
        if not tokens[0].isdigit():
            raise ParseError(f"face size {tokens[0]!r} is not an integer", no)
        if int(tokens[0]) != 3:
            raise ParseError(f"only triangles are supported, found a face of size {tokens[0]}", no)
        if len(tokens) < 4 or not all(t.isdigit() for t in tokens[1:4]):
            raise ParseError("triangle line must be '3 i j k'", no)
        tri = tuple(int(t) for t in tokens[1:4])
        if max(tri) >= nv:
            raise ParseError(f"vertex index {max(tri)} out of range for {nv} vertices", no)
        triangles.append(tri)
    if len(body) > nv + nf:
        raise ParseError("unexpected content after the last face", body[nv + nf][0])
    return validate_surface(triangles, vertex_count=nv)


def parse_mesh_json(text: str) -> TriSurface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "triangles" not in doc:
        raise ParseError("mesh JSON needs a 'triangles' list")
    tris = doc["triangles"]
    if not isinstance(tris, list) or not all(
        isinstance(t, list) and len(t) == 3 and all(isinstance(v, int) for v in t) for t in tris
    ):
        raise ParseError("'triangles' must be a list of integer triples")
    return validate_surface(tris, vertex_count=doc.get("vertex_count"))


def parse_mesh(text: str) -> TriSurface:
    """Dispatch on content: JSON documents start with ``{``."""
    if text.lstrip().startswith("{"):
        return parse_mesh_json(text)
    return parse_off(text)


def format_off(S: TriSurface, coordinates=None) -> str:
    """OFF text for ``S``; coordinates default to zeros since none are stored."""
    out = ["OFF", f"{S.vertex_count} {len(S.triangles)} 0"]
    for v in range(S.vertex_count):
        x = coordinates[v] if coordinates is not None else (0, 0, 0)
        out.append(" ".join(str(c) for c in x))
    out.extend("3 " + " ".join(map(str, t)) for t in S.triangles)
    return "\n".join(out) + "\n"


def format_mesh_json(S: TriSurface) -> str:
    return json.dumps({"vertex_count": S.vertex_count, "triangles": [list(t) for t in S.triangles]})


# --------------------------------------------------------------------------
# fields


def parse_value(token: str, line: Optional[int] = None) -> Fraction:
    """Exact value of a decimal or ``p/q`` token."""
    if not _NUMBER.fullmatch(token):
        raise NonNumeric(f"{token!r} is not an exact number", line)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise NonNumeric(f"{token!r} has a zero denominator", line) from None


def parse_field(text: str, codomain: Optional[str] = None, vertex_count: Optional[int] = None) -> ScalarField:
    """Parse a field file.

    Parameters
    ----------
    text : str
        Whitespace-separated values in vertex order.
    codomain : {"real", "circle"}, optional
        Overrides a ``# codomain:`` header; defaults to real.
    vertex_count : int, optional
        When given, the number of values must match.
    """
    header = None
    values = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        m = re.match(r"\s*codomain\s*:\s*(\w+)", comment)
        if m:
            header = m.group(1).lower()
        for token in body.split():
            values.append(parse_value(token, no))
    codomain = codomain or header or REAL
    if codomain not in (REAL, CIRCLE):
        raise ParseError(f"unknown codomain {codomain!r}")
    if vertex_count is not None and len(values) != vertex_count:
        raise CountMismatch(f"{len(values)} values for {vertex_count} vertices")
    return ScalarField(codomain, tuple(values))


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_field(f: ScalarField) -> str:
    lines = [f"# codomain: {f.codomain}"]
    lines.extend(format_fraction(v) for v in f.values)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Reeb graphs as DOT

_SHAPES = {
    NodeKind.BOUNDARY: "box",
    NodeKind.EXTREMUM: "circle",
    NodeKind.SADDLE: "diamond",
    NodeKind.ANCHOR: "point",
}


def reeb_to_dot(G: ReebGraph, name: str = "reeb") -> str:
    """Graphviz text: node shape by kind, label by level, internal edges bold."""
    lines = [f"digraph {json.dumps(name)} {{"]
    for i, n in enumerate(G.nodes):
        label = f"{n.kind.value} {format_fraction(n.level)}"
        lines.append(f'  n{i} [shape={_SHAPES[n.kind]}, label="{label}"];')
    for j, e in enumerate(G.edges):
        style = "bold" if e.is_internal else "solid"
        lines.append(f'  n{e.tail} -> n{e.head} [label="{format_fraction(e.span)}", style={style}, id="e{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# reports


def report_document(A: Analysis) -> dict[str, Any]:
    """The report as a nested dict with typed leaves (Fraction, HomotopyType, KValue)."""
    R, C, md, G = A.report, A.classification, A.morse, A.graph
    group = None
    if R.G is not None:
        group = {"level": R.G.level, "order_bound": R.G.order, "note": R.G.note}
    minimal = None
    if R.minimal is not None:
        minimal = {"rC": R.minimal.r_C, "rE": R.minimal.r_E, "contractions": R.minimal.contractions}
    twists = None
    if A.twists is not None:
        twists = {"l": A.twists.l, "modulus": A.twists.modulus, "independent": A.twists_independent}
    letter = R.type_ABCDE[0] if R.type_ABCDE else None
    return {
        "surface": {
            "orientable": C.orientable,
            "genus": C.genus,
            "b": C.boundary_count,
            "chi": C.euler_characteristic,
            "name": C.name,
        },
        "morse": {
            "c0": md.c0,
            "c1": md.c1,
            "c2": md.c2,
            "generic": md.is_generic,
            "simple": md.is_simple,
        },
        "reeb": {
            "codomain": G.codomain,
            "nodes": [
                {"kind": n.kind.value, "level": n.level, "witnesses": list(n.witnesses)} for n in G.nodes
            ],
            "edges": [
                {"tail": e.tail, "head": e.head, "span": e.span, "internal": e.is_internal} for e in G.edges
            ],
            "l": G.l,
        },
        "minimal": minimal,
        "k": R.k,
        "homotopy": {
            "stabilizer_id": R.stabilizer_id_type,
            "orbit": R.orbit_type,
            "orbit_f": R.orbit_f_type,
            "pi0_leaf": R.pi0_leaf_preserving,
            "higher_pi_rule": R.higher_pi,
            "diff_id": R.diff_id,
        },
        "pi1": {
            "diff_id": R.pi1_diff,
            "free_rank": R.k,
            "G": group,
        },
        "codim": {"orbit": R.codim_orbit, "orbit_cr": R.codim_orbit_cr},
        "type": letter,
        "type_detail": R.type_ABCDE,
        "twists": twists,
        "flags": list(R.flags),
    }


_HOMOTOPY_KEYS = {("homotopy", "stabilizer_id"), ("homotopy", "orbit"), ("homotopy", "orbit_f"), ("homotopy", "diff_id")}
_FRACTION_KEYS = {"level", "span"}
_KVALUE_KEYS = {("k",), ("pi1", "free_rank")}


def _encode(x, path=()):
    if isinstance(x, dict):
        return {k: _encode(v, path + (k,)) for k, v in x.items()}
    if isinstance(x, list):
        return [_encode(v, path) for v in x]
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, HomotopyType):
        return str(x)
    if isinstance(x, KValue):
        return x.to_json()
    return x


def _decode(x, path=()):
    if isinstance(x, dict):
        return {k: _decode(v, path + (k,)) for k, v in x.items()}
    if isinstance(x, list) and path not in _KVALUE_KEYS:
        return [_decode(v, path) for v in x]
    if x is None:
        return None
    if path in _KVALUE_KEYS:
        return KValue.from_json(x)
    if path in _HOMOTOPY_KEYS:
        return HomotopyType.parse(x)
    if path[:1] == ("reeb",) and path[-1] in _FRACTION_KEYS:
        return Fraction(x)
    return x


def dumps_report(doc: dict[str, Any]) -> str:
    return json.dumps(_encode(doc), indent=2)


def loads_report(text: str) -> dict[str, Any]:
    """Inverse of :func:`dumps_report`."""
    return _decode(json.loads(text))


def render_text(doc: dict[str, Any]) -> str:
    """Flat ``path: value`` lines; the Reeb node and edge lists are summarised."""
    out = []

    def walk(x, prefix):
        if isinstance(x, dict):
            for k, v in x.items():
                walk(v, f"{prefix}.{k}" if prefix else k)
        elif prefix in ("reeb.nodes", "reeb.edges"):
            out.append(f"{prefix}: {len(x)}")
        elif isinstance(x, list):
            out.append(f"{prefix}: {', '.join(map(str, x)) if x else '-'}")
        else:
            out.append(f"{prefix}: {_encode(x) if x is not None else '-'}")

    walk(doc, "")
    return "\n".join(out) + "\n"
