"""JSON documents for pairs, vector fields, functions and reports.

PairDocument      {"labels": [...]?, "X": [[v, ...], ...], "T": [[v, ...], ...]}
FieldDocument     {"labels": [...]?, "pairs": [[face, coface], ...]}
FunctionDocument  {"labels": [...]?, "values": [[cell, value], ...]}

Without a label table vertices are non-negative integers.  With one, each
vertex is written as its label and maps to its position in the table.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .complex import Cell, ComplexPair, build_pair, simplex, sort_cells
from .errors import MorseError, ParseError
from .gradient import MorseFunction, VectorField, validate_field


@dataclass(frozen=True)
class Labels:
    names: tuple | None = None

    @property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.names or ())}

    def decode_vertex(self, v: Any, locus: str) -> int:
        if self.names is None:
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ParseError(f"expected a non-negative integer vertex, got {v!r}", locus)
            return v
        key = str(v)
        idx = self.index
        if key not in idx:
            raise ParseError(f"unknown vertex label {v!r}", locus)
        return idx[key]

    def decode_cell(self, raw: Any, locus: str) -> Cell:
        if not isinstance(raw, list):
            raise ParseError(f"expected a vertex list, got {raw!r}", locus)
        try:
            return simplex(self.decode_vertex(v, f"{locus}[{i}]") for i, v in enumerate(raw))
        except ParseError:
            raise
        except MorseError as e:
            raise ParseError(str(e), locus) from e

    def encode_vertex(self, v: int):
        return v if self.names is None else self.names[v]

    def encode_cell(self, c: Cell) -> list:
        return [self.encode_vertex(v) for v in c]

    def name(self, c: Cell) -> str:
        return "{" + ",".join(str(self.encode_vertex(v)) for v in c) + "}"


def _labels(doc: Mapping, locus: str) -> Labels:
    raw = doc.get("labels")
    if raw is None:
        return Labels()
    if not isinstance(raw, list) or len(set(map(str, raw))) != len(raw):
        raise ParseError("labels must be a list of distinct names", f"{locus}.labels")
    return Labels(tuple(str(x) for x in raw))


def _load(source: str | Path | Mapping, what: str) -> tuple[Mapping, str]:
    if isinstance(source, Mapping):
        return source, what
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read file: {e}", str(path)) from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"{path}:{e.lineno}:{e.colno}") from e
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", str(path))
    return doc, str(path)


def parse_pair(source) -> tuple[ComplexPair, Labels]:
    doc, locus = _load(source, "pair")
    labels = _labels(doc, locus)
    if "X" not in doc:
        raise ParseError("missing field X", locus)
    gens = {}
    for key in ("X", "T"):
        raw = doc.get(key, [])
        if not isinstance(raw, list):
            raise ParseError("expected a list of vertex lists", f"{locus}.{key}")
        gens[key] = [labels.decode_cell(g, f"{locus}.{key}[{i}]") for i, g in enumerate(raw)]
    try:
        return build_pair(gens["X"], gens["T"]), labels
    except MorseError as e:
        raise ParseError(str(e), locus) from e


def parse_field(source, pair: ComplexPair, labels: Labels | None = None) -> VectorField:
    doc, locus = _load(source, "field")
    labels = _labels(doc, locus) if "labels" in doc else (labels or Labels())
    raw = doc.get("pairs")
    if not isinstance(raw, list):
        raise ParseError("missing list field pairs", locus)
    pairs = []
    for i, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError("each pair is [face, coface]", f"{locus}.pairs[{i}]")
        pairs.append((labels.decode_cell(p[0], f"{locus}.pairs[{i}][0]"),
                      labels.decode_cell(p[1], f"{locus}.pairs[{i}][1]")))
    return VectorField.of(pairs, pair.K)


def parse_function(source, pair: ComplexPair, labels: Labels | None = None) -> MorseFunction:
    """Values on K (and optionally on T cells); domain is K when only K is covered."""
    doc, locus = _load(source, "function")
    labels = _labels(doc, locus) if "labels" in doc else (labels or Labels())
    raw = doc.get("values")
    if not isinstance(raw, list):
        raise ParseError("missing list field values", locus)
    values = {}
    for i, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 2 or isinstance(item[1], bool) \
                or not isinstance(item[1], (int, float)):
            raise ParseError("each entry is [cell, number]", f"{locus}.values[{i}]")
        c = labels.decode_cell(item[0], f"{locus}.values[{i}][0]")
        if c not in pair.X:
            raise ParseError(f"cell {c} is not in X", f"{locus}.values[{i}]")
        values[c] = item[1]
    domain = pair.X if all(c in values for c in pair.X.cells) else pair.K
    return MorseFunction(values, domain)


def parse_inputs(pair_src, field_src=None, function_src=None):
    pair, labels = parse_pair(pair_src)
    V = parse_field(field_src, pair, labels) if field_src is not None else None
    if V is not None:
        bad = validate_field(V)
        if bad:
            raise ParseError("; ".join(v.detail for v in bad[:5]), "field")
    f = parse_function(function_src, pair, labels) if function_src is not None else None
    return pair, V, f, labels


def pair_document(pair: ComplexPair, labels: Labels | None = None) -> dict:
    labels = labels or Labels()
    doc: dict = {}
    if labels.names is not None:
        doc["labels"] = list(labels.names)
    doc["X"] = [labels.encode_cell(c) for c in pair.X.maximal_cells()]
    doc["T"] = [labels.encode_cell(c) for c in pair.T.maximal_cells()]
    return doc


def field_document(V: VectorField, labels: Labels | None = None) -> dict:
    labels = labels or Labels()
    doc: dict = {}
    if labels.names is not None:
        doc["labels"] = list(labels.names)
    doc["pairs"] = [[labels.encode_cell(a), labels.encode_cell(b)] for a, b in V.ordered_pairs]
    return doc


def function_document(f: MorseFunction, labels: Labels | None = None) -> dict:
    labels = labels or Labels()
    doc: dict = {}
    if labels.names is not None:
        doc["labels"] = list(labels.names)
    doc["values"] = [[labels.encode_cell(c), _num(f.values[c])] for c in sort_cells(f.values)]
    return doc


def _num(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def cells_json(cells: Sequence[Cell], labels: Labels | None = None) -> list:
    labels = labels or Labels()
    out = []
    for c in cells:
        if c and isinstance(c[0], tuple):
            out.append([labels.encode_cell(s) for s in c])
        else:
            out.append(labels.encode_cell(c))
    return out
