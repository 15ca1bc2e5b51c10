"""The two bundled worked examples.

`running` is an annulus-like region with two square holes: X has 24
vertices and 26 triangles, T is the outer boundary cycle plus both hole
boundaries, and the bundled function and field come with it.
`pathological` is a single triangle with one vertex removed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .complex import ComplexPair
from .gradient import MorseFunction, VectorField
from .io import Labels, parse_field, parse_function, parse_pair


@dataclass(frozen=True)
class Fixture:
    name: str
    pair: ComplexPair
    field: VectorField
    labels: Labels
    function: MorseFunction | None = None

    def cell(self, *names) -> tuple:
        """Cell from vertex labels, e.g. fx.cell(7, 8)."""
        return tuple(sorted(self.labels.decode_vertex(str(n) if self.labels.names else n, "cell")
                            for n in names))


def _doc(name: str) -> dict:
    return json.loads(resources.files("openmorse").joinpath("data", name).read_text())


def data_path(name: str):
    return resources.files("openmorse").joinpath("data", name)


def load(name: str) -> Fixture:
    pair, labels = parse_pair(_doc(f"{name}.pair.json"))
    field = parse_field(_doc(f"{name}.field.json"), pair, labels)
    try:
        fdoc = _doc(f"{name}.function.json")
    except FileNotFoundError:
        f = None
    else:
        f = parse_function(fdoc, pair, labels)
    return Fixture(name, pair, field, labels, f)


def running() -> Fixture:
    return load("running")


def pathological() -> Fixture:
    return load("pathological")


NAMES = ("running", "pathological")
