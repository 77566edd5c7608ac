"""Interfaced cospans of hypergraphs.

A cospan is a hypergraph together with ordered input and output vertex
lists (the images of the two discrete interface legs).  Composition glues
along the shared interface by pushout, tensor is disjoint union, and the
trace quotients paired interface vertices directly.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .hypergraph import (
    Homomorphism,
    Hypergraph,
    _expect_keys,
    coproduct,
    isomorphic,
    pushout,
    quotient_vertices,
)


class CospanError(ValueError):
    """Interface mismatch or malformed cospan."""


class ValidityClass(enum.Enum):
    GENERAL = "General"
    PARTIAL_MONOGAMOUS = "PartialMonogamous"
    PARTIAL_LEFT_MONOGAMOUS = "PartialLeftMonogamous"


@dataclass(frozen=True)
class InterfacedCospan:
    """A hypergraph with ordered input/output interfaces (duplicates allowed)."""

    graph: Hypergraph
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        vs = set(self.graph.vertices)
        for v in self.inputs + self.outputs:
            if v not in vs:
                raise CospanError(f"interface references missing vertex {v}")

    @property
    def dom(self) -> int:
        return len(self.inputs)

    @property
    def cod(self) -> int:
        return len(self.outputs)

    def to_json_dict(self) -> dict:
        doc = self.graph.to_json_dict()
        doc["input"] = list(self.inputs)
        doc["output"] = list(self.outputs)
        return doc

    @staticmethod
    def from_json_dict(doc: dict) -> InterfacedCospan:
        _expect_keys(doc, {"vertices", "edges", "input", "output"})
        graph = Hypergraph.from_json_dict(
            {"vertices": doc["vertices"], "edges": doc["edges"]})
        return InterfacedCospan(graph, tuple(doc["input"]), tuple(doc["output"]))


def cospan_to_json(c: InterfacedCospan) -> str:
    return json.dumps(c.to_json_dict(), indent=2, sort_keys=True)


def cospan_from_json(text: str) -> InterfacedCospan:
    return InterfacedCospan.from_json_dict(json.loads(text))


def identity(n: int) -> InterfacedCospan:
    g = Hypergraph.discrete(n)
    wires = tuple(range(n))
    return InterfacedCospan(g, wires, wires)


def symmetry(m: int, n: int) -> InterfacedCospan:
    g = Hypergraph.discrete(m + n)
    return InterfacedCospan(
        g, tuple(range(m + n)),
        tuple(range(m, m + n)) + tuple(range(m)))


def copy(n: int) -> InterfacedCospan:
    """Comultiplication n -> n+n: both output halves equal the input list."""
    wires = tuple(range(n))
    return InterfacedCospan(Hypergraph.discrete(n), wires, wires + wires)


def discard(n: int) -> InterfacedCospan:
    return InterfacedCospan(Hypergraph.discrete(n), tuple(range(n)), ())


def merge(n: int) -> InterfacedCospan:
    wires = tuple(range(n))
    return InterfacedCospan(Hypergraph.discrete(n), wires + wires, wires)


def init(n: int) -> InterfacedCospan:
    return InterfacedCospan(Hypergraph.discrete(n), (), tuple(range(n)))


def cup(n: int) -> InterfacedCospan:
    """Unit 0 -> n+n of the self-dual compact closed structure."""
    wires = tuple(range(n))
    return InterfacedCospan(Hypergraph.discrete(n), (), wires + wires)


def cap(n: int) -> InterfacedCospan:
    wires = tuple(range(n))
    return InterfacedCospan(Hypergraph.discrete(n), wires + wires, ())


def generator(label: str, arity: int, coarity: int) -> InterfacedCospan:
    """Single-edge cospan m -> (edge) <- n interpreting a generator."""
    g = Hypergraph.build(
        arity + coarity,
        [(label, list(range(arity)), list(range(arity, arity + coarity)))])
    return InterfacedCospan(
        g, tuple(range(arity)), tuple(range(arity, arity + coarity)))


def compose(a: InterfacedCospan, b: InterfacedCospan) -> InterfacedCospan:
    """Glue a's outputs to b's inputs by pushout over the shared interface."""
    if a.cod != b.dom:
        raise CospanError(f"cannot compose: {a.cod} outputs vs {b.dom} inputs")
    k = Hypergraph.discrete(a.cod)
    f = Homomorphism(k, a.graph, {i: a.outputs[i] for i in range(a.cod)}, {})
    g = Homomorphism(k, b.graph, {i: b.inputs[i] for i in range(b.dom)}, {})
    apex, in_a, in_b = pushout(f, g)
    return InterfacedCospan(
        apex,
        tuple(in_a.vmap[v] for v in a.inputs),
        tuple(in_b.vmap[v] for v in b.outputs))


def tensor(a: InterfacedCospan, b: InterfacedCospan) -> InterfacedCospan:
    apex, in_a, in_b = coproduct(a.graph, b.graph)
    return InterfacedCospan(
        apex,
        tuple(in_a.vmap[v] for v in a.inputs) + tuple(in_b.vmap[v] for v in b.inputs),
        tuple(in_a.vmap[v] for v in a.outputs) + tuple(in_b.vmap[v] for v in b.outputs))


def trace(x: int, c: InterfacedCospan) -> InterfacedCospan:
    """Quotient the first x input vertices with the first x output vertices."""
    if c.dom < x or c.cod < x:
        raise CospanError(f"trace width {x} exceeds interface {c.dom}->{c.cod}")
    q, vmap = quotient_vertices(
        c.graph, [(c.inputs[k], c.outputs[k]) for k in range(x)])
    return InterfacedCospan(
        q,
        tuple(vmap[v] for v in c.inputs[x:]),
        tuple(vmap[v] for v in c.outputs[x:]))


def is_partial_monogamous(c: InterfacedCospan) -> bool:
    """Both legs mono and every vertex degree matches the monogamy table.

    (0,0) in both interfaces; (0,1) input only; (1,0) output only;
    (0,0) or (1,1) otherwise.
    """
    if len(set(c.inputs)) != len(c.inputs):
        return False
    if len(set(c.outputs)) != len(c.outputs):
        return False
    ins, outs = set(c.inputs), set(c.outputs)
    for v, deg in c.graph.degrees().items():
        if v in ins and v in outs:
            ok = deg == (0, 0)
        elif v in ins:
            ok = deg == (0, 1)
        elif v in outs:
            ok = deg == (1, 0)
        else:
            ok = deg in ((0, 0), (1, 1))
        if not ok:
            return False
    return True


def is_partial_left_monogamous(c: InterfacedCospan) -> bool:
    """Input leg mono; input vertices have in-degree 0, others at most 1."""
    if len(set(c.inputs)) != len(c.inputs):
        return False
    ins = set(c.inputs)
    for v, (in_deg, _) in c.graph.degrees().items():
        if v in ins:
            if in_deg != 0:
                return False
        elif in_deg > 1:
            return False
    return True


def validity_class(c: InterfacedCospan) -> ValidityClass:
    if is_partial_monogamous(c):
        return ValidityClass.PARTIAL_MONOGAMOUS
    if is_partial_left_monogamous(c):
        return ValidityClass.PARTIAL_LEFT_MONOGAMOUS
    return ValidityClass.GENERAL


def cospan_isomorphism(a: InterfacedCospan, b: InterfacedCospan
                       ) -> Homomorphism | None:
    """Graph isomorphism commuting with both interface lists pointwise."""
    if a.dom != b.dom or a.cod != b.cod:
        raise CospanError("interface length mismatch")
    anchor: dict[int, int] = {}
    for v, w in zip(a.inputs + a.outputs, b.inputs + b.outputs):
        if anchor.setdefault(v, w) != w:
            return None
    return isomorphic(a.graph, b.graph, anchor)


def isomorphic_cospans(a: InterfacedCospan, b: InterfacedCospan) -> bool:
    """True iff a graph iso exists commuting with both interfaces pointwise.

    Cospans of different interface shapes are simply not isomorphic.
    """
    if a.dom != b.dom or a.cod != b.cod:
        return False
    return cospan_isomorphism(a, b) is not None


def to_dot(c: InterfacedCospan, name: str = "cospan") -> str:
    """Graphviz rendering: vertices as points, hyperedges as labelled boxes.

    Interface positions are annotated 0..m-1 on inputs and m..m+n-1 on
    outputs, matching the convention of numbering outputs after inputs.
    """
    m = c.dom
    notes: dict[int, list[str]] = {}
    for pos, v in enumerate(c.inputs):
        notes.setdefault(v, []).append(str(pos))
    for pos, v in enumerate(c.outputs):
        notes.setdefault(v, []).append(str(m + pos))
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in c.graph.vertices:
        label = ",".join(notes.get(v, []))
        lines.append(
            f'  v{v} [shape=point, xlabel="{label}"];' if label
            else f"  v{v} [shape=point];")
    for i, e in enumerate(c.graph.edges):
        lines.append(f'  e{i} [shape=box, label="{e.label}"];')
        for port, v in enumerate(e.sources):
            lines.append(f'  v{v} -> e{i} [label="{port}"];')
        for port, v in enumerate(e.targets):
            lines.append(f'  e{i} -> v{v} [label="{port}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
