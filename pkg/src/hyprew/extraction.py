"""Recovering a diagram term from a partial (left-)monogamous cospan.

The construction assembles the cospan as one big trace: a discrete wiring
layer (a permutation, plus fork/stub spiders in the comonoid case) feeds a
parallel block of disconnected generator edges, and the trace closes the
internal wires and loops.  Correctness is pinned by the round-trip
property: interpreting the result yields a cospan isomorphic to the input.
"""
from __future__ import annotations

from .cospan import (
    InterfacedCospan,
    is_partial_left_monogamous,
    is_partial_monogamous,
    isomorphic_cospans,
)
from .hypergraph import Signature
from .term import (
    Generator,
    Identity,
    TypedTerm,
    Trace,
    compose_terms,
    fan_out,
    interpret,
    permutation_term,
    simplify,
    tensor_terms,
    typecheck,
)


class ExtractionError(ValueError):
    """Input cospan outside the advertised validity class."""


def _violating_vertex(c: InterfacedCospan, left_only: bool) -> str:
    ins, outs = set(c.inputs), set(c.outputs)
    if len(ins) != len(c.inputs):
        return "input interface has duplicate vertices"
    if not left_only and len(outs) != len(c.outputs):
        return "output interface has duplicate vertices"
    for v, deg in c.graph.degrees().items():
        if left_only:
            limit = 0 if v in ins else 1
            if deg[0] > limit:
                return f"vertex {v} has degree {deg}"
        else:
            if v in ins and v in outs:
                ok = deg == (0, 0)
            elif v in ins:
                ok = deg == (0, 1)
            elif v in outs:
                ok = deg == (1, 0)
            else:
                ok = deg in ((0, 0), (1, 1))
            if not ok:
                return f"vertex {v} has degree {deg}"
    return "unknown violation"


def signature_of(c: InterfacedCospan) -> Signature:
    """Minimal signature over which the cospan's labels typecheck."""
    gens: dict[str, tuple[int, int]] = {}
    for e in c.graph.edges:
        gens[e.label] = (len(e.sources), len(e.targets))
    return Signature(gens)


def extract(c: InterfacedCospan, allow_comonoid: bool,
            sig: Signature | None = None) -> TypedTerm:
    """A term whose interpretation is isomorphic to ``c``.

    Requires ``c`` partial monogamous, or merely partial left-monogamous
    when ``allow_comonoid`` is set; fork/stub generators appear in the
    output only in the latter mode.
    """
    if allow_comonoid:
        if not is_partial_left_monogamous(c):
            raise ExtractionError(
                "cospan is not partial left-monogamous: "
                + _violating_vertex(c, left_only=True))
    elif not is_partial_monogamous(c):
        raise ExtractionError(
            "cospan is not partial monogamous: "
            + _violating_vertex(c, left_only=False))

    sig = sig or signature_of(c)
    g = c.graph
    in_degree = {v: d[0] for v, d in g.degrees().items()}
    inputs = list(c.inputs)

    loops = [v for v in g.vertices if in_degree[v] == 0 and v not in set(inputs)]
    targets = [t for e in g.edges for t in e.targets]
    sources = [s for e in g.edges for s in e.sources]

    wiring_in = loops + targets + inputs
    wiring_out = loops + sources + list(c.outputs)
    if sorted(wiring_in) != sorted(g.vertices):
        raise ExtractionError("internal error: wiring layer does not cover graph")

    positions: dict[int, list[int]] = {v: [] for v in wiring_in}
    for pos, v in enumerate(wiring_out):
        positions[v].append(pos)

    fans = []
    dest: list[int] = []
    for v in wiring_in:
        occ = positions[v]
        fans.append(fan_out(len(occ)))
        dest.extend(occ)
    wiring = compose_terms(tensor_terms(*fans), permutation_term(dest))

    edge_block = tensor_terms(*(Generator(e.label) for e in g.edges))
    body = compose_terms(
        wiring,
        tensor_terms(Identity(len(loops)), edge_block, Identity(c.cod)))
    term = simplify(Trace(len(loops) + len(targets), body))
    return typecheck(term, sig)


def equal_modulo_axioms(t1: TypedTerm, t2: TypedTerm, sig: Signature,
                        allow_comonoid: bool = True) -> bool:
    """Equality modulo the traced (comonoid) axioms, decided by cospan iso.

    Full completeness makes interpretation isomorphism a decision procedure
    for this equality; ``allow_comonoid`` only documents the intended
    theory, the test is the same in both modes.
    """
    if (t1.dom, t1.cod) != (t2.dom, t2.cod):
        raise ExtractionError(
            f"type mismatch: {t1.dom}->{t1.cod} vs {t2.dom}->{t2.cod}")
    del allow_comonoid
    return isomorphic_cospans(interpret(t1, sig), interpret(t2, sig))
