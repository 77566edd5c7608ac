"""Shared test utilities: random structures and independent oracles."""
from __future__ import annotations

import random

from hyprew.cospan import (
    InterfacedCospan,
    cap,
    compose,
    cup,
    identity,
    tensor,
)
from hyprew.hypergraph import Hypergraph, Signature
from hyprew.term import (
    Compose,
    Copy,
    Discard,
    Generator,
    Identity,
    Symmetry,
    Tensor,
    Term,
    Trace,
    TypedTerm,
    typecheck,
)

SIG3 = Signature({"phi": (2, 1), "psi": (1, 2), "theta": (1, 1)})


def random_hypergraph(rng: random.Random, max_vertices: int = 6,
                      sig: Signature = SIG3) -> Hypergraph:
    n = rng.randint(0, max_vertices)
    edges = []
    if n:
        for _ in range(rng.randint(0, max_vertices)):
            label = rng.choice(sorted(sig.generators))
            arity, coarity = sig.arity(label)
            edges.append((label,
                          [rng.randrange(n) for _ in range(arity)],
                          [rng.randrange(n) for _ in range(coarity)]))
    return Hypergraph.build(n, edges)


class TermBuilder:
    """Random well-typed terms; composition interfaces are padded to fit."""

    def __init__(self, rng: random.Random, sig: Signature = SIG3,
                 allow_comonoid: bool = True, allow_trace: bool = True):
        self.rng = rng
        self.sig = sig
        self.names = sorted(sig.generators)
        self.allow_comonoid = allow_comonoid
        self.allow_trace = allow_trace

    def leaf(self) -> Term:
        options = ["gen", "id", "swap"]
        if self.allow_comonoid:
            options += ["copy", "discard"]
        kind = self.rng.choice(options)
        if kind == "gen":
            return Generator(self.rng.choice(self.names))
        if kind == "id":
            return Identity(self.rng.randint(0, 2))
        if kind == "swap":
            return Symmetry(self.rng.randint(0, 2), self.rng.randint(0, 2))
        if kind == "copy":
            return Copy()
        return Discard()

    def term(self, depth: int) -> TypedTerm:
        return typecheck(self._term(depth), self.sig)

    def _term(self, depth: int) -> Term:
        if depth <= 0:
            return self.leaf()
        kind = self.rng.choice(
            ["leaf", "compose", "tensor"] + (["trace"] if self.allow_trace
                                             else []))
        if kind == "leaf":
            return self.leaf()
        if kind == "tensor":
            return Tensor(self._term(depth - 1), self._term(depth - 1))
        if kind == "compose":
            first = self._term(depth - 1)
            second = self._term(depth - 1)
            c = typecheck(first, self.sig).cod
            d = typecheck(second, self.sig).dom
            if c < d:
                first = Tensor(first, Identity(d - c))
            elif d < c:
                second = Tensor(second, Identity(c - d))
            return Compose(first, second)
        body = self._term(depth - 1)
        ty = typecheck(body, self.sig)
        width = self.rng.randint(0, min(ty.dom, ty.cod))
        return Trace(width, body)


def trace_via_cup_cap(x: int, c: InterfacedCospan) -> InterfacedCospan:
    """Canonical trace built from the compact closed structure; oracle for
    the direct quotient implementation."""
    m, n = c.dom - x, c.cod - x
    bent = compose(compose(
        tensor(cup(x), identity(m)),
        tensor(identity(x), c)),
        tensor(cap(x), identity(n)))
    return bent
