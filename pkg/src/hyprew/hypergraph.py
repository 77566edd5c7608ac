"""Labelled directed hypergraphs with ordered tentacles.

Vertices carry integer ids; hyperedge ids are their positions in the edge
tuple.  Every enumeration order used by the operations below derives from
id order, which keeps all downstream operations deterministic.  Values are
immutable after construction and safe to share between threads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product


class HypergraphError(ValueError):
    """Malformed graph, map or colimit input."""


@dataclass(frozen=True)
class Signature:
    """Generator names with their (arity, coarity) pairs."""

    generators: dict[str, tuple[int, int]]

    def __post_init__(self) -> None:
        for name, (arity, coarity) in self.generators.items():
            if arity < 0 or coarity < 0:
                raise HypergraphError(f"negative arity for generator {name!r}")

    def arity(self, name: str) -> tuple[int, int]:
        try:
            return self.generators[name]
        except KeyError:
            raise HypergraphError(f"unknown generator {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.generators


@dataclass(frozen=True)
class Edge:
    """A hyperedge: a label plus ordered source and target vertex ids."""

    label: str
    sources: tuple[int, ...]
    targets: tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise HypergraphError("duplicate vertex ids")
        for idx, e in enumerate(self.edges):
            for v in e.sources + e.targets:
                if v not in seen:
                    raise HypergraphError(
                        f"edge {idx} ({e.label!r}) references missing vertex {v}")

    @staticmethod
    def build(n_vertices: int,
              edges: list[tuple[str, list[int], list[int]]] = ()) -> Hypergraph:
        """Graph on vertices 0..n-1 with edges given as (label, sources, targets)."""
        return Hypergraph(
            tuple(range(n_vertices)),
            tuple(Edge(label, tuple(s), tuple(t)) for label, s, t in edges))

    @staticmethod
    def discrete(n: int) -> Hypergraph:
        return Hypergraph(tuple(range(n)), ())

    @property
    def is_discrete(self) -> bool:
        return not self.edges

    def has_vertex(self, v: int) -> bool:
        return v in set(self.vertices)

    def degrees(self) -> dict[int, tuple[int, int]]:
        """Per-vertex (in, out): in counts target tentacles, out counts source tentacles."""
        degs = {v: [0, 0] for v in self.vertices}
        for e in self.edges:
            for v in e.targets:
                degs[v][0] += 1
            for v in e.sources:
                degs[v][1] += 1
        return {v: (i, o) for v, (i, o) in degs.items()}

    def degree(self, v: int) -> tuple[int, int]:
        if v not in set(self.vertices):
            raise HypergraphError(f"unknown vertex id {v}")
        return self.degrees()[v]

    def conforms_to(self, sig: Signature) -> bool:
        return all(
            sig.arity(e.label) == (len(e.sources), len(e.targets))
            for e in self.edges)

    def renumbered(self) -> tuple[Hypergraph, "Homomorphism"]:
        """Isomorphic copy on vertices 0..n-1, in stored vertex order."""
        vmap = {v: i for i, v in enumerate(self.vertices)}
        g = Hypergraph(
            tuple(range(len(self.vertices))),
            tuple(Edge(e.label,
                       tuple(vmap[v] for v in e.sources),
                       tuple(vmap[v] for v in e.targets))
                  for e in self.edges))
        return g, Homomorphism(self, g, vmap, {i: i for i in range(len(self.edges))})

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"label": e.label,
                 "sources": list(e.sources),
                 "targets": list(e.targets)}
                for e in self.edges],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> Hypergraph:
        _expect_keys(doc, {"vertices", "edges"})
        vertices = doc["vertices"]
        if not isinstance(vertices, list) or any(
                not isinstance(v, int) or v < 0 for v in vertices):
            raise HypergraphError("vertices must be a list of non-negative integers")
        edges = []
        for entry in doc["edges"]:
            _expect_keys(entry, {"label", "sources", "targets"})
            edges.append(Edge(str(entry["label"]),
                              tuple(entry["sources"]), tuple(entry["targets"])))
        return Hypergraph(tuple(vertices), tuple(edges))


def _expect_keys(doc: dict, keys: set[str]) -> None:
    if not isinstance(doc, dict):
        raise HypergraphError("expected a JSON object")
    missing = keys - doc.keys()
    unknown = doc.keys() - keys
    if missing:
        raise HypergraphError(f"missing fields: {sorted(missing)}")
    if unknown:
        raise HypergraphError(f"unknown fields: {sorted(unknown)}")


@dataclass(frozen=True)
class Homomorphism:
    """Label- and tentacle-preserving map between hypergraphs.

    ``emap`` is keyed by edge position.  Need not be injective.
    """

    dom: Hypergraph
    cod: Hypergraph
    vmap: dict[int, int]
    emap: dict[int, int]

    def is_valid(self) -> bool:
        cod_vs = set(self.cod.vertices)
        if set(self.vmap) != set(self.dom.vertices):
            return False
        if any(w not in cod_vs for w in self.vmap.values()):
            return False
        if set(self.emap) != set(range(len(self.dom.edges))):
            return False
        for i, e in enumerate(self.dom.edges):
            j = self.emap[i]
            if not 0 <= j < len(self.cod.edges):
                return False
            img = self.cod.edges[j]
            if img.label != e.label:
                return False
            if tuple(self.vmap[v] for v in e.sources) != img.sources:
                return False
            if tuple(self.vmap[v] for v in e.targets) != img.targets:
                return False
        return True

    def is_injective(self) -> bool:
        return (len(set(self.vmap.values())) == len(self.vmap)
                and len(set(self.emap.values())) == len(self.emap))

    def is_bijective(self) -> bool:
        return (self.is_injective()
                and len(self.vmap) == len(self.cod.vertices)
                and len(self.emap) == len(self.cod.edges))

    def then(self, other: Homomorphism) -> Homomorphism:
        if self.cod is not other.dom and self.cod != other.dom:
            raise HypergraphError("composition mismatch")
        return Homomorphism(
            self.dom, other.cod,
            {v: other.vmap[w] for v, w in self.vmap.items()},
            {i: other.emap[j] for i, j in self.emap.items()})

    @staticmethod
    def identity(g: Hypergraph) -> Homomorphism:
        return Homomorphism(g, g, {v: v for v in g.vertices},
                            {i: i for i in range(len(g.edges))})


def find_homomorphisms(pattern: Hypergraph, host: Hypergraph,
                       vmap: dict[int, int] | None = None,
                       emap: dict[int, int] | None = None) -> list[Homomorphism]:
    """All homomorphisms pattern -> host extending the given partial assignment.

    Results are in a fixed order: backtracking over pattern edges in id order
    with host candidates in id order, then over unassigned pattern vertices in
    id order with host vertices in id order.  Maps need not be injective.
    """
    anchor_v = dict(vmap or {})
    anchor_e = dict(emap or {})
    _check_anchor(pattern, host, anchor_v, anchor_e)

    by_label: dict[str, list[int]] = {}
    for j, e in enumerate(host.edges):
        by_label.setdefault(e.label, []).append(j)

    results: list[Homomorphism] = []

    def try_edge(i: int, j: int, vm: dict[int, int]) -> dict[int, int] | None:
        e, img = pattern.edges[i], host.edges[j]
        if e.label != img.label or len(e.sources) != len(img.sources) \
                or len(e.targets) != len(img.targets):
            return None
        out = dict(vm)
        for v, w in zip(e.sources + e.targets, img.sources + img.targets):
            if out.setdefault(v, w) != w:
                return None
        return out

    def assign_edges(i: int, vm: dict[int, int], em: dict[int, int]) -> None:
        if i == len(pattern.edges):
            assign_vertices(vm, em)
            return
        if i in anchor_e:
            vm2 = try_edge(i, anchor_e[i], vm)
            if vm2 is not None:
                assign_edges(i + 1, vm2, em)
            return
        for j in by_label.get(pattern.edges[i].label, ()):
            vm2 = try_edge(i, j, vm)
            if vm2 is not None:
                assign_edges(i + 1, vm2, {**em, i: j})

    def assign_vertices(vm: dict[int, int], em: dict[int, int]) -> None:
        free = [v for v in pattern.vertices if v not in vm]
        for choice in product(host.vertices, repeat=len(free)):
            out = dict(vm)
            out.update(zip(free, choice))
            results.append(Homomorphism(pattern, host, out, em))

    assign_edges(0, anchor_v, anchor_e)
    return results


def _check_anchor(pattern: Hypergraph, host: Hypergraph,
                  vmap: dict[int, int], emap: dict[int, int]) -> None:
    pat_vs, host_vs = set(pattern.vertices), set(host.vertices)
    for v, w in vmap.items():
        if v not in pat_vs or w not in host_vs:
            raise HypergraphError(f"anchor maps unknown vertex {v} -> {w}")
    for i, j in emap.items():
        if not 0 <= i < len(pattern.edges) or not 0 <= j < len(host.edges):
            raise HypergraphError(f"anchor maps unknown edge {i} -> {j}")
        if pattern.edges[i].label != host.edges[j].label:
            raise HypergraphError("anchor does not preserve labels")


def certificate(g: Hypergraph) -> tuple:
    """Cheap isomorphism invariant: degree and edge-profile multisets."""
    degs = g.degrees()
    return (
        len(g.vertices),
        tuple(sorted(degs.values())),
        tuple(sorted(
            (e.label,
             tuple(degs[v] for v in e.sources),
             tuple(degs[v] for v in e.targets))
            for e in g.edges)),
    )


def isomorphic(a: Hypergraph, b: Hypergraph,
               vmap: dict[int, int] | None = None) -> Homomorphism | None:
    """A bijective homomorphism a -> b extending ``vmap``, or None.

    Deterministic: returns the first isomorphism in backtracking order.
    Candidates are pruned by label and degree.
    """
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return None
    if certificate(a) != certificate(b):
        return None
    deg_a, deg_b = a.degrees(), b.degrees()

    anchor = dict(vmap or {})
    for v, w in anchor.items():
        if deg_a[v] != deg_b[w]:
            return None
    if len(set(anchor.values())) != len(anchor):
        return None

    def profile(e: Edge, degs: dict) -> tuple:
        return (e.label, tuple(degs[v] for v in e.sources),
                tuple(degs[v] for v in e.targets))

    candidates: dict[tuple, list[int]] = {}
    for j, e in enumerate(b.edges):
        candidates.setdefault(profile(e, deg_b), []).append(j)
    # match edges with the fewest candidates first
    order = sorted(range(len(a.edges)),
                   key=lambda i: (len(candidates.get(
                       profile(a.edges[i], deg_a), ())), i))

    def extend_edge(k: int, vm: dict[int, int], used_v: set[int],
                    em: dict[int, int], used_e: set[int]) -> Homomorphism | None:
        if k == len(order):
            return extend_vertex(vm, used_v, em)
        i = order[k]
        e = a.edges[i]
        for j in candidates.get(profile(e, deg_a), ()):
            if j in used_e:
                continue
            img = b.edges[j]
            vm2, used2, ok = dict(vm), set(used_v), True
            for v, w in zip(e.sources + e.targets, img.sources + img.targets):
                if v in vm2:
                    if vm2[v] != w:
                        ok = False
                        break
                elif w in used2 or deg_a[v] != deg_b[w]:
                    ok = False
                    break
                else:
                    vm2[v] = w
                    used2.add(w)
            if ok:
                found = extend_edge(k + 1, vm2, used2, {**em, i: j},
                                    used_e | {j})
                if found is not None:
                    return found
        return None

    def extend_vertex(vm: dict[int, int], used_v: set[int],
                      em: dict[int, int]) -> Homomorphism | None:
        free = [v for v in a.vertices if v not in vm]
        if not free:
            return Homomorphism(a, b, vm, em)
        v = free[0]
        for w in b.vertices:
            if w not in used_v and deg_a[v] == deg_b[w]:
                found = extend_vertex({**vm, v: w}, used_v | {w}, em)
                if found is not None:
                    return found
        return None

    return extend_edge(0, anchor, set(anchor.values()), {}, set())


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def pushout(f: Homomorphism, g: Homomorphism
            ) -> tuple[Hypergraph, Homomorphism, Homomorphism]:
    """Pushout of B <-f- K -g-> C by union-find quotient of the disjoint union.

    Returns (P, inB, inC) with P renumbered 0..n-1 deterministically (B's
    elements enumerated before C's).  Raises if merged edges disagree on
    labels, which cannot happen when K is discrete.
    """
    if f.dom != g.dom:
        raise HypergraphError("pushout legs must share their domain")
    B, C, K = f.cod, g.cod, f.dom

    uf_v, uf_e = _UnionFind(), _UnionFind()
    for v in B.vertices:
        uf_v.find(("b", v))
    for v in C.vertices:
        uf_v.find(("c", v))
    for i in range(len(B.edges)):
        uf_e.find(("b", i))
    for i in range(len(C.edges)):
        uf_e.find(("c", i))
    for k in K.vertices:
        uf_v.union(("b", f.vmap[k]), ("c", g.vmap[k]))
    for i in range(len(K.edges)):
        uf_e.union(("b", f.emap[i]), ("c", g.emap[i]))

    order_v = [("b", v) for v in B.vertices] + [("c", v) for v in C.vertices]
    class_of: dict = {}
    for tagged in order_v:
        root = uf_v.find(tagged)
        if root not in class_of:
            class_of[root] = len(class_of)
    vclass = lambda tagged: class_of[uf_v.find(tagged)]

    order_e = [("b", i) for i in range(len(B.edges))] \
        + [("c", i) for i in range(len(C.edges))]
    eclass_of: dict = {}
    rep_edge: dict[int, Edge] = {}
    eclass: dict = {}
    for tagged in order_e:
        root = uf_e.find(tagged)
        tag, i = tagged
        edge = (B if tag == "b" else C).edges[i]
        mapped = Edge(edge.label,
                      tuple(vclass((tag, v)) for v in edge.sources),
                      tuple(vclass((tag, v)) for v in edge.targets))
        if root not in eclass_of:
            eclass_of[root] = len(eclass_of)
            rep_edge[eclass_of[root]] = mapped
        elif rep_edge[eclass_of[root]] != mapped:
            raise HypergraphError(
                f"pushout merges incompatible edges ({mapped.label!r})")
        eclass[tagged] = eclass_of[root]

    P = Hypergraph(tuple(range(len(class_of))),
                   tuple(rep_edge[i] for i in range(len(eclass_of))))
    in_b = Homomorphism(B, P, {v: vclass(("b", v)) for v in B.vertices},
                        {i: eclass[("b", i)] for i in range(len(B.edges))})
    in_c = Homomorphism(C, P, {v: vclass(("c", v)) for v in C.vertices},
                        {i: eclass[("c", i)] for i in range(len(C.edges))})
    return P, in_b, in_c


def coproduct(a: Hypergraph, b: Hypergraph
              ) -> tuple[Hypergraph, Homomorphism, Homomorphism]:
    """Disjoint union with fresh ids 0..|Va|+|Vb|-1, a's elements first."""
    n = len(a.vertices)
    amap = {v: i for i, v in enumerate(a.vertices)}
    bmap = {v: n + i for i, v in enumerate(b.vertices)}
    edges = tuple(
        Edge(e.label, tuple(amap[v] for v in e.sources),
             tuple(amap[v] for v in e.targets)) for e in a.edges
    ) + tuple(
        Edge(e.label, tuple(bmap[v] for v in e.sources),
             tuple(bmap[v] for v in e.targets)) for e in b.edges
    )
    apex = Hypergraph(tuple(range(n + len(b.vertices))), edges)
    in_a = Homomorphism(a, apex, amap, {i: i for i in range(len(a.edges))})
    in_b = Homomorphism(b, apex, bmap,
                        {i: len(a.edges) + i for i in range(len(b.edges))})
    return apex, in_a, in_b


def quotient_vertices(g: Hypergraph, pairs: list[tuple[int, int]]
                      ) -> tuple[Hypergraph, dict[int, int]]:
    """Quotient g's vertices by the equivalence generated by ``pairs``.

    Edges are untouched except that tentacles follow the quotient map.
    Returns the renumbered quotient and the vertex map.
    """
    uf = _UnionFind()
    for v in g.vertices:
        uf.find(v)
    for x, y in pairs:
        uf.union(x, y)
    class_of: dict[int, int] = {}
    for v in g.vertices:
        root = uf.find(v)
        if root not in class_of:
            class_of[root] = len(class_of)
    vmap = {v: class_of[uf.find(v)] for v in g.vertices}
    q = Hypergraph(
        tuple(range(len(class_of))),
        tuple(Edge(e.label, tuple(vmap[v] for v in e.sources),
                   tuple(vmap[v] for v in e.targets)) for e in g.edges))
    return q, vmap


def hypergraph_to_json(g: Hypergraph) -> str:
    return json.dumps(g.to_json_dict(), indent=2, sort_keys=True)


def hypergraph_from_json(text: str) -> Hypergraph:
    return Hypergraph.from_json_dict(json.loads(text))
