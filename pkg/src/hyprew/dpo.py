"""Double-pushout rewriting with interfaces on folded cospans.

A rule is a span L <- i+j -> R of folded cospans.  Matching a rule in a
host enumerates pushout complements by generate-and-check: candidates are
built by deleting the internal image, replacing each boundary vertex by a
partition of its interface points, and trying every attachment of retained
tentacles and host-interface points onto those blocks; each candidate is
kept only if recomputing the pushout reproduces the host with commuting
squares.  Traced and traced-comonoid validity then filter the complements.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import cospan as cs
from .cospan import (
    InterfacedCospan,
    is_partial_left_monogamous,
    is_partial_monogamous,
    isomorphic_cospans,
)
from .hypergraph import (
    Edge,
    Homomorphism,
    Hypergraph,
    HypergraphError,
    Signature,
    find_homomorphisms,
    isomorphic,
    pushout,
)
from .term import TypedTerm, fold, interpret, unfold


class DpoError(ValueError):
    """Gluing-condition violation or invalid rewrite input."""


@dataclass(frozen=True)
class RewriteRule:
    """A span of folded cospans sharing the interface i+j."""

    name: str
    lhs: InterfacedCospan
    rhs: InterfacedCospan
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.lhs.inputs or self.rhs.inputs:
            raise DpoError("rule legs must be folded (no inputs)")
        if self.lhs.cod != self.i + self.j or self.rhs.cod != self.i + self.j:
            raise DpoError("rule legs must share the interface i+j")

    @staticmethod
    def from_terms(name: str, lhs: TypedTerm, rhs: TypedTerm,
                   sig: Signature) -> RewriteRule:
        if (lhs.dom, lhs.cod) != (rhs.dom, rhs.cod):
            raise DpoError(
                f"rule sides disagree on type: {lhs.dom}->{lhs.cod} "
                f"vs {rhs.dom}->{rhs.cod}")
        return RewriteRule(name, fold(interpret(lhs, sig)),
                           fold(interpret(rhs, sig)), lhs.dom, lhs.cod)

    def valid_for(self, mode: str) -> bool:
        check = is_partial_monogamous if mode == "traced" \
            else is_partial_left_monogamous
        return (check(unfold(self.lhs, self.i))
                and check(unfold(self.rhs, self.i)))


@dataclass(frozen=True)
class Matching:
    """A homomorphism of a rule's lhs into a folded host.

    Construction checks the no-dangling and no-identification conditions;
    maps violating them are rejected outright.
    """

    rule: RewriteRule
    host: InterfacedCospan
    hom: Homomorphism

    def __post_init__(self) -> None:
        if not check_no_dangling(self.rule, self.host, self.hom):
            raise DpoError("no-dangling condition violated: not a matching")
        if not check_no_identification(self.rule, self.hom):
            raise DpoError("no-identification condition violated: "
                           "not a matching")


def check_no_dangling(rule: RewriteRule, host: InterfacedCospan,
                      hom: Homomorphism) -> bool:
    """Unmatched host hyperedges only touch unmatched or interface-image vertices."""
    image_v = set(hom.vmap.values())
    matched_e = set(hom.emap.values())
    interface_image = {hom.vmap[v] for v in rule.lhs.outputs}
    for idx, e in enumerate(host.graph.edges):
        if idx in matched_e:
            continue
        for v in e.sources + e.targets:
            if v in image_v and v not in interface_image:
                return False
    return True


def check_no_identification(rule: RewriteRule, hom: Homomorphism) -> bool:
    """Distinct lhs elements merged by the matching lie in the interface image."""
    interface_verts = set(rule.lhs.outputs)
    by_image: dict[int, list[int]] = {}
    for v, w in hom.vmap.items():
        by_image.setdefault(w, []).append(v)
    for vs in by_image.values():
        if len(vs) > 1 and any(v not in interface_verts for v in vs):
            return False
    seen_edges: dict[int, int] = {}
    for e, img in hom.emap.items():
        if img in seen_edges:
            return False  # edges are never in the discrete interface image
        seen_edges[img] = e
    return True


def find_matchings(rule: RewriteRule, host: InterfacedCospan) -> list[Matching]:
    """All matchings of the rule's lhs in a folded host, deterministic order."""
    out = []
    for hom in find_homomorphisms(rule.lhs.graph, host.graph):
        if check_no_dangling(rule, host, hom) \
                and check_no_identification(rule, hom):
            out.append(Matching(rule, host, hom))
    return out


@dataclass(frozen=True)
class Complement:
    """A verified pushout complement i+j -> C -> G for a matching."""

    matching: Matching
    graph: Hypergraph
    c: tuple[int, ...]  # attachment of the i+j rule interface
    d: tuple[int, ...]  # attachment of the m+n host interface
    m: int              # input width of the unfolded host

    @property
    def rule(self) -> RewriteRule:
        return self.matching.rule

    def c1(self) -> tuple[int, ...]:
        return self.c[:self.rule.i]

    def c2(self) -> tuple[int, ...]:
        return self.c[self.rule.i:]

    def d1(self) -> tuple[int, ...]:
        return self.d[:self.m]

    def d2(self) -> tuple[int, ...]:
        return self.d[self.m:]

    def rearranged(self) -> InterfacedCospan:
        """The context as a cospan j+m -> C <- i+n."""
        return InterfacedCospan(self.graph,
                                self.c2() + self.d1(),
                                self.c1() + self.d2())


def _set_partitions(items: list):
    """All set partitions, in a canonical (restricted-growth) order."""
    if not items:
        yield []
        return
    groups: list[list] = []

    def rec(i: int):
        if i == len(items):
            yield [tuple(g) for g in groups]
            return
        for g in groups:
            g.append(items[i])
            yield from rec(i + 1)
            g.pop()
        groups.append([items[i]])
        yield from rec(i + 1)
        groups.pop()

    yield from rec(0)


def _connected(preimages: list[int], blocks: list[tuple[int, ...]],
               point_vertex: dict[int, int]) -> bool:
    """Bipartite connectivity of preimage vertices against partition blocks."""
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(y)] = find(x)

    for b_idx, block in enumerate(blocks):
        for x in block:
            union(("v", point_vertex[x]), ("b", b_idx))
    roots = {find(("v", u)) for u in preimages} \
        | {find(("b", b)) for b in range(len(blocks))}
    return len(roots) <= 1


def _verify_complement(rule: RewriteRule, host: InterfacedCospan,
                       hom: Homomorphism, cgraph: Hypergraph,
                       c: tuple[int, ...], d: tuple[int, ...],
                       to_host_v: dict[int, int],
                       to_host_e: dict[int, int]) -> bool:
    """Recompute the pushout of L <- i+j -> C and check it is the host."""
    k = Hypergraph.discrete(rule.i + rule.j)
    a_hom = Homomorphism(k, rule.lhs.graph,
                         {x: rule.lhs.outputs[x] for x in range(rule.i + rule.j)},
                         {})
    c_hom = Homomorphism(k, cgraph, {x: c[x] for x in range(len(c))}, {})
    try:
        apex, in_l, in_c = pushout(a_hom, c_hom)
    except HypergraphError:
        return False

    u_v: dict[int, int] = {}
    for v in rule.lhs.graph.vertices:
        p = in_l.vmap[v]
        if u_v.setdefault(p, hom.vmap[v]) != hom.vmap[v]:
            return False
    for v in cgraph.vertices:
        p = in_c.vmap[v]
        if u_v.setdefault(p, to_host_v[v]) != to_host_v[v]:
            return False
    u_e: dict[int, int] = {}
    for i in range(len(rule.lhs.graph.edges)):
        p = in_l.emap[i]
        if u_e.setdefault(p, hom.emap[i]) != hom.emap[i]:
            return False
    for i in range(len(cgraph.edges)):
        p = in_c.emap[i]
        if u_e.setdefault(p, to_host_e[i]) != to_host_e[i]:
            return False

    mediating = Homomorphism(apex, host.graph, u_v, u_e)
    if not (mediating.is_valid() and mediating.is_bijective()):
        return False
    for p, v in enumerate(d):
        if u_v[in_c.vmap[v]] != host.outputs[p]:
            return False
    return True


def _complement_duplicate(a: Complement, b: Complement) -> bool:
    anchor: dict[int, int] = {}
    for v, w in zip(a.c + a.d, b.c + b.d):
        if anchor.setdefault(v, w) != w:
            return False
    return isomorphic(a.graph, b.graph, anchor) is not None


def pushout_complements(matching: Matching, m: int) -> list[Complement]:
    """Complete, duplicate-free list of pushout complements for a matching.

    ``m`` is the input width of the unfolded host, recorded for the
    boundary filters.  Generate-and-check: every candidate is verified by
    recomputing the pushout.
    """
    rule, host, hom = matching.rule, matching.host, matching.hom
    if not (check_no_dangling(rule, host, hom)
            and check_no_identification(rule, hom)):
        raise DpoError("gluing conditions violated: not a matching")

    lhs = rule.lhs.graph
    interface_verts = set(rule.lhs.outputs)
    internal = {hom.vmap[v] for v in lhs.vertices if v not in interface_verts}
    matched_v = {hom.vmap[v] for v in lhs.vertices}
    boundary = sorted(matched_v - internal)
    matched_e = set(hom.emap.values())

    if any(v in internal for v in host.outputs):
        return []

    retained_v = [v for v in host.graph.vertices if v not in matched_v]
    retained_e = [i for i in range(len(host.graph.edges)) if i not in matched_e]

    npoints = rule.i + rule.j
    points_of = {v: [x for x in range(npoints)
                     if hom.vmap[rule.lhs.outputs[x]] == v]
                 for v in boundary}
    preimages_of = {v: sorted({u for u in lhs.vertices if hom.vmap[u] == v})
                    for v in boundary}
    point_vertex = {x: rule.lhs.outputs[x] for x in range(npoints)}

    partition_choices = []
    for v in boundary:
        options = [part for part in _set_partitions(points_of[v])
                   if _connected(preimages_of[v], part, point_vertex)]
        if not options:
            return []
        partition_choices.append(options)

    fresh_base = max(host.graph.vertices, default=-1) + 1
    results: list[Complement] = []

    for combo in product(*partition_choices):
        block_ids: dict[tuple[int, int], int] = {}
        point_block: dict[int, int] = {}
        blocks_at: dict[int, list[int]] = {}
        next_id = fresh_base
        for v, part in zip(boundary, combo):
            ids = []
            for b_idx, block in enumerate(part):
                block_ids[(v, b_idx)] = next_id
                for x in block:
                    point_block[x] = next_id
                ids.append(next_id)
                next_id += 1
            blocks_at[v] = ids

        slots = []  # (kind, index, position) per boundary attachment choice
        for e_idx in retained_e:
            e = host.graph.edges[e_idx]
            for pos, v in enumerate(e.sources):
                if v in blocks_at:
                    slots.append((("s", e_idx, pos), blocks_at[v]))
            for pos, v in enumerate(e.targets):
                if v in blocks_at:
                    slots.append((("t", e_idx, pos), blocks_at[v]))
        for p, v in enumerate(host.outputs):
            if v in blocks_at:
                slots.append((("d", p, 0), blocks_at[v]))

        for assignment in product(*(choices for _, choices in slots)):
            chosen = {slot: blk for (slot, _), blk in zip(slots, assignment)}
            vertices = tuple(retained_v) + tuple(
                block_ids[(v, b)] for v in boundary
                for b in range(len(blocks_at[v])))
            edges = []
            for e_idx in retained_e:
                e = host.graph.edges[e_idx]
                edges.append(Edge(
                    e.label,
                    tuple(chosen.get(("s", e_idx, pos), v)
                          for pos, v in enumerate(e.sources)),
                    tuple(chosen.get(("t", e_idx, pos), v)
                          for pos, v in enumerate(e.targets))))
            cgraph = Hypergraph(vertices, tuple(edges))
            c = tuple(point_block[x] for x in range(npoints))
            d = tuple(chosen.get(("d", p, 0), v)
                      for p, v in enumerate(host.outputs))
            to_host_v = {v: v for v in retained_v}
            for bv in boundary:
                for blk in blocks_at[bv]:
                    to_host_v[blk] = bv
            to_host_e = {new: old for new, old in enumerate(retained_e)}
            if not _verify_complement(rule, host, hom, cgraph, c, d,
                                      to_host_v, to_host_e):
                continue
            comp = Complement(matching, cgraph, c, d, m)
            if not any(_complement_duplicate(comp, other) for other in results):
                results.append(comp)

    return results


def is_traced_boundary(comp: Complement) -> bool:
    """Both rule-interface legs injective and the context partial monogamous."""
    c1, c2 = comp.c1(), comp.c2()
    if len(set(c1)) != len(c1) or len(set(c2)) != len(c2):
        return False
    return is_partial_monogamous(comp.rearranged())


def is_traced_left_boundary(comp: Complement) -> bool:
    """The j-side leg injective and the context partial left-monogamous."""
    c2 = comp.c2()
    if len(set(c2)) != len(c2):
        return False
    return is_partial_left_monogamous(comp.rearranged())


def apply_complement(comp: Complement) -> InterfacedCospan:
    """Push the complement out against the rule's rhs and unfold."""
    rule = comp.rule
    k = Hypergraph.discrete(rule.i + rule.j)
    c_hom = Homomorphism(k, comp.graph,
                         {x: comp.c[x] for x in range(len(comp.c))}, {})
    b_hom = Homomorphism(k, rule.rhs.graph,
                         {x: rule.rhs.outputs[x] for x in range(len(comp.c))},
                         {})
    apex, in_c, _ = pushout(c_hom, b_hom)
    folded = InterfacedCospan(apex, (),
                              tuple(in_c.vmap[v] for v in comp.d))
    return unfold(folded, comp.m)


def decomposition_holds(host: InterfacedCospan, comp: Complement) -> bool:
    """Executable form of traced decomposition: the accepted context recomposes
    with the lhs (under a trace of width i) to a cospan isomorphic to the host."""
    rule = comp.rule
    lhs = unfold(rule.lhs, rule.i)
    recomposed = cs.trace(
        rule.i,
        cs.compose(cs.tensor(lhs, cs.identity(comp.m)), comp.rearranged()))
    return isomorphic_cospans(recomposed, host)


@dataclass(frozen=True)
class RewriteOutcome:
    cospan: InterfacedCospan
    match_index: int
    complement_index: int
    matching: Matching
    complement: Complement
    rule_name: str


MODES = ("traced", "traced_comonoid")


def _mode_filter(mode: str):
    if mode == "traced":
        return is_traced_boundary
    if mode == "traced_comonoid":
        return is_traced_left_boundary
    raise DpoError(f"unknown mode {mode!r}")


def _host_valid(host: InterfacedCospan, mode: str) -> bool:
    return is_partial_monogamous(host) if mode == "traced" \
        else is_partial_left_monogamous(host)


def rewrite_outcomes(host: InterfacedCospan, rule: RewriteRule, mode: str,
                     match_filter=None, check: bool = True,
                     validate: bool = True) -> list[RewriteOutcome]:
    """All accepted rewrites of the rule in the host, in deterministic order.

    With ``check`` set, every accepted complement is verified against the
    traced decomposition factorization and every result against the mode's
    validity class (closure); failures raise, they are never silently kept.
    """
    accept = _mode_filter(mode)
    if validate:
        if not _host_valid(host, mode):
            raise DpoError(f"host is not valid for mode {mode!r}")
        if not rule.valid_for(mode):
            raise DpoError(f"rule {rule.name!r} is not valid for mode {mode!r}")
    folded = fold(host)
    outcomes = []
    for mi, matching in enumerate(find_matchings(rule, folded)):
        if match_filter is not None and not match_filter(matching):
            continue
        for ci, comp in enumerate(pushout_complements(matching, host.dom)):
            if not accept(comp):
                continue
            result = apply_complement(comp)
            if check:
                if not decomposition_holds(host, comp):
                    raise DpoError(
                        f"decomposition check failed for rule {rule.name!r}")
                if not _host_valid(result, mode):
                    raise DpoError(
                        f"closure violated by rule {rule.name!r}")
            outcomes.append(RewriteOutcome(result, mi, ci, matching, comp,
                                           rule.name))
    return outcomes


def rewrite_step(host: InterfacedCospan, rule: RewriteRule, mode: str,
                 match_filter=None, check: bool = True
                 ) -> list[InterfacedCospan]:
    """Accepted rewrite results, deduplicated up to cospan isomorphism."""
    results: list[InterfacedCospan] = []
    for outcome in rewrite_outcomes(host, rule, mode,
                                    match_filter=match_filter, check=check):
        if not any(isomorphic_cospans(outcome.cospan, seen)
                   for seen in results):
            results.append(outcome.cospan)
    return results


@dataclass(frozen=True)
class LogEntry:
    step: int
    rule_name: str
    match_index: int
    complement_index: int

    def render(self) -> str:
        return (f"step {self.step}: rule {self.rule_name} "
                f"match {self.match_index} complement {self.complement_index}")


@dataclass(frozen=True)
class NormalizeResult:
    cospan: InterfacedCospan
    log: tuple[LogEntry, ...]
    status: str  # normal_form | stepped | budget_exhausted | stuck


def normalize(host: InterfacedCospan, rules: list[RewriteRule], mode: str,
              strategy: str = "exhaustive", max_steps: int = 100,
              match_filter=None, prefer=None, check: bool = True
              ) -> NormalizeResult:
    """Rewrite driver.

    ``first_match`` applies the first available rewrite once; ``exhaustive``
    keeps rewriting until no rule applies or the budget runs out.  When a
    ``prefer`` key is given, each exhaustive step takes the first accepted
    result whose key strictly decreases, reporting ``stuck`` if results
    exist but none decreases.  Without it, the first result not isomorphic
    to a previously seen cospan is taken.
    """
    if strategy not in ("first_match", "exhaustive"):
        raise DpoError(f"unknown strategy {strategy!r}")
    for rule in rules:
        if not rule.valid_for(mode):
            raise DpoError(f"rule {rule.name!r} is not valid for mode {mode!r}")
    current = host
    log: list[LogEntry] = []
    seen = [host]
    for step_no in range(max_steps):
        if not _host_valid(current, mode):
            raise DpoError(f"host is not valid for mode {mode!r}")
        chosen = None
        saw_outcome = False
        key_now = prefer(current) if prefer is not None else None
        for rule in rules:
            for o in rewrite_outcomes(current, rule, mode,
                                      match_filter=match_filter,
                                      check=False, validate=False):
                saw_outcome = True
                if strategy == "first_match":
                    chosen = o
                elif prefer is not None:
                    if prefer(o.cospan) < key_now:
                        chosen = o
                elif not any(isomorphic_cospans(o.cospan, s) for s in seen):
                    chosen = o
                if chosen is not None:
                    break
            if chosen is not None:
                break
        if chosen is None:
            if saw_outcome and prefer is not None:
                return NormalizeResult(current, tuple(log), "stuck")
            return NormalizeResult(current, tuple(log), "normal_form")
        if check:
            if not decomposition_holds(current, chosen.complement):
                raise DpoError(
                    f"decomposition check failed for rule {chosen.rule_name!r}")
            if not _host_valid(chosen.cospan, mode):
                raise DpoError(f"closure violated by rule {chosen.rule_name!r}")
        log.append(LogEntry(step_no, chosen.rule_name,
                            chosen.match_index, chosen.complement_index))
        current = chosen.cospan
        seen.append(current)
        if strategy == "first_match":
            return NormalizeResult(current, tuple(log), "stepped")
    return NormalizeResult(current, tuple(log), "budget_exhausted")
