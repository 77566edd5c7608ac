"""Acceptance suite: one test per criterion, each printing a PASS line.

Every tolerance here is exact (0 failures out of the stated sample size);
the sampling is seeded so runs are reproducible.
"""
import random

from hyprew import circuits as circ
from hyprew.cospan import (
    InterfacedCospan,
    compose,
    identity,
    is_partial_left_monogamous,
    is_partial_monogamous,
    isomorphic_cospans,
    tensor,
    trace,
)
from hyprew.dpo import (
    RewriteRule,
    decomposition_holds,
    find_matchings,
    is_traced_boundary,
    is_traced_left_boundary,
    normalize,
    pushout_complements,
    rewrite_outcomes,
    rewrite_step,
)
from hyprew.extraction import equal_modulo_axioms, extract
from hyprew.hypergraph import Homomorphism, Hypergraph, Signature, find_homomorphisms, pushout
from hyprew.parser import parse_term
from hyprew.term import (
    Compose,
    Copy,
    Discard,
    Identity,
    Symmetry,
    Tensor,
    Trace,
    TypedTerm,
    fold,
    interpret,
    typecheck,
    uses_comonoid,
)

from circuit_gen import random_circuit, random_stream
from helpers import SIG3, TermBuilder, random_hypergraph

SIGR = Signature({
    "f": (1, 1), "g": (1, 1), "h": (1, 1), "d": (1, 1),
    "c2": (2, 2), "e": (0, 1), "e2": (0, 1),
})


def interp3(t: TypedTerm) -> InterfacedCospan:
    return interpret(t, SIG3)


def test_criterion_1_full_completeness_round_trip():
    rng = random.Random(100)
    failures = 0
    for case in range(500):
        allow_comonoid = case % 2 == 0
        builder = TermBuilder(rng, allow_comonoid=allow_comonoid)
        t = builder.term(rng.randint(1, 6))
        c = interp3(t)
        back = extract(c, allow_comonoid=allow_comonoid, sig=SIG3)
        if not allow_comonoid:
            assert not uses_comonoid(back.term)
        if not equal_modulo_axioms(back, t, SIG3, allow_comonoid):
            failures += 1
    assert failures == 0
    print("criterion 1: PASS (500/500 round trips equal modulo axioms)")


def _pad_pair(a: TypedTerm, b: TypedTerm) -> tuple[TypedTerm, TypedTerm]:
    """Pad with parallel wires until a ; b composes."""
    if a.cod < b.dom:
        a = typecheck(Tensor(a.term, Identity(b.dom - a.cod)), SIG3)
    elif b.dom < a.cod:
        b = typecheck(Tensor(b.term, Identity(a.cod - b.dom)), SIG3)
    return a, b


def _iso_terms(lhs, rhs) -> bool:
    lhs = typecheck(lhs, SIG3) if not isinstance(lhs, TypedTerm) else lhs
    rhs = typecheck(rhs, SIG3) if not isinstance(rhs, TypedTerm) else rhs
    return isomorphic_cospans(interp3(lhs), interp3(rhs))


def test_criterion_2_axiom_suite():
    rng = random.Random(200)
    builder = TermBuilder(rng, allow_comonoid=True)
    failures = 0

    def check(lhs, rhs):
        nonlocal failures
        if not _iso_terms(lhs, rhs):
            failures += 1

    for _ in range(200):
        f = builder.term(2)
        g = builder.term(2)
        h = builder.term(2)
        m, n = rng.randint(0, 2), rng.randint(0, 2)
        p = rng.randint(0, 2)

        # category and monoidal axioms
        check(Compose(Identity(f.dom), f.term), f.term)
        check(Compose(f.term, Identity(f.cod)), f.term)
        a1, b1 = _pad_pair(f, g)
        b2, c2 = _pad_pair(typecheck(b1.term, SIG3), h)
        a2, _ = _pad_pair(a1, b2)
        check(Compose(Compose(a2.term, b2.term), c2.term),
              Compose(a2.term, Compose(b2.term, c2.term)))
        check(Tensor(Tensor(f.term, g.term), h.term),
              Tensor(f.term, Tensor(g.term, h.term)))
        check(Tensor(f.term, Identity(0)), f.term)
        check(Tensor(Identity(0), f.term), f.term)
        check(Tensor(Identity(m), Identity(n)), Identity(m + n))
        # interchange
        fa, ha = _pad_pair(f, g)
        gb, kb = _pad_pair(h, builder.term(2))
        check(Compose(Tensor(fa.term, gb.term), Tensor(ha.term, kb.term)),
              Tensor(Compose(fa.term, ha.term), Compose(gb.term, kb.term)))
        # symmetry: naturality, hexagon, units, self-inverse
        check(Compose(Tensor(f.term, g.term), Symmetry(f.cod, g.cod)),
              Compose(Symmetry(f.dom, g.dom), Tensor(g.term, f.term)))
        check(Symmetry(m, n + p),
              Compose(Tensor(Symmetry(m, n), Identity(p)),
                      Tensor(Identity(n), Symmetry(m, p))))
        check(Symmetry(0, n), Identity(n))
        check(Symmetry(m, 0), Identity(m))
        check(Compose(Symmetry(m, n), Symmetry(n, m)), Identity(m + n))

        # traced axioms
        x = rng.randint(0, min(f.dom, f.cod))
        fm, fn = f.dom - x, f.cod - x
        # tightening (left and right naturality)
        gg = builder.term(2)
        while gg.cod > fm:
            gg = builder.term(1)
        gfit = typecheck(Tensor(gg.term, Identity(fm - gg.cod)), SIG3) \
            if gg.cod < fm else gg
        hh = builder.term(2)
        while hh.dom > fn:
            hh = builder.term(1)
        hfit = typecheck(Tensor(hh.term, Identity(fn - hh.dom)), SIG3) \
            if hh.dom < fn else hh
        check(Trace(x, Compose(Compose(Tensor(Identity(x), gfit.term),
                                       f.term),
                               Tensor(Identity(x), hfit.term))),
              Compose(Compose(gfit.term, Trace(x, f.term)), hfit.term))
        # sliding
        w = builder.term(2)
        body = builder.term(2)
        pad = max(w.cod - body.dom, w.dom - body.cod, 0)
        slid = typecheck(Tensor(body.term, Identity(pad)), SIG3)
        ms, ns = slid.dom - w.cod, slid.cod - w.dom
        check(Trace(w.dom, Compose(Tensor(w.term, Identity(ms)), slid.term)),
              Trace(w.cod, Compose(slid.term, Tensor(w.term, Identity(ns)))))
        # vanishing
        check(Trace(0, f.term), f.term)
        if min(f.dom, f.cod) >= 2:
            check(Trace(2, f.term), Trace(1, Trace(1, f.term)))
        # superposing and yanking
        check(Tensor(Trace(x, f.term), g.term), Trace(x, Tensor(f.term,
                                                                g.term)))
        check(Trace(m, Symmetry(m, m)), Identity(m))

        # comonoid equations
        check(Compose(Copy(), Tensor(Discard(), Identity(1))), Identity(1))
        check(Compose(Copy(), Tensor(Identity(1), Discard())), Identity(1))
        check(Compose(Copy(), Tensor(Copy(), Identity(1))),
              Compose(Copy(), Tensor(Identity(1), Copy())))
        check(Compose(Copy(), Symmetry(1, 1)), Copy())

    # snake equations for the derived cup/cap
    from hyprew.cospan import cap, cup
    one = identity(1)
    if not isomorphic_cospans(
            compose(tensor(cup(1), one), tensor(one, cap(1))), one):
        failures += 1
    if not isomorphic_cospans(
            compose(tensor(one, cup(1)), tensor(cap(1), one)), one):
        failures += 1

    assert failures == 0
    print("criterion 2: PASS (axiom suite, 200 instances each, 0 failures)")


def test_criterion_3_validity_preservation():
    rng = random.Random(300)
    pm_builder = TermBuilder(rng, allow_comonoid=False)
    plm_builder = TermBuilder(rng, allow_comonoid=True)
    failures = 0
    for case in range(1000):
        comonoid = case % 2 == 1
        builder = plm_builder if comonoid else pm_builder
        valid = is_partial_left_monogamous if comonoid \
            else is_partial_monogamous
        a = interp3(builder.term(3))
        b = interp3(builder.term(3))
        assert valid(a) and valid(b)
        op = rng.choice(["compose", "tensor", "trace"])
        if op == "tensor":
            out = tensor(a, b)
        elif op == "compose":
            if a.cod < b.dom:
                a = tensor(a, identity(b.dom - a.cod))
            elif b.dom < a.cod:
                b = tensor(b, identity(a.cod - b.dom))
            out = compose(a, b)
        else:
            out = trace(rng.randint(0, min(a.dom, a.cod)), a)
        if not valid(out):
            failures += 1
    assert failures == 0
    print("criterion 3: PASS (1000 combinations preserve validity)")


def test_criterion_4_pushout_universal_property():
    rng = random.Random(400)
    checked = 0
    for _ in range(100):
        b = random_hypergraph(rng, max_vertices=3)
        c = random_hypergraph(rng, max_vertices=3)
        nk = rng.randint(0, 2) if b.vertices and c.vertices else 0
        k = Hypergraph.discrete(nk)
        f = Homomorphism(k, b, {v: rng.choice(b.vertices)
                                for v in k.vertices}, {})
        g = Homomorphism(k, c, {v: rng.choice(c.vertices)
                                for v in k.vertices}, {})
        p, in_b, in_c = pushout(f, g)
        # commuting cocones into the apex itself and into a strictly larger
        # graph must both factor through a unique mediating homomorphism
        bigger = Hypergraph(p.vertices + (len(p.vertices),), p.edges)
        for target in (p, bigger):
            cocones = []
            for hb in find_homomorphisms(b, target):
                for hc in find_homomorphisms(c, target):
                    if all(hb.vmap[f.vmap[v]] == hc.vmap[g.vmap[v]]
                           for v in k.vertices):
                        cocones.append((hb, hc))
            for hb, hc in cocones[:4]:
                mediating = [
                    u for u in find_homomorphisms(p, target)
                    if all(u.vmap[in_b.vmap[v]] == hb.vmap[v]
                           for v in b.vertices)
                    and all(u.vmap[in_c.vmap[v]] == hc.vmap[v]
                            for v in c.vertices)
                    and all(u.emap[in_b.emap[i]] == hb.emap[i]
                            for i in range(len(b.edges)))
                    and all(u.emap[in_c.emap[i]] == hc.emap[i]
                            for i in range(len(c.edges)))]
                assert len(mediating) == 1
        checked += 1
    assert checked == 100
    print("criterion 4: PASS (100 pushouts satisfy the universal property)")


def _rule(name, lhs, rhs):
    return RewriteRule.from_terms(name, parse_term(lhs, SIGR),
                                  parse_term(rhs, SIGR), SIGR)


def _interp_r(src):
    return interpret(parse_term(src, SIGR), SIGR)


def test_criterion_5_dpo_fixtures():
    # split loop
    rule = _rule("split-loop", "f ; g", "h")
    host = _interp_r("tr^1(g ; f)")
    results = rewrite_step(host, rule, "traced")
    assert len(results) == 1
    assert isomorphic_cospans(results[0], _interp_r("tr^1(h)"))

    # non-convex matching, valid with yanking
    rule = _rule("pairing", "f * g", "c2")
    host = _interp_r("f ; d ; g")
    results = rewrite_step(host, rule, "traced")
    assert len(results) == 1
    assert isomorphic_cospans(
        results[0], _interp_r("tr^1( swap:1,1 ; c2 ; (d * id:1) )"))

    # non-unique traced rewrites: exactly two accepted complements
    rule = _rule("relabel", "f", "h")
    host = _interp_r("tr^1(f ; f)")
    outcomes = rewrite_outcomes(host, rule, "traced")
    assert len(outcomes) == 2

    # non-unique comonoid rewrites: exactly two accepted complements
    rule = _rule("fork-left", "copy ; (f * id:1)", "copy ; (h * id:1)")
    host = _interp_r("copy ; (f * g)")
    outcomes = rewrite_outcomes(host, rule, "traced_comonoid")
    assert len(outcomes) == 2

    # the introductory rewrite that is Frobenius-only: a complement exists
    # but neither boundary filter accepts it
    rule = _rule("fork-law", "tr^1(copy)", "e2")
    host = fold(_interp_r("e"))
    matchings = find_matchings(rule, host)
    assert len(matchings) == 1
    comps = pushout_complements(matchings[0], 0)
    assert len(comps) >= 1
    assert not any(is_traced_boundary(c) for c in comps)
    assert not any(is_traced_left_boundary(c) for c in comps)

    # unfolding a registered loop matches the unfolded term
    sig = circ.circuit_signature()
    core = circ.parse_circuit("not ; reg:t")
    rule = circ.unfolding_rule(core, sig)
    host = interpret(circ.parse_circuit("tr^1( not ; reg:t ; copy )"), sig)
    results = rewrite_step(host, rule, "traced_comonoid")
    unfolded = circ.parse_circuit(
        "tr^1( (not ; reg:t) ; copy ; (copy * id:1)"
        " ; (id:1 * ((not ; reg:t) ; discard) * id:1) )")
    assert any(isomorphic_cospans(r, interpret(unfolded, sig))
               for r in results)
    print("criterion 5: PASS (all worked rewrite fixtures reproduced)")


def test_criterion_6_decomposition_oracle():
    # explicit re-verification for every accepted complement of the fixture
    # set; rewrite_step and the drivers also verify each executed step and
    # raise on failure, so the whole suite runs under this oracle
    cases = [
        (_rule("split-loop", "f ; g", "h"), _interp_r("tr^1(g ; f)"),
         "traced"),
        (_rule("relabel", "f", "h"), _interp_r("tr^1(f ; f)"), "traced"),
        (_rule("pairing", "f * g", "c2"), _interp_r("f ; d ; g"), "traced"),
        (_rule("fork-left", "copy ; (f * id:1)", "copy ; (h * id:1)"),
         _interp_r("copy ; (f * g)"), "traced_comonoid"),
    ]
    steps = 0
    for rule, host, mode in cases:
        for outcome in rewrite_outcomes(host, rule, mode):
            assert decomposition_holds(host, outcome.complement)
            steps += 1
    rng = random.Random(600)
    for _ in range(10):
        tt = random_circuit(rng, max_gates=5)
        mealy = circ.to_mealy_form(tt)
        mf = circ.parse_mealy(mealy)
        feed = circ.tensor_terms(
            *(circ.value_term(v) for v in mf.state),
            *(circ.value_term(rng.choice(circ.VALUES))
              for _ in range(mf.m)))
        now = typecheck(Compose(feed, mf.core.term), circ.circuit_signature())
        host = interpret(now, circ.circuit_signature())
        result = normalize(host, circ.local_rules(), mode="traced_comonoid",
                           max_steps=500,
                           match_filter=circ.fork_match_filter,
                           prefer=circ.reduction_progress_key)
        steps += len(result.log)
    assert steps > 0
    print(f"criterion 6: PASS (decomposition verified on every step;"
          f" {steps} steps checked here)")


def test_criterion_7_adhesive_uniqueness():
    rng = random.Random(700)
    builder = TermBuilder(rng, SIGR, allow_comonoid=False)
    checked = 0
    while checked < 100:
        lhs = builder.term(2)
        context = builder.term(2)
        if lhs.cod != context.dom or lhs.dom == 0:
            continue
        rule = RewriteRule.from_terms("probe", lhs, lhs, SIGR)
        if len(set(rule.lhs.outputs)) != len(rule.lhs.outputs):
            continue  # interface legs must be mono
        host = compose(interpret(lhs, SIGR), interpret(context, SIGR))
        folded = fold(host)
        for matching in find_matchings(rule, folded):
            if not matching.hom.is_injective():
                continue
            comps = pushout_complements(matching, host.dom)
            assert len(comps) == 1
            checked += 1
            break
    print("criterion 7: PASS (100 mono rules/matchings, unique complements)")


def test_criterion_8_circuits_differential():
    rng = random.Random(800)
    mismatches = 0
    for _ in range(200):
        tt = random_circuit(rng)
        stream = random_stream(rng, tt.dom)
        if circ.run_pipeline(tt, stream) != circ.oracle_simulate(tt, stream):
            mismatches += 1
    assert mismatches == 0

    latch = circ.parse_circuit(
        "tr^2( ((delay;delay) * delay * id:2)"
        " ; swap:2,2 ; (id:1 * swap:2,1)"
        " ; ((or;not) * (or;not))"
        " ; (copy * copy) ; (id:1 * swap:1,1 * id:1) )")
    T, F = circ.Value.TRUE, circ.Value.FALSE
    stream = [[T, F]] * 3 + [[F, F]] * 4
    pipe = circ.run_pipeline(latch, stream)
    assert pipe == circ.oracle_simulate(latch, stream)
    held = [out[1] for out in pipe]
    assert held[2:] == [T] * 5  # output persists after the set pulse ends
    print("criterion 8: PASS (200 circuits agree with the oracle;"
          " latch holds state)")


def test_criterion_9_gate_table_contract():
    V = circ.VALUES
    violations = 0
    for table, boolean in ((circ.AND_TABLE, lambda a, b: a and b),
                           (circ.OR_TABLE, lambda a, b: a or b)):
        for a in V:
            for a2 in V:
                if not circ.leq(a, a2):
                    continue
                for b in V:
                    if not circ.leq(table[(a, b)], table[(a2, b)]):
                        violations += 1
                    if not circ.leq(table[(b, a)], table[(b, a2)]):
                        violations += 1
        for a, x in ((circ.Value.TRUE, True), (circ.Value.FALSE, False)):
            for b, y in ((circ.Value.TRUE, True), (circ.Value.FALSE, False)):
                expected = circ.Value.TRUE if boolean(x, y) \
                    else circ.Value.FALSE
                if table[(a, b)] != expected:
                    violations += 1
    for a in V:
        for a2 in V:
            if circ.leq(a, a2) and not circ.leq(circ.NOT_TABLE[a],
                                                circ.NOT_TABLE[a2]):
                violations += 1
    if circ.NOT_TABLE[circ.Value.TRUE] != circ.Value.FALSE:
        violations += 1
    if circ.NOT_TABLE[circ.Value.FALSE] != circ.Value.TRUE:
        violations += 1
    assert violations == 0
    print("criterion 9: PASS (gate tables monotone and Boolean on {t,f})")
