import random

import pytest

from hyprew.cospan import (
    InterfacedCospan,
    copy,
    isomorphic_cospans,
    trace,
    identity,
)
from hyprew.extraction import ExtractionError, equal_modulo_axioms, extract
from hyprew.hypergraph import Hypergraph
from hyprew.parser import parse_term
from hyprew.term import Trace, Identity, interpret, uses_comonoid

from helpers import SIG3, TermBuilder


def test_round_trip_single_generator():
    c = interpret(parse_term("phi", SIG3), SIG3)
    t = extract(c, allow_comonoid=False, sig=SIG3)
    assert isomorphic_cospans(interpret(t, SIG3), c)


def test_extract_closed_loop_is_traced_identity():
    c = trace(1, identity(1))
    t = extract(c, allow_comonoid=False, sig=SIG3)
    assert t.term == Trace(1, Identity(1))
    assert isomorphic_cospans(interpret(t, SIG3), c)


def test_extract_fork_requires_comonoid():
    c = trace(1, copy(1))  # one vertex, output [v], not partial monogamous
    with pytest.raises(ExtractionError):
        extract(c, allow_comonoid=False)
    t = extract(c, allow_comonoid=True, sig=SIG3)
    assert isomorphic_cospans(interpret(t, SIG3), c)
    assert uses_comonoid(t.term)


def test_extract_shared_output_vertex():
    g = Hypergraph.discrete(1)
    c = InterfacedCospan(g, (0,), (0, 0))
    t = extract(c, allow_comonoid=True, sig=SIG3)
    assert isomorphic_cospans(interpret(t, SIG3), c)
    assert equal_modulo_axioms(t, parse_term("copy", SIG3), SIG3)
    # and with no input at all, the shared vertex is a traced fork
    bent = InterfacedCospan(g, (), (0, 0))
    t2 = extract(bent, allow_comonoid=True, sig=SIG3)
    assert equal_modulo_axioms(t2, parse_term("tr^1(copy) ; copy", SIG3), SIG3)


def test_extract_reports_offending_vertex():
    g = Hypergraph.build(3, [("phi", [0], [1]), ("phi", [0], [2])])
    c = InterfacedCospan(g, (), ())
    with pytest.raises(ExtractionError) as err:
        extract(c, allow_comonoid=False)
    assert "vertex 0" in str(err.value)


def test_round_trip_random_plain_terms():
    rng = random.Random(21)
    builder = TermBuilder(rng, allow_comonoid=False)
    for _ in range(60):
        t = builder.term(4)
        c = interpret(t, SIG3)
        back = extract(c, allow_comonoid=False, sig=SIG3)
        assert not uses_comonoid(back.term)
        assert equal_modulo_axioms(back, t, SIG3)


def test_round_trip_random_comonoid_terms():
    rng = random.Random(22)
    builder = TermBuilder(rng, allow_comonoid=True)
    for _ in range(60):
        t = builder.term(4)
        c = interpret(t, SIG3)
        back = extract(c, allow_comonoid=True, sig=SIG3)
        assert equal_modulo_axioms(back, t, SIG3)


def test_extract_total_on_interpreted_corpus():
    rng = random.Random(23)
    builder = TermBuilder(rng, allow_comonoid=True)
    for _ in range(80):
        c = interpret(builder.term(5), SIG3)
        extract(c, allow_comonoid=True, sig=SIG3)  # must not raise


def test_equal_modulo_axioms_yanking():
    lhs = parse_term("tr^1(swap:1,1)", SIG3)
    rhs = parse_term("id:1", SIG3)
    assert equal_modulo_axioms(lhs, rhs, SIG3)


def test_equal_modulo_axioms_cocommutativity():
    lhs = parse_term("copy ; swap:1,1", SIG3)
    rhs = parse_term("copy", SIG3)
    assert equal_modulo_axioms(lhs, rhs, SIG3)


def test_equal_modulo_axioms_distinct_generators():
    lhs = parse_term("theta", SIG3)
    rhs = parse_term("tr^1(swap:1,1)", SIG3)
    assert not equal_modulo_axioms(lhs, rhs, SIG3)


def test_equal_modulo_axioms_type_mismatch():
    with pytest.raises(ExtractionError):
        equal_modulo_axioms(parse_term("id:1", SIG3),
                            parse_term("id:2", SIG3), SIG3)
