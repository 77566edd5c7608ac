"""Sequential digital circuits as a rewriting case study.

Circuits are diagram terms over a fixed gate-level signature.  Wires carry
values from the four-point lattice {bot, t, f, top}: ``bot`` is a
disconnected wire, ``top`` a short circuit.  The gate truth tables over
the full lattice are shipped as data below; the binding contract is that
they are monotone and restrict to the classical tables on {t, f}.

Execution works by rewriting: a circuit is first assembled into Mealy
form (a combinational core traced through one register bank), and then
each tick closes the core over the current state and inputs and reduces
it to values with the local value-propagation rules.  An independent
stream simulator over the term syntax serves as the oracle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .cospan import InterfacedCospan
from .dpo import Matching, NormalizeResult, RewriteRule, normalize
from .extraction import extract
from .hypergraph import Edge, Hypergraph, Signature
from .parser import ParseError, parse_term
from .term import (
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
    compose_terms,
    discard_many,
    fork_block,
    interpret,
    tensor_terms,
    typecheck,
)


class CircuitError(ValueError):
    """Term outside the circuit signature, or a stuck reduction."""


class Value(enum.Enum):
    BOT = "bot"
    TRUE = "t"
    FALSE = "f"
    TOP = "top"

    def __repr__(self) -> str:
        return self.value


VALUES = (Value.BOT, Value.TRUE, Value.FALSE, Value.TOP)


def leq(a: Value, b: Value) -> bool:
    """Information order: bot below everything, top above everything."""
    return a == b or a == Value.BOT or b == Value.TOP


def join(a: Value, b: Value) -> Value:
    if leq(a, b):
        return b
    if leq(b, a):
        return a
    return Value.TOP


def meet(a: Value, b: Value) -> Value:
    if leq(a, b):
        return a
    if leq(b, a):
        return b
    return Value.BOT


_B, _T, _F, _X = Value.BOT, Value.TRUE, Value.FALSE, Value.TOP

# AND is strict in bot (no evidence in, no evidence out); OR propagates a
# definite t past a missing input.  Both restrict to Boolean on {t, f} and
# are monotone in the information order; the tests check both properties
# exhaustively.
AND_TABLE = {
    (_B, _B): _B, (_B, _T): _B, (_B, _F): _B, (_B, _X): _B,
    (_T, _B): _B, (_T, _T): _T, (_T, _F): _F, (_T, _X): _X,
    (_F, _B): _B, (_F, _T): _F, (_F, _F): _F, (_F, _X): _F,
    (_X, _B): _B, (_X, _T): _X, (_X, _F): _F, (_X, _X): _X,
}

OR_TABLE = {
    (_B, _B): _B, (_B, _T): _T, (_B, _F): _B, (_B, _X): _T,
    (_T, _B): _T, (_T, _T): _T, (_T, _F): _T, (_T, _X): _T,
    (_F, _B): _B, (_F, _T): _T, (_F, _F): _F, (_F, _X): _X,
    (_X, _B): _T, (_X, _T): _T, (_X, _F): _X, (_X, _X): _X,
}

NOT_TABLE = {_B: _B, _T: _F, _F: _T, _X: _X}

GATES = {"and": 2, "or": 2, "not": 1}


def gate_output(name: str, args: tuple[Value, ...]) -> Value:
    if name == "and":
        return AND_TABLE[args]
    if name == "or":
        return OR_TABLE[args]
    if name == "not":
        return NOT_TABLE[args[0]]
    raise CircuitError(f"not a logic gate: {name!r}")


def circuit_signature() -> Signature:
    """Gate-level signature; forking and stubbing use the ambient comonoid."""
    return Signature({
        "and": (2, 1),
        "or": (2, 1),
        "not": (1, 1),
        "init": (0, 1),
        "merge": (2, 1),
        "delay": (1, 1),
        "val_t": (0, 1),
        "val_f": (0, 1),
        "val_top": (0, 1),
    })


_VALUE_LABEL = {
    Value.BOT: "init",
    Value.TRUE: "val_t",
    Value.FALSE: "val_f",
    Value.TOP: "val_top",
}
_LABEL_VALUE = {label: v for v, label in _VALUE_LABEL.items()}


def value_term(v: Value) -> Term:
    """The generator emitting v; bot is the always-disconnected init."""
    return Generator(_VALUE_LABEL[v])


def reg_term(v: Value) -> Term:
    """Register with initial value v: emits v, then the previous input."""
    return Compose(Tensor(value_term(v), Generator("delay")),
                   Generator("merge"))


# -- local value-propagation rules -------------------------------------------

def local_rules() -> list[RewriteRule]:
    """Fork, Join, Stub and one Prim instance per gate and value tuple."""
    sig = circuit_signature()
    rules = []

    def rule(name: str, lhs: Term, rhs: Term) -> None:
        rules.append(RewriteRule.from_terms(
            name, typecheck(lhs, sig), typecheck(rhs, sig), sig))

    for gate, arity in GATES.items():
        tuples = [(v,) for v in VALUES] if arity == 1 else \
            [(v, w) for v in VALUES for w in VALUES]
        for args in tuples:
            lhs = Compose(tensor_terms(*(value_term(v) for v in args)),
                          Generator(gate))
            rhs = value_term(gate_output(gate, args))
            rule(f"prim:{gate}:{','.join(v.value for v in args)}", lhs, rhs)
    for v in VALUES:
        for w in VALUES:
            rule(f"join:{v.value},{w.value}",
                 Compose(Tensor(value_term(v), value_term(w)),
                         Generator("merge")),
                 value_term(join(v, w)))
    for v in VALUES:
        rule(f"stub:{v.value}", Compose(value_term(v), Discard()), Identity(0))
    for v in VALUES:
        rule(f"fork:{v.value}", Compose(value_term(v), Copy()),
             Tensor(value_term(v), value_term(v)))
    return rules


def cartesian_rules(sig: Signature | None = None) -> list[RewriteRule]:
    """Copy- and discard-naturality per generator, with inverse rules."""
    from .term import copy_bundle

    sig = sig or circuit_signature()
    rules = []
    for name, (m, n) in sig.generators.items():
        g = Generator(name)
        copy_lhs = typecheck(Compose(g, copy_bundle(n)), sig)
        copy_rhs = typecheck(Compose(copy_bundle(m), Tensor(g, g)), sig)
        rules.append(RewriteRule.from_terms(f"copy-nat:{name}",
                                            copy_lhs, copy_rhs, sig))
        rules.append(RewriteRule.from_terms(f"copy-nat-inv:{name}",
                                            copy_rhs, copy_lhs, sig))
        disc_lhs = typecheck(Compose(g, discard_many(n)), sig)
        disc_rhs = typecheck(discard_many(m), sig)
        rules.append(RewriteRule.from_terms(f"discard-nat:{name}",
                                            disc_lhs, disc_rhs, sig))
        rules.append(RewriteRule.from_terms(f"discard-nat-inv:{name}",
                                            disc_rhs, disc_lhs, sig))
    return rules


def unfolding_rule(core: TypedTerm, sig: Signature,
                   name: str = "unfolding") -> RewriteRule:
    """Loop-unfolding instance for a concrete 1->1 core: the core may be
    replaced by two forked copies with one output stubbed off."""
    if (core.dom, core.cod) != (1, 1):
        raise CircuitError("unfolding instance needs a 1->1 core")
    rhs = compose_terms(Copy(), Tensor(core.term, core.term),
                        Tensor(Identity(1), Discard()))
    return RewriteRule.from_terms(name, core, typecheck(rhs, sig), sig)


# -- reduction strategy helpers ----------------------------------------------

def _consumer_counts(c: InterfacedCospan) -> dict[int, int]:
    counts = {v: 0 for v in c.graph.vertices}
    for e in c.graph.edges:
        for v in e.sources:
            counts[v] += 1
    for v in c.inputs + c.outputs:
        counts[v] += 1
    return counts


def reduction_progress_key(c: InterfacedCospan) -> tuple[int, int]:
    """Strictly decreasing along Fork/Join/Stub/Prim value propagation."""
    excess = sum(max(0, k - 1) for k in _consumer_counts(c).values())
    return excess, len(c.graph.edges)


def fork_match_filter(matching: Matching) -> bool:
    """Only fork a value into a vertex that genuinely fans out."""
    if not matching.rule.name.startswith("fork:"):
        return True
    fork_vertex = matching.hom.vmap[matching.rule.lhs.outputs[0]]
    return _consumer_counts(matching.host)[fork_vertex] >= 2


# -- Mealy form ---------------------------------------------------------------

@dataclass(frozen=True)
class MealyForm:
    state: tuple[Value, ...]
    core: TypedTerm  # combinational, s+m -> s+n
    m: int
    n: int


def _find_cycle_vertex(g: Hypergraph) -> int | None:
    """A vertex on some directed cycle of the wire-flow graph, or None.

    The choice is deterministic: depth-first search from vertices in id
    order, returning the vertex a back edge lands on.
    """
    succ: dict[int, list[int]] = {v: [] for v in g.vertices}
    for e in g.edges:
        for s in e.sources:
            for t in e.targets:
                succ[s].append(t)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in g.vertices}

    def dfs(v: int) -> int | None:
        colour[v] = GREY
        for w in sorted(succ[v]):
            if colour[w] == GREY:
                return w
            if colour[w] == WHITE:
                found = dfs(w)
                if found is not None:
                    return found
        colour[v] = BLACK
        return None

    for v in sorted(g.vertices):
        if colour[v] == WHITE:
            found = dfs(v)
            if found is not None:
                return found
    return None


def _if_unroll(core: TypedTerm, x: int, sig: Signature) -> TypedTerm:
    """Eliminate non-delay-guarded feedback of width x by Kleene iteration.

    The feedback occupies the first x wires of the core.  The body is
    applied 2x+1 times starting from bot inputs; on the height-2x lattice
    of x-tuples this reaches the least fixpoint.
    """
    m = core.dom - x
    n = core.cod - x
    f = core.term
    f_state = compose_terms(f, tensor_terms(Identity(x), discard_many(n)))
    f_out = compose_terms(f, tensor_terms(discard_many(x), Identity(n)))
    rounds = 2 * x + 1
    bots = tensor_terms(*([Generator("init")] * x))
    parts = [fork_block(m, rounds),
             tensor_terms(bots, Identity(m * rounds))]
    for t in range(1, rounds):
        parts.append(tensor_terms(f_state, Identity(m * (rounds - t))))
    parts.append(f_out)
    return typecheck(compose_terms(*parts), sig)


def to_mealy_form(tt: TypedTerm) -> TypedTerm:
    """Assemble a circuit into Tr^s(core ; (registers x id)) shape.

    Delays and value generators are pulled out into one register bank;
    any remaining combinational feedback is unrolled to its fixpoint.
    """
    sig = circuit_signature()
    tt = typecheck(tt.term, sig)  # rejects foreign generators
    c = interpret(tt, sig)
    g = c.graph

    regs: list[tuple[Value, int, int]] = []  # (initial, core out, core in)
    kept: list[Edge] = []
    vertices = list(g.vertices)
    next_id = max(g.vertices, default=-1) + 1
    for e in g.edges:
        if e.label == "delay":
            regs.append((Value.BOT, e.sources[0], e.targets[0]))
        elif e.label in ("val_t", "val_f", "val_top"):
            u = next_id
            next_id += 1
            vertices.append(u)
            kept.append(Edge("init", (), (u,)))
            regs.append((_LABEL_VALUE[e.label], u, e.targets[0]))
        else:
            kept.append(e)

    core_inputs = tuple(r[2] for r in regs) + c.inputs
    core_outputs = tuple(r[1] for r in regs) + c.outputs
    in_deg = {v: 0 for v in vertices}
    for e in kept:
        for v in e.targets:
            in_deg[v] += 1
    for v in list(vertices):
        if in_deg[v] == 0 and v not in set(core_inputs):
            kept.append(Edge("init", (), (v,)))  # disconnected wire reads bot

    graph = Hypergraph(tuple(vertices), tuple(kept))
    cut_in: list[int] = []
    cut_out: list[int] = []
    while True:
        v = _find_cycle_vertex(graph)
        if v is None:
            break
        v2 = max(graph.vertices) + 1
        graph = Hypergraph(
            graph.vertices + (v2,),
            tuple(Edge(e.label,
                       tuple(v2 if s == v else s for s in e.sources),
                       e.targets)
                  for e in graph.edges))
        cut_in.append(v2)
        cut_out.append(v)

    core_cospan = InterfacedCospan(
        graph, tuple(cut_in) + core_inputs, tuple(cut_out) + core_outputs)
    core = extract(core_cospan, allow_comonoid=True, sig=sig)
    if cut_in:
        core = _if_unroll(core, len(cut_in), sig)

    s = len(regs)
    n = tt.cod
    bank = tensor_terms(*(reg_term(r[0]) for r in regs))
    mealy = Trace(s, Compose(core.term, Tensor(bank, Identity(n))))
    return typecheck(mealy, sig)


def parse_mealy(tt: TypedTerm) -> MealyForm:
    """Strictly match the Tr^s(core ; (registers x id)) shape."""
    sig = circuit_signature()
    term = tt.term
    if not isinstance(term, Trace):
        raise CircuitError("not in Mealy form: no top-level trace")
    s, body = term.width, term.body
    if not isinstance(body, Compose) or not isinstance(body.second, Tensor):
        raise CircuitError("not in Mealy form: missing register bank")
    core_term, tail = body.first, body.second
    if not isinstance(tail.bottom, Identity):
        raise CircuitError("not in Mealy form: register bank is not split off")

    def registers(t: Term) -> list[Value]:
        if t == Identity(0):
            return []
        if isinstance(t, Tensor):
            return registers(t.top) + registers(t.bottom)
        if (isinstance(t, Compose) and isinstance(t.first, Tensor)
                and t.second == Generator("merge")
                and t.first.bottom == Generator("delay")
                and isinstance(t.first.top, Generator)
                and t.first.top.name in _LABEL_VALUE):
            return [_LABEL_VALUE[t.first.top.name]]
        raise CircuitError("not in Mealy form: malformed register bank")

    values = registers(tail.top)
    if len(values) != s:
        raise CircuitError("not in Mealy form: register bank width mismatch")
    core = typecheck(core_term, sig)
    if _has_stateful(core_term):
        raise CircuitError("not in Mealy form: core is not combinational")
    if (core.dom, core.cod) != (s + tt.dom, s + tt.cod):
        raise CircuitError("not in Mealy form: core type mismatch")
    return MealyForm(tuple(values), core, tt.dom, tt.cod)


def _has_stateful(t: Term) -> bool:
    match t:
        case Generator(name):
            return name in ("delay", "val_t", "val_f", "val_top")
        case Compose(a, b) | Tensor(a, b):
            return _has_stateful(a) or _has_stateful(b)
        case Trace(_, body):
            return _has_stateful(body)
    return False


def _read_values(c: InterfacedCospan) -> list[Value]:
    feeders: dict[int, list[str]] = {v: [] for v in c.graph.vertices}
    for e in c.graph.edges:
        if e.label not in _LABEL_VALUE or e.sources:
            raise CircuitError(f"reduction stuck: leftover {e.label!r} edge")
        feeders[e.targets[0]].append(e.label)
    out = []
    for v in c.outputs:
        labels = feeders[v]
        if len(labels) != 1:
            raise CircuitError(f"reduction stuck: vertex {v} fed by {labels}")
        out.append(_LABEL_VALUE[labels[0]])
    return out


def step(tt: TypedTerm, inputs: list[Value]) -> tuple[list[Value], TypedTerm]:
    """One synchronous tick of a Mealy-form circuit.

    Closes the core over the current state and the input values, reduces
    the closed copy to values with the local rules, and reassembles the
    register bank around the next state.
    """
    sig = circuit_signature()
    mf = parse_mealy(tt)
    if len(inputs) != mf.m:
        raise CircuitError(f"expected {mf.m} inputs, got {len(inputs)}")
    feed = tensor_terms(*(value_term(v) for v in mf.state),
                        *(value_term(v) for v in inputs))
    now = typecheck(Compose(feed, mf.core.term), sig)
    host = interpret(now, sig)
    budget = 10 * (len(host.graph.edges) + len(host.graph.vertices)) + 50
    result: NormalizeResult = normalize(
        host, _LOCAL_RULES, mode="traced_comonoid", strategy="exhaustive",
        max_steps=budget, match_filter=fork_match_filter,
        prefer=reduction_progress_key)
    if result.status != "normal_form":
        raise CircuitError(f"reduction did not finish: {result.status}")
    values = _read_values(result.cospan)
    state, outputs = values[:len(mf.state)], values[len(mf.state):]
    bank = tensor_terms(*(reg_term(v) for v in state))
    next_term = Trace(len(state),
                      Compose(mf.core.term, Tensor(bank, Identity(mf.n))))
    return outputs, typecheck(next_term, sig)


_LOCAL_RULES = local_rules()


def run_pipeline(tt: TypedTerm, stream: list[list[Value]]) -> list[list[Value]]:
    """Mealy-assemble a circuit and drive it through the rewrite pipeline."""
    current = to_mealy_form(tt)
    outputs = []
    for inputs in stream:
        outs, current = step(current, inputs)
        outputs.append(outs)
    return outputs


# -- oracle: direct stream simulation over the term syntax --------------------

class CircuitOracle:
    """Unit-delay netlist simulator, independent of the rewrite pipeline.

    Delays are registers initialised to bot, value generators emit once
    then bot, merge joins, and combinational feedback is solved per tick
    by least-fixpoint iteration from bot.
    """

    def __init__(self, tt: TypedTerm):
        sig = circuit_signature()
        self.term = typecheck(tt.term, sig)
        self.types: dict[tuple[int, ...], tuple[int, int]] = {}
        self._index(self.term.term, ())
        self.delay_state: dict[tuple[int, ...], Value] = {}
        self.emitted: set[tuple[int, ...]] = set()

    def _index(self, t: Term, path: tuple[int, ...]) -> tuple[int, int]:
        sig = circuit_signature()
        match t:
            case Generator(name):
                ty = sig.arity(name)
            case Identity(w):
                ty = (w, w)
            case Symmetry(a, b):
                ty = (a + b, a + b)
            case Copy():
                ty = (1, 2)
            case Discard():
                ty = (1, 0)
            case Compose(a, b):
                ta = self._index(a, path + (0,))
                tb = self._index(b, path + (1,))
                ty = (ta[0], tb[1])
            case Tensor(a, b):
                ta = self._index(a, path + (0,))
                tb = self._index(b, path + (1,))
                ty = (ta[0] + tb[0], ta[1] + tb[1])
            case Trace(x, body):
                tb = self._index(body, path + (0,))
                ty = (tb[0] - x, tb[1] - x)
            case _:
                raise CircuitError(f"unknown node {t!r}")
        self.types[path] = ty
        return ty

    def tick(self, inputs: list[Value]) -> list[Value]:
        if len(inputs) != self.term.dom:
            raise CircuitError(
                f"expected {self.term.dom} inputs, got {len(inputs)}")
        outs, writes = self._eval(self.term.term, (), list(inputs))
        for path, value in writes.items():
            if value is None:
                self.emitted.add(path)
            else:
                self.delay_state[path] = value
        return outs

    def _eval(self, t: Term, path: tuple[int, ...], ins: list[Value]
              ) -> tuple[list[Value], dict]:
        match t:
            case Generator("and") | Generator("or") | Generator("not"):
                return [gate_output(t.name, tuple(ins))], {}
            case Generator("merge"):
                return [join(ins[0], ins[1])], {}
            case Generator("init"):
                return [Value.BOT], {}
            case Generator(name) if name in _LABEL_VALUE:
                emitted = path in self.emitted
                out = Value.BOT if emitted else _LABEL_VALUE[name]
                return [out], {path: None}
            case Generator("delay"):
                return ([self.delay_state.get(path, Value.BOT)],
                        {path: ins[0]})
            case Identity(_):
                return list(ins), {}
            case Symmetry(a, _):
                return ins[a:] + ins[:a], {}
            case Copy():
                return [ins[0], ins[0]], {}
            case Discard():
                return [], {}
            case Compose(a, b):
                mid, w1 = self._eval(a, path + (0,), ins)
                out, w2 = self._eval(b, path + (1,), mid)
                return out, {**w1, **w2}
            case Tensor(a, b):
                da = self.types[path + (0,)][0]
                top, w1 = self._eval(a, path + (0,), ins[:da])
                bot, w2 = self._eval(b, path + (1,), ins[da:])
                return top + bot, {**w1, **w2}
            case Trace(x, body):
                wires = [Value.BOT] * x
                for _ in range(2 * x + 1):
                    outs, _w = self._eval(body, path + (0,), wires + ins)
                    if outs[:x] == wires:
                        break
                    wires = outs[:x]
                outs, writes = self._eval(body, path + (0,), wires + ins)
                return outs[x:], writes
        raise CircuitError(f"unknown node {t!r}")


def oracle_simulate(tt: TypedTerm,
                    stream: list[list[Value]]) -> list[list[Value]]:
    oracle = CircuitOracle(tt)
    return [oracle.tick(inputs) for inputs in stream]


# -- circuit DSL ---------------------------------------------------------------

_VALUE_WORDS = ("top", "bot", "t", "f")
_WORD_VALUE = {"top": Value.TOP, "bot": Value.BOT,
               "t": Value.TRUE, "f": Value.FALSE}


def parse_values(text: str) -> list[Value]:
    """Greedy left-to-right split of e.g. 'tftop' into value words."""
    out = []
    pos = 0
    while pos < len(text):
        for word in _VALUE_WORDS:
            if text.startswith(word, pos):
                out.append(_WORD_VALUE[word])
                pos += len(word)
                break
        else:
            raise CircuitError(f"bad value string {text!r}")
    return out


def format_values(values: list[Value]) -> str:
    return ",".join(v.value for v in values)


def parse_value_tuple(text: str) -> list[Value]:
    text = text.strip()
    if not text:
        return []
    return [_WORD_VALUE[part.strip()] for part in text.split(",")]


def _circuit_atom(name: str) -> Term | None:
    sig = circuit_signature()
    if name in sig:
        return Generator(name)
    if name.startswith("v:"):
        values = parse_values(name[2:])
        if len(values) != 1:
            raise CircuitError(f"bad value atom {name!r}")
        return value_term(values[0])
    if name.startswith("reg:"):
        return tensor_terms(*(reg_term(v) for v in parse_values(name[4:])))
    return None


def parse_circuit(source: str) -> TypedTerm:
    """Term DSL extended with gates, 'v:<value>', 'delay' and 'reg:<values>'."""
    try:
        return parse_term(source, circuit_signature(), resolve=_circuit_atom)
    except CircuitError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def waveform(tt: TypedTerm, stream: list[list[Value]],
             check: bool = False) -> str:
    """One 'in=<tuple> out=<tuple>' line per tick, via the rewrite pipeline."""
    outputs = run_pipeline(tt, stream)
    if check:
        expected = oracle_simulate(tt, stream)
        if outputs != expected:
            raise CircuitError(
                f"pipeline disagrees with oracle: {outputs} vs {expected}")
    lines = [
        f"in={format_values(ins)} out={format_values(outs)}"
        for ins, outs in zip(stream, outputs)]
    return "\n".join(lines) + "\n"
