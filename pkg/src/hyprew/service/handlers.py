"""Service operations, shared by the HTTP app and the command-line client.

Each handler is a pure request-model to response-model function; user
errors surface as ServiceError with an HTTP-style status code.
"""
from __future__ import annotations

from .. import circuits, dpo, extraction
from ..cospan import cospan_isomorphism, to_dot, validity_class
from ..parser import ParseError, parse_signature, parse_term
from ..term import interpret, pretty
from .models import (
    CircuitRequest,
    CircuitResponse,
    InterpRequest,
    InterpResponse,
    IsoRequest,
    IsoResponse,
    RewriteRequest,
    RewriteResponse,
    RuleSpec,
)


class ServiceError(Exception):
    def __init__(self, status_code: int, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.detail = detail


def _parse(term_text: str, sig_text: str):
    try:
        sig = parse_signature(sig_text)
        return parse_term(term_text, sig), sig
    except (ParseError, ValueError) as exc:
        raise ServiceError(400, str(exc)) from exc


def interp(req: InterpRequest) -> InterpResponse:
    tt, sig = _parse(req.term, req.signature)
    cospan = interpret(tt, sig)
    return InterpResponse(
        cospan=cospan.to_json_dict(),
        validity=validity_class(cospan).value,
        dot=to_dot(cospan) if req.dot else None)


def iso(req: IsoRequest) -> IsoResponse:
    ta, sig = _parse(req.term_a, req.signature)
    tb, _ = _parse(req.term_b, req.signature)
    try:
        if not extraction.equal_modulo_axioms(ta, tb, sig,
                                              allow_comonoid=req.comonoid):
            return IsoResponse(equal=False)
    except extraction.ExtractionError as exc:
        raise ServiceError(400, str(exc)) from exc
    witness = cospan_isomorphism(interpret(ta, sig), interpret(tb, sig))
    return IsoResponse(
        equal=True,
        witness={str(v): w for v, w in sorted(witness.vmap.items())})


def _build_rules(specs: list[RuleSpec], sig) -> list[dpo.RewriteRule]:
    rules = []
    for spec in specs:
        try:
            lhs = parse_term(spec.lhs, sig)
            rhs = parse_term(spec.rhs, sig)
        except ParseError as exc:
            raise ServiceError(400, f"rule {spec.name!r}: {exc}") from exc
        if (lhs.dom, lhs.cod) != (spec.i, spec.j):
            raise ServiceError(
                400, f"rule {spec.name!r}: lhs has type {lhs.dom}->{lhs.cod}, "
                f"declared {spec.i}->{spec.j}")
        try:
            rules.append(dpo.RewriteRule.from_terms(spec.name, lhs, rhs, sig))
        except dpo.DpoError as exc:
            raise ServiceError(400, f"rule {spec.name!r}: {exc}") from exc
    return rules


def rewrite(req: RewriteRequest) -> RewriteResponse:
    tt, sig = _parse(req.term, req.signature)
    rules = _build_rules(req.rules, sig)
    host = interpret(tt, sig)
    try:
        result = dpo.normalize(host, rules, mode=req.mode,
                               strategy=req.strategy, max_steps=req.max_steps)
    except dpo.DpoError as exc:
        raise ServiceError(400, str(exc)) from exc
    if result.log:
        allow_comonoid = req.mode == "traced_comonoid"
        normal = extraction.extract(result.cospan, allow_comonoid, sig=sig)
        normal_term = normal.term
    else:
        normal_term = tt.term  # no step taken: echo the input unchanged
    return RewriteResponse(
        normal_form=pretty(normal_term),
        status=result.status,
        log=[entry.render() for entry in result.log])


def circuit(req: CircuitRequest) -> CircuitResponse:
    try:
        tt = circuits.parse_circuit(req.circuit)
        stream = [circuits.parse_value_tuple(",".join(tick))
                  if isinstance(tick, list) else tick
                  for tick in req.inputs]
        for tick in stream:
            if len(tick) != tt.dom:
                raise circuits.CircuitError(
                    f"tick has {len(tick)} values, circuit has {tt.dom} inputs")
        outputs = circuits.run_pipeline(tt, stream)
        if req.check:
            expected = circuits.oracle_simulate(tt, stream)
            if outputs != expected:
                raise ServiceError(
                    500, f"pipeline disagrees with oracle: "
                    f"{outputs} vs {expected}")
        lines = [
            f"in={circuits.format_values(ins)} out={circuits.format_values(outs)}"
            for ins, outs in zip(stream, outputs)]
        return CircuitResponse(
            waveform="\n".join(lines) + "\n",
            outputs=[[v.value for v in outs] for outs in outputs])
    except (ParseError, circuits.CircuitError, KeyError) as exc:
        raise ServiceError(400, str(exc)) from exc
