"""Request/response models for the rewriting service."""
from __future__ import annotations

from pydantic import BaseModel


class InterpRequest(BaseModel):
    term: str
    signature: str
    dot: bool = False


class InterpResponse(BaseModel):
    cospan: dict
    validity: str
    dot: str | None = None


class IsoRequest(BaseModel):
    term_a: str
    term_b: str
    signature: str
    comonoid: bool = False


class IsoResponse(BaseModel):
    equal: bool
    witness: dict[str, int] | None = None


class RuleSpec(BaseModel):
    name: str
    lhs: str
    rhs: str
    i: int
    j: int


class RewriteRequest(BaseModel):
    term: str
    signature: str
    rules: list[RuleSpec]
    mode: str = "traced"
    strategy: str = "exhaustive"
    max_steps: int = 100


class RewriteResponse(BaseModel):
    normal_form: str
    status: str
    log: list[str]


class CircuitRequest(BaseModel):
    circuit: str
    inputs: list[list[str]]
    check: bool = False


class CircuitResponse(BaseModel):
    waveform: str
    outputs: list[list[str]]
