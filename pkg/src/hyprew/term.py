"""Syntax of traced diagram terms with comonoid generators.

Terms are freely built from signature generators, identities, symmetries,
sequential and parallel composition, trace, and the one-wire fork/stub.
``interpret`` maps them structurally onto interfaced cospans.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from . import cospan as cs
from .cospan import InterfacedCospan
from .hypergraph import Signature


class TermTypeError(ValueError):
    """Ill-typed term."""


class Term:
    """Base class for AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Generator(Term):
    name: str


@dataclass(frozen=True)
class Identity(Term):
    width: int


@dataclass(frozen=True)
class Symmetry(Term):
    left: int
    right: int


@dataclass(frozen=True)
class Compose(Term):
    first: Term
    second: Term


@dataclass(frozen=True)
class Tensor(Term):
    top: Term
    bottom: Term


@dataclass(frozen=True)
class Trace(Term):
    width: int
    body: Term


@dataclass(frozen=True)
class Copy(Term):
    """Fork one wire into two."""


@dataclass(frozen=True)
class Discard(Term):
    """Terminate one wire."""


@dataclass(frozen=True)
class TypedTerm:
    term: Term
    dom: int
    cod: int


def typecheck(term: Term, sig: Signature) -> TypedTerm:
    """Compute arities bottom-up; raises TermTypeError on any mismatch."""
    def go(t: Term) -> tuple[int, int]:
        match t:
            case Generator(name):
                return sig.arity(name)
            case Identity(width):
                if width < 0:
                    raise TermTypeError("negative identity width")
                return width, width
            case Symmetry(left, right):
                if left < 0 or right < 0:
                    raise TermTypeError("negative symmetry width")
                return left + right, left + right
            case Compose(first, second):
                m, n = go(first)
                p, q = go(second)
                if n != p:
                    raise TermTypeError(
                        f"composition mismatch: left has codomain {n}, "
                        f"right has domain {p}")
                return m, q
            case Tensor(top, bottom):
                m, n = go(top)
                p, q = go(bottom)
                return m + p, n + q
            case Trace(width, body):
                m, n = go(body)
                if width < 0 or m < width or n < width:
                    raise TermTypeError(
                        f"trace width {width} exceeds interface {m}->{n}")
                return m - width, n - width
            case Copy():
                return 1, 2
            case Discard():
                return 1, 0
        raise TermTypeError(f"unknown term node {t!r}")

    m, n = go(term)
    return TypedTerm(term, m, n)


def interpret(tt: TypedTerm, sig: Signature) -> InterfacedCospan:
    """Structural interpretation of a well-typed term as a cospan."""
    def go(t: Term) -> InterfacedCospan:
        match t:
            case Generator(name):
                ar, coar = sig.arity(name)
                return cs.generator(name, ar, coar)
            case Identity(width):
                return cs.identity(width)
            case Symmetry(left, right):
                return cs.symmetry(left, right)
            case Compose(first, second):
                return cs.compose(go(first), go(second))
            case Tensor(top, bottom):
                return cs.tensor(go(top), go(bottom))
            case Trace(width, body):
                return cs.trace(width, go(body))
            case Copy():
                return cs.copy(1)
            case Discard():
                return cs.discard(1)
        raise TermTypeError(f"unknown term node {t!r}")

    return go(tt.term)


def fold(c: InterfacedCospan) -> InterfacedCospan:
    """Bend all interfaces to the right: m -> n becomes 0 -> m+n."""
    return InterfacedCospan(c.graph, (), c.inputs + c.outputs)


def unfold(c: InterfacedCospan, m: int) -> InterfacedCospan:
    """Split a folded interface back at position m."""
    if c.inputs:
        raise cs.CospanError("unfold requires an empty input interface")
    if len(c.outputs) < m:
        raise cs.CospanError(
            f"cannot split {len(c.outputs)} outputs at position {m}")
    return InterfacedCospan(c.graph, c.outputs[:m], c.outputs[m:])


def uses_comonoid(t: Term) -> bool:
    match t:
        case Copy() | Discard():
            return True
        case Compose(a, b) | Tensor(a, b):
            return uses_comonoid(a) or uses_comonoid(b)
        case Trace(_, body):
            return uses_comonoid(body)
    return False


# -- term-building helpers ---------------------------------------------------

def compose_terms(*ts: Term) -> Term:
    ts = tuple(t for t in ts)
    if not ts:
        raise TermTypeError("empty composition")
    return reduce(Compose, ts)


def tensor_terms(*ts: Term) -> Term:
    ts = tuple(ts)
    if not ts:
        return Identity(0)
    return reduce(Tensor, ts)


def fan_out(k: int) -> Term:
    """1 -> k comb built from Copy and Discard."""
    if k == 0:
        return Discard()
    if k == 1:
        return Identity(1)
    return Compose(Copy(), Tensor(Identity(1), fan_out(k - 1)))


def discard_many(n: int) -> Term:
    return tensor_terms(*([Discard()] * n))


def permutation_term(dest: list[int]) -> Term:
    """Permutation term routing input position p to output position dest[p].

    Built as a composite of adjacent transpositions (bubble sort), so the
    result is deterministic for a given permutation.
    """
    k = len(dest)
    if sorted(dest) != list(range(k)):
        raise TermTypeError(f"not a permutation: {dest}")
    if k == 0:
        return Identity(0)
    arrangement = list(range(k))
    layers: list[Term] = []
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            if dest[arrangement[i]] > dest[arrangement[i + 1]]:
                arrangement[i], arrangement[i + 1] = \
                    arrangement[i + 1], arrangement[i]
                layers.append(tensor_terms(
                    Identity(i), Symmetry(1, 1), Identity(k - i - 2)))
                changed = True
    if not layers:
        return Identity(k)
    return compose_terms(*layers)


def copy_bundle(n: int) -> Term:
    """Wide fork n -> n+n with the two copies grouped block-wise."""
    if n == 0:
        return Identity(0)
    if n == 1:
        return Copy()
    dest = [0] * (2 * n)
    for i in range(n):
        dest[2 * i] = i
        dest[2 * i + 1] = n + i
    return Compose(tensor_terms(*([Copy()] * n)), permutation_term(dest))


def fork_block(m: int, r: int) -> Term:
    """Fork an m-wide bus into r block-grouped copies: m -> r*m."""
    if m == 0 or r == 1:
        return Identity(m)
    dest = [0] * (m * r)
    for i in range(m):
        for t in range(r):
            dest[i * r + t] = t * m + i
    return Compose(tensor_terms(*([fan_out(r)] * m)), permutation_term(dest))


def simplify(t: Term) -> Term:
    """Best-effort peephole cleanup of identity and unit clutter."""
    match t:
        case Compose(a, b):
            a, b = simplify(a), simplify(b)
            if isinstance(a, Identity):
                return b
            if isinstance(b, Identity):
                return a
            return Compose(a, b)
        case Tensor(a, b):
            a, b = simplify(a), simplify(b)
            if a == Identity(0):
                return b
            if b == Identity(0):
                return a
            if isinstance(a, Identity) and isinstance(b, Identity):
                return Identity(a.width + b.width)
            return Tensor(a, b)
        case Trace(width, body):
            body = simplify(body)
            if width == 0:
                return body
            return Trace(width, body)
        case Symmetry(0, n):
            return Identity(n)
        case Symmetry(n, 0):
            return Identity(n)
    return t


def pretty(t: Term) -> str:
    """Render a term in the textual DSL (round-trips through the parser)."""
    def atom(s: str, needs_parens: bool) -> str:
        return f"({s})" if needs_parens else s

    def go(t: Term, level: int) -> str:
        # level 0: composition, 1: tensor, 2: atom
        match t:
            case Generator(name):
                return name
            case Identity(width):
                return f"id:{width}"
            case Symmetry(left, right):
                return f"swap:{left},{right}"
            case Copy():
                return "copy"
            case Discard():
                return "discard"
            case Trace(width, body):
                return f"tr^{width}({go(body, 0)})"
            case Compose(a, b):
                s = f"{go(a, 0)} ; {go(b, 0)}"
                return atom(s, level > 0)
            case Tensor(a, b):
                s = f"{go(a, 1)} * {go(b, 1)}"
                return atom(s, level > 1)
        raise TermTypeError(f"unknown term node {t!r}")

    return go(t, 0)
