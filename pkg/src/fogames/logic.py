"""First-order formulas over adjacency ``E`` and equality.

Variables are positive integers printed as ``x1, x2, ...``. Formulas are
immutable and hashable, so structurally equal subformulas compare equal.
Empty ``And`` reads as true and empty ``Or`` as false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .graph import Graph


@dataclass(frozen=True)
class Adj:
    i: int
    j: int


@dataclass(frozen=True)
class Eq:
    i: int
    j: int


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    subs: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    subs: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: int
    sub: "Formula"


@dataclass(frozen=True)
class Forall:
    var: int
    sub: "Formula"


Formula = Union[Adj, Eq, Not, And, Or, Exists, Forall]
TRUE = And(())
FALSE = Or(())


class OpenFormulaError(ValueError):
    pass


class FormulaSyntaxError(ValueError):
    pass


def conj(*subs: Formula) -> Formula:
    return subs[0] if len(subs) == 1 else And(tuple(subs))


def disj(*subs: Formula) -> Formula:
    return subs[0] if len(subs) == 1 else Or(tuple(subs))


# --------------------------------------------------------------- analysis

def nest_sequences(f: Formula) -> frozenset[str]:
    """Sequences of nested quantifiers as words over ``E`` (exists) and ``A`` (forall).

    Negation swaps the two letters throughout.
    """
    if isinstance(f, (Adj, Eq)):
        return frozenset({""})
    if isinstance(f, Not):
        return frozenset(s.translate(_FLIP) for s in nest_sequences(f.sub))
    if isinstance(f, (And, Or)):
        if not f.subs:
            return frozenset({""})
        out: set[str] = set()
        for s in f.subs:
            out |= nest_sequences(s)
        return frozenset(out)
    letter = "E" if isinstance(f, Exists) else "A"
    return frozenset(letter + s for s in nest_sequences(f.sub))


_FLIP = str.maketrans("EA", "AE")


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, (Adj, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.sub)
    if isinstance(f, (And, Or)):
        return max((quantifier_rank(s) for s in f.subs), default=0)
    return 1 + quantifier_rank(f.sub)


def alternations(word: str) -> int:
    return sum(1 for a, b in zip(word, word[1:]) if a != b)


def alternation_number(f: Formula) -> int:
    return max(alternations(s) for s in nest_sequences(f))


def free_variables(f: Formula) -> frozenset[int]:
    if isinstance(f, (Adj, Eq)):
        return frozenset({f.i, f.j})
    if isinstance(f, Not):
        return free_variables(f.sub)
    if isinstance(f, (And, Or)):
        out: frozenset[int] = frozenset()
        for s in f.subs:
            out |= free_variables(s)
        return out
    return free_variables(f.sub) - {f.var}


def bound_variables(f: Formula) -> frozenset[int]:
    if isinstance(f, (Adj, Eq)):
        return frozenset()
    if isinstance(f, Not):
        return bound_variables(f.sub)
    if isinstance(f, (And, Or)):
        out: frozenset[int] = frozenset()
        for s in f.subs:
            out |= bound_variables(s)
        return out
    return bound_variables(f.sub) | {f.var}


def variables(f: Formula) -> frozenset[int]:
    return free_variables(f) | bound_variables(f)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, (Adj, Eq)):
        return True
    if isinstance(f, Not):
        return isinstance(f.sub, (Adj, Eq))
    if isinstance(f, (And, Or)):
        return all(is_nnf(s) for s in f.subs)
    return is_nnf(f.sub)


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations down to atoms."""
    if isinstance(f, (Adj, Eq)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return to_nnf(f.sub, not negate)
    if isinstance(f, (And, Or)):
        subs = tuple(to_nnf(s, negate) for s in f.subs)
        flip = isinstance(f, And) == negate
        return Or(subs) if flip else And(subs)
    sub = to_nnf(f.sub, negate)
    flip = isinstance(f, Exists) == negate
    return Forall(f.var, sub) if flip else Exists(f.var, sub)


# ------------------------------------------------------------- semantics

def evaluate(f: Formula, g: Graph, assignment: Mapping[int, int] | None = None) -> bool:
    """Truth of ``f`` on ``g``; free variables must be covered by ``assignment``."""
    env = dict(assignment or {})
    missing = free_variables(f) - env.keys()
    if missing:
        raise OpenFormulaError(f"unassigned free variables {sorted(missing)}")
    return _eval(f, g, env)


def _eval(f: Formula, g: Graph, env: dict[int, int]) -> bool:
    if isinstance(f, Adj):
        return bool((g.rows[env[f.i]] >> env[f.j]) & 1)
    if isinstance(f, Eq):
        return env[f.i] == env[f.j]
    if isinstance(f, Not):
        return not _eval(f.sub, g, env)
    if isinstance(f, And):
        return all(_eval(s, g, env) for s in f.subs)
    if isinstance(f, Or):
        return any(_eval(s, g, env) for s in f.subs)
    saved = env.get(f.var)
    want = isinstance(f, Exists)
    result = not want
    for v in range(g.n):
        env[f.var] = v
        if _eval(f.sub, g, env) == want:
            result = want
            break
    if saved is None:
        env.pop(f.var, None)
    else:
        env[f.var] = saved
    return result


# ------------------------------------------------------ canonical formulas

def _diagram(g: Graph) -> list[Formula]:
    n = g.n
    parts: list[Formula] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            parts.append(Not(Eq(i, j)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            atom = Adj(i, j)
            parts.append(atom if g.has_edge(i - 1, j - 1) else Not(atom))
    return parts


def _exists_prefix(n: int, body: Formula) -> Formula:
    for i in range(n, 0, -1):
        body = Exists(i, body)
    return body


def canonical_distinguishing_formula(g: Graph) -> Formula:
    """Existential sentence saying some n distinct vertices induce a copy of ``g``."""
    return _exists_prefix(g.n, And(tuple(_diagram(g))))


def canonical_defining_formula(g: Graph) -> Formula:
    """The distinguishing sentence plus "every vertex is one of x1..xn"."""
    n = g.n
    cover = Forall(n + 1, Or(tuple(Eq(n + 1, i) for i in range(1, n + 1))))
    return _exists_prefix(n, And(tuple(_diagram(g)) + (cover,)))


# -------------------------------------------------------- variable reuse

def rename(f: Formula, mapping: Mapping[int, int]) -> Formula:
    """Rename free occurrences; bound variables shadow the mapping."""
    if isinstance(f, Adj):
        return Adj(mapping.get(f.i, f.i), mapping.get(f.j, f.j))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.i, f.i), mapping.get(f.j, f.j))
    if isinstance(f, Not):
        return Not(rename(f.sub, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(rename(s, mapping) for s in f.subs))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    return type(f)(f.var, rename(f.sub, inner))


def _freshen(f: Formula, counter: list[int]) -> Formula:
    """Give every quantifier its own fresh variable."""
    if isinstance(f, (Adj, Eq)):
        return f
    if isinstance(f, Not):
        return Not(_freshen(f.sub, counter))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_freshen(s, counter) for s in f.subs))
    counter[0] += 1
    new = counter[0]
    return type(f)(new, _freshen(rename(f.sub, {f.var: new}), counter))


def reduce_variables(f: Formula) -> Formula:
    """Equivalent formula whose bound variables all lie in ``{x1..x_qr(f)}``.

    Free variables must avoid that range. Bound variables are first made
    fresh, then renamed bottom-up: a quantifier heading a subformula of rank
    ``k`` gets ``x_k``.
    """
    k = quantifier_rank(f)
    if free_variables(f) & set(range(1, k + 1)):
        raise ValueError("free variables collide with the target names x1..x_qr")
    top = max(variables(f) | {k}, default=k)
    return _reduce(_freshen(f, [top]))


def _reduce(f: Formula) -> Formula:
    if isinstance(f, (Adj, Eq)):
        return f
    if isinstance(f, Not):
        return Not(_reduce(f.sub))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_reduce(s) for s in f.subs))
    k = quantifier_rank(f)
    return type(f)(k, rename(_reduce(f.sub), {f.var: k}))


def complement_formula(f: Formula) -> Formula:
    """Swap adjacency for non-adjacency between distinct vertices, so that
    ``g |= f`` iff ``complement(g) |= result``."""
    if isinstance(f, Adj):
        if f.i == f.j:
            return f
        return And((Not(f), Not(Eq(f.i, f.j))))
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(complement_formula(f.sub))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(complement_formula(s) for s in f.subs))
    return type(f)(f.var, complement_formula(f.sub))


# ---------------------------------------------------- text serialization

def to_text(f: Formula) -> str:
    if isinstance(f, Adj):
        return f"(E x{f.i} x{f.j})"
    if isinstance(f, Eq):
        return f"(= x{f.i} x{f.j})"
    if isinstance(f, Not):
        return f"(not {to_text(f.sub)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([head] + [to_text(s) for s in f.subs]) + ")"
    head = "exists" if isinstance(f, Exists) else "forall"
    return f"({head} x{f.var} {to_text(f.sub)})"


def _tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_formula(text: str) -> Formula:
    toks = _tokens(text)
    pos = 0

    def var(tok: str) -> int:
        if not (tok.startswith("x") and tok[1:].isdigit() and int(tok[1:]) >= 1):
            raise FormulaSyntaxError(f"bad variable {tok!r}")
        return int(tok[1:])

    def expr() -> Formula:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != "(":
            raise FormulaSyntaxError(f"expected '(' at token {pos}")
        pos += 1
        if pos >= len(toks):
            raise FormulaSyntaxError("unexpected end of input")
        head = toks[pos]
        pos += 1
        if head in ("E", "="):
            a, b = var(toks[pos]), var(toks[pos + 1])
            pos += 2
            node: Formula = Adj(a, b) if head == "E" else Eq(a, b)
        elif head == "not":
            node = Not(expr())
        elif head in ("and", "or"):
            subs = []
            while pos < len(toks) and toks[pos] == "(":
                subs.append(expr())
            node = And(tuple(subs)) if head == "and" else Or(tuple(subs))
        elif head in ("exists", "forall"):
            v = var(toks[pos])
            pos += 1
            sub = expr()
            node = Exists(v, sub) if head == "exists" else Forall(v, sub)
        else:
            raise FormulaSyntaxError(f"unknown head {head!r}")
        if pos >= len(toks) or toks[pos] != ")":
            raise FormulaSyntaxError(f"expected ')' at token {pos}")
        pos += 1
        return node

    try:
        node = expr()
    except IndexError:
        raise FormulaSyntaxError("unexpected end of input") from None
    if pos != len(toks):
        raise FormulaSyntaxError("trailing tokens")
    return node
