"""Syntactic embeddings between the classical, intuitionistic, and modal languages.

Each translation is a structural recursion over the source formula.  They share
a memo table per call so that repeated subformulas translate once; the results
are immutable and share structure freely.
"""

from __future__ import annotations

from typing import Callable

from .syntax import (
    And,
    Atom,
    Bot,
    Box,
    Eq,
    Exists,
    Forall,
    Formula,
    GammaContext,
    Implies,
    Or,
    Prf,
    UnsupportedFormula,
    conj_over,
    contains_box,
    contains_prf,
    neg,
    not_e,
    walk,
)


def _reject(f: Formula, op: str, *, box: bool = False, prf: bool = True) -> None:
    if prf and contains_prf(f):
        raise UnsupportedFormula(f"{op} does not accept the provability operator")
    if box and contains_box(f):
        raise UnsupportedFormula(f"{op} does not accept the necessity operator")


def translate_goedel(f: Formula) -> Formula:
    """Embed an intuitionistic formula into S4.

    Atoms other than bot and equations are boxed, implications and universals
    are boxed after translating componentwise, and the other connectives are
    translated componentwise.  The source must be modality-free.
    """
    _reject(f, "translate_goedel", box=True)
    memo: dict[Formula, Formula] = {}

    def rec(node: Formula) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        match node:
            case Bot() | Eq():
                out = node
            case Atom():
                out = Box(node)
            case Or(left=l, right=r):
                out = Or(rec(l), rec(r))
            case And(left=l, right=r):
                out = And(rec(l), rec(r))
            case Implies(left=l, right=r):
                out = Box(Implies(rec(l), rec(r)))
            case Exists(var=v, body=b):
                out = Exists(v, rec(b))
            case Forall(var=v, body=b):
                out = Box(Forall(v, rec(b)))
            case _:
                raise UnsupportedFormula(f"translate_goedel cannot handle {type(node).__name__}")
        memo[node] = out
        return out

    return rec(f)


def translate_rs(f: Formula) -> Formula:
    """Embed an intuitionistic formula into S4, boxing eagerly at each connective.

    Differs from translate_goedel at disjunction (both disjuncts get boxed),
    implication (both sides boxed under the outer box), existentials (boxed
    body), and universals (no box).  The source must be modality-free.
    """
    _reject(f, "translate_rs", box=True)
    memo: dict[Formula, Formula] = {}

    def rec(node: Formula) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        match node:
            case Bot() | Eq():
                out = node
            case Atom():
                out = Box(node)
            case Or(left=l, right=r):
                out = Or(Box(rec(l)), Box(rec(r)))
            case And(left=l, right=r):
                out = And(rec(l), rec(r))
            case Implies(left=l, right=r):
                out = Box(Implies(Box(rec(l)), Box(rec(r))))
            case Exists(var=v, body=b):
                out = Exists(v, Box(rec(b)))
            case Forall(var=v, body=b):
                out = Forall(v, rec(b))
            case _:
                raise UnsupportedFormula(f"translate_rs cannot handle {type(node).__name__}")
        memo[node] = out
        return out

    return rec(f)


def _check_ff_context(ctx: GammaContext, op: str) -> None:
    for member in ctx.gamma:
        if contains_box(member) or contains_prf(member):
            raise UnsupportedFormula(f"{op}: context members must be modality-free")


# memo tables shared across calls with the same member set, so the images
# produced for different distinguished members share structure as objects;
# downstream equality checks then resolve by identity instead of tree walks
_FF_MEMO_CAP = 64
_ff_memos: "dict[tuple[tuple[Formula, ...], bool], dict]" = {}


def _ff_memo(gamma: tuple[Formula, ...], box_transparent: bool) -> dict:
    key = (gamma, box_transparent)
    memo = _ff_memos.get(key)
    if memo is None:
        if len(_ff_memos) >= _FF_MEMO_CAP:
            _ff_memos.pop(next(iter(_ff_memos)))
        memo = _ff_memos[key] = {}
    return memo


def _ff_translate(f: Formula, ctx: GammaContext, op: str, box_transparent: bool) -> Formula:
    """Double-negation translation relative to a context.

    Every atom (bot and equations included) becomes a double relative negation;
    disjunctions and existentials get the double negation around the
    componentwise image; conjunction, implication, and universals are
    componentwise.  A boxed formula becomes the doubly negated conjunction of
    its translations at every member of the context, unless box_transparent is
    set, in which case the box is simply dropped and the provability operator
    takes over the conjunction clause, without the double negation.
    """
    _check_ff_context(ctx, op)
    if not box_transparent and contains_prf(f):
        raise UnsupportedFormula(f"{op} does not accept the provability operator")
    gamma = ctx.gamma
    memo = _ff_memo(gamma, box_transparent)

    def rec(node: Formula, ei: int) -> Formula:
        key = (node, ei)
        out = memo.get(key)
        if out is not None:
            return out
        e = gamma[ei]

        def nn(x: Formula) -> Formula:
            return not_e(e, not_e(e, x))

        match node:
            case Bot() | Eq() | Atom():
                out = nn(node)
            case Or(left=l, right=r):
                out = nn(Or(rec(l, ei), rec(r, ei)))
            case And(left=l, right=r):
                out = And(rec(l, ei), rec(r, ei))
            case Implies(left=l, right=r):
                out = Implies(rec(l, ei), rec(r, ei))
            case Box(body=b):
                if box_transparent:
                    out = rec(b, ei)
                else:
                    out = nn(conj_over(ctx, lambda c: rec(b, gamma.index(c))))
            case Prf(body=b):
                out = conj_over(ctx, lambda c: rec(b, gamma.index(c)))
            case Exists(var=v, body=b):
                out = nn(Exists(v, rec(b, ei)))
            case Forall(var=v, body=b):
                out = Forall(v, rec(b, ei))
            case _:
                raise UnsupportedFormula(f"{op} cannot handle {type(node).__name__}")
        memo[key] = out
        return out

    return rec(f, ctx.e_index)


def translate_ff(f: Formula, ctx: GammaContext) -> Formula:
    """Translate a modal formula into intuitionistic logic relative to ctx."""
    return _ff_translate(f, ctx, "translate_ff", box_transparent=False)


def translate_ff_mea(f: Formula, ctx: GammaContext) -> Formula:
    """Variant of translate_ff for the language with a provability operator.

    Boxes are transparent; the provability operator is translated to the bare
    conjunction of the body's translations at every context member.
    """
    return _ff_translate(f, ctx, "translate_ff_mea", box_transparent=True)


def translate_f(f: Formula) -> Formula:
    """Collapse a modal formula into intuitionistic logic via plain double negation.

    Atoms, disjunctions, and existentials get a double negation; boxes are
    dropped; everything else is componentwise.
    """
    _reject(f, "translate_f")
    memo: dict[Formula, Formula] = {}

    def nn(x: Formula) -> Formula:
        return neg(neg(x))

    def rec(node: Formula) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        match node:
            case Bot() | Eq() | Atom():
                out = nn(node)
            case Or(left=l, right=r):
                out = nn(Or(rec(l), rec(r)))
            case And(left=l, right=r):
                out = And(rec(l), rec(r))
            case Implies(left=l, right=r):
                out = Implies(rec(l), rec(r))
            case Box(body=b):
                out = rec(b)
            case Exists(var=v, body=b):
                out = nn(Exists(v, rec(b)))
            case Forall(var=v, body=b):
                out = Forall(v, rec(b))
            case _:
                raise UnsupportedFormula(f"translate_f cannot handle {type(node).__name__}")
        memo[node] = out
        return out

    return rec(f)


def translate_dbox(f: Formula) -> Formula:
    """Erase every necessity operator, leaving the rest of the formula intact."""
    _reject(f, "translate_dbox")
    memo: dict[Formula, Formula] = {}

    def rec(node: Formula) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        match node:
            case Bot() | Eq() | Atom():
                out = node
            case Or(left=l, right=r):
                out = Or(rec(l), rec(r))
            case And(left=l, right=r):
                out = And(rec(l), rec(r))
            case Implies(left=l, right=r):
                out = Implies(rec(l), rec(r))
            case Box(body=b):
                out = rec(b)
            case Exists(var=v, body=b):
                out = Exists(v, rec(b))
            case Forall(var=v, body=b):
                out = Forall(v, rec(b))
            case _:
                raise UnsupportedFormula(f"translate_dbox cannot handle {type(node).__name__}")
        memo[node] = out
        return out

    return rec(f)


def translate_negative(f: Formula) -> Formula:
    """Embed a classical formula into intuitionistic logic.

    bot stays fixed, other atoms are doubly negated, disjunction becomes the
    negated conjunction of the negated images, existentials become negated
    universals of the negated body, and conjunction, implication, and
    universals are componentwise.  The source must be modality-free.
    """
    _reject(f, "translate_negative", box=True)
    memo: dict[Formula, Formula] = {}

    def rec(node: Formula) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        match node:
            case Bot():
                out = node
            case Eq() | Atom():
                out = neg(neg(node))
            case Or(left=l, right=r):
                out = neg(And(neg(rec(l)), neg(rec(r))))
            case And(left=l, right=r):
                out = And(rec(l), rec(r))
            case Implies(left=l, right=r):
                out = Implies(rec(l), rec(r))
            case Exists(var=v, body=b):
                out = neg(Forall(v, neg(rec(b))))
            case Forall(var=v, body=b):
                out = Forall(v, rec(b))
            case _:
                raise UnsupportedFormula(f"translate_negative cannot handle {type(node).__name__}")
        memo[node] = out
        return out

    return rec(f)


def _as_triple_not_e(f: Formula, e: Formula) -> Formula | None:
    """Return x when f has the exact shape not_e(not_e(not_e(x))), else None."""
    current = f
    for _ in range(3):
        if isinstance(current, Implies) and current.right == e:
            current = current.left
        else:
            return None
    return current


def _map_formula(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild f with fn applied to each direct formula child."""
    match f:
        case Or(left=l, right=r):
            return Or(fn(l), fn(r))
        case And(left=l, right=r):
            return And(fn(l), fn(r))
        case Implies(left=l, right=r):
            return Implies(fn(l), fn(r))
        case Exists(var=v, body=b):
            return Exists(v, fn(b))
        case Forall(var=v, body=b):
            return Forall(v, fn(b))
        case Box(body=b):
            return Box(fn(b))
        case Prf(body=b):
            return Prf(fn(b))
        case _:
            return f


def collapse_triple_not_e(e: Formula, f: Formula) -> Formula:
    """Rewrite every triple relative negation to a single one, to a fixpoint.

    The rewrite not_e(not_e(not_e(x))) -> not_e(x) is applied outermost-first
    and repeated until no redex remains.
    """

    def one_pass(node: Formula, memo: dict[Formula, Formula]) -> Formula:
        out = memo.get(node)
        if out is not None:
            return out
        result = node
        while True:
            inner = _as_triple_not_e(result, e)
            if inner is None:
                break
            result = not_e(e, inner)
        result = _map_formula(result, lambda child: one_pass(child, memo))
        memo[node] = result
        return result

    while True:
        next_f = one_pass(f, {})
        if next_f == f:
            return f
        f = next_f
