"""Terms, formulas, and the shared syntactic toolkit.

The formula language covers classical, intuitionistic, and S4 modal logic at
once: one AST with `Box` for necessity and `Prf` for a provability operator.
Negation and possibility are not node types; `~A` abbreviates `A -> bot` and
`<>A` abbreviates `~[]~A`, and both are restored by the printer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

_MASK64 = (1 << 64) - 1


class UnsupportedFormula(ValueError):
    """An operation was handed a formula outside its domain."""


def _fnv64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & _MASK64
    return h


def _mix(*parts: int) -> int:
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h ^= p
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


def _check_ident(name: str, what: str) -> None:
    if not isinstance(name, str) or not _IDENT.match(name):
        raise ValueError(f"{what} must match [A-Za-z][A-Za-z0-9_]*, got {name!r}")


class _Node:
    """Shared identity machinery: cached node count and structural fingerprint."""

    _FIELDS: tuple[str, ...] = ()

    def _cache(self, size: int, fp: int) -> None:
        object.__setattr__(self, "_size", size)
        object.__setattr__(self, "_fp", fp)

    def __hash__(self) -> int:
        return self._fp  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        if self._fp != other._fp:  # type: ignore[attr-defined]
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self._FIELDS)

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)


class Term(_Node):
    """Base class for first-order terms."""

    def __repr__(self) -> str:
        return str(self)


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: str
    _FIELDS = ("name",)

    def __post_init__(self) -> None:
        _check_ident(self.name, "variable name")
        self._cache(1, _mix(1, _fnv64(self.name)))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False, repr=False)
class Const(Term):
    name: str
    _FIELDS = ("name",)

    def __post_init__(self) -> None:
        _check_ident(self.name, "constant name")
        self._cache(1, _mix(2, _fnv64(self.name)))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    fn: str
    args: tuple[Term, ...]
    _FIELDS = ("fn", "args")

    def __post_init__(self) -> None:
        _check_ident(self.fn, "function name")
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("function application needs at least one argument")
        size = 1 + sum(a._size for a in self.args)
        self._cache(size, _mix(3, _fnv64(self.fn), *(a._fp for a in self.args)))

    def __str__(self) -> str:
        return f"{self.fn}({', '.join(str(a) for a in self.args)})"


class Formula(_Node):
    """Base class for formulas."""

    def __str__(self) -> str:
        return _fmt(self, 0, True)

    def __repr__(self) -> str:
        if self._size > 2000:  # type: ignore[attr-defined]
            return f"<formula: {self._size} nodes>"  # type: ignore[attr-defined]
        return str(self)


@dataclass(frozen=True, eq=False, repr=False)
class Bot(Formula):
    def __post_init__(self) -> None:
        self._cache(1, _mix(10))


@dataclass(frozen=True, eq=False, repr=False)
class Eq(Formula):
    lhs: Term
    rhs: Term
    _FIELDS = ("lhs", "rhs")

    def __post_init__(self) -> None:
        self._cache(1 + self.lhs._size + self.rhs._size, _mix(11, self.lhs._fp, self.rhs._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()
    _FIELDS = ("pred", "args")

    def __post_init__(self) -> None:
        _check_ident(self.pred, "atom name")
        object.__setattr__(self, "args", tuple(self.args))
        size = 1 + sum(a._size for a in self.args)
        self._cache(size, _mix(12, _fnv64(self.pred), *(a._fp for a in self.args)))


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula
    _FIELDS = ("left", "right")

    def __post_init__(self) -> None:
        self._cache(1 + self.left._size + self.right._size, _mix(13, self.left._fp, self.right._fp))


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula
    _FIELDS = ("left", "right")

    def __post_init__(self) -> None:
        self._cache(1 + self.left._size + self.right._size, _mix(14, self.left._fp, self.right._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula
    _FIELDS = ("left", "right")

    def __post_init__(self) -> None:
        self._cache(1 + self.left._size + self.right._size, _mix(15, self.left._fp, self.right._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    var: str
    body: Formula
    _FIELDS = ("var", "body")

    def __post_init__(self) -> None:
        _check_ident(self.var, "bound variable")
        self._cache(1 + self.body._size, _mix(16, _fnv64(self.var), self.body._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Forall(Formula):
    var: str
    body: Formula
    _FIELDS = ("var", "body")

    def __post_init__(self) -> None:
        _check_ident(self.var, "bound variable")
        self._cache(1 + self.body._size, _mix(17, _fnv64(self.var), self.body._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Box(Formula):
    body: Formula
    _FIELDS = ("body",)

    def __post_init__(self) -> None:
        self._cache(1 + self.body._size, _mix(18, self.body._fp))


@dataclass(frozen=True, eq=False, repr=False)
class Prf(Formula):
    body: Formula
    _FIELDS = ("body",)

    def __post_init__(self) -> None:
        self._cache(1 + self.body._size, _mix(19, self.body._fp))


BOT = Bot()


def neg(a: Formula) -> Formula:
    """Derived negation: ~A is A -> bot."""
    return Implies(a, BOT)


def diamond(a: Formula) -> Formula:
    """Derived possibility: <>A is ~[]~A."""
    return neg(Box(neg(a)))


def as_negation(f: Formula) -> Formula | None:
    """Return A when f is A -> bot, else None."""
    if isinstance(f, Implies) and isinstance(f.right, Bot):
        return f.left
    return None


def as_diamond(f: Formula) -> Formula | None:
    """Return A when f is ~[]~A, else None."""
    inner = as_negation(f)
    if inner is not None and isinstance(inner, Box):
        operand = as_negation(inner.body)
        if operand is not None:
            return operand
    return None


def iff(a: Formula, b: Formula) -> Formula:
    """Biconditional, expanded to (a -> b) & (b -> a)."""
    return And(Implies(a, b), Implies(b, a))


def not_e(e: Formula, a: Formula) -> Formula:
    """Negation relative to e: a -> e."""
    return Implies(a, e)


def not_e_n(e: Formula, n: int, a: Formula) -> Formula:
    """n-fold application of not_e."""
    if n < 0:
        raise ValueError("negation count must be nonnegative")
    for _ in range(n):
        a = Implies(a, e)
    return a


# Printing. Precedence: quantifiers 0, -> 1, | 2, & 3, prefix operators 4,
# atomic 5. A quantifier may stand bare in a position that extends to the end
# of the enclosing scope, since its body swallows everything to the right.

_PREFIX_PREC = 4


def _prec(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return 0
    if isinstance(f, Implies):
        if isinstance(f.right, Bot):
            return _PREFIX_PREC
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    if isinstance(f, (Box, Prf)):
        return _PREFIX_PREC
    return 5


def _fmt(f: Formula, min_prec: int, final: bool) -> str:
    prec = _prec(f)
    if prec < min_prec and not (final and prec == 0):
        return f"({_fmt(f, 0, True)})"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Atom):
        if f.args:
            return f"{f.pred}({', '.join(str(a) for a in f.args)})"
        if f.pred[0].isupper():
            return f"{f.pred}()"
        return f.pred
    if isinstance(f, Eq):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"{kw} {f.var}. {_fmt(f.body, 0, True)}"
    if isinstance(f, Box):
        return "[]" + _fmt(f.body, _PREFIX_PREC, final)
    if isinstance(f, Prf):
        return "prf " + _fmt(f.body, _PREFIX_PREC, final)
    if isinstance(f, Implies):
        operand = as_diamond(f)
        if operand is not None:
            return "<>" + _fmt(operand, _PREFIX_PREC, final)
        operand = as_negation(f)
        if operand is not None:
            return "~" + _fmt(operand, _PREFIX_PREC, final)
        return f"{_fmt(f.left, 2, False)} -> {_fmt(f.right, 1, final)}"
    if isinstance(f, Or):
        return f"{_fmt(f.left, 3, False)} | {_fmt(f.right, 2, final)}"
    if isinstance(f, And):
        return f"{_fmt(f.left, 4, False)} & {_fmt(f.right, 3, final)}"
    raise TypeError(f"not a formula: {f!r}")


def formula_size(f: Formula) -> int:
    """Number of AST nodes, terms included."""
    return f._size


def canonical_key(f: Formula) -> tuple[int, str]:
    """Sort key for the canonical formula order: node count, then printed form."""
    return (f._size, str(f))


def sort_formulas(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=canonical_key)


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Or, And, Implies)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    if isinstance(f, (Box, Prf)):
        return (f.body,)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Yield every distinct subformula once, sharing-aware."""
    seen: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(_children(node))


def subformulas(f: Formula) -> list[Formula]:
    """All subformulas of f including f itself, deduplicated, in canonical order."""
    distinct: dict[Formula, None] = {}
    for node in walk(f):
        distinct.setdefault(node, None)
    return sort_formulas(distinct)


def contains_box(f: Formula) -> bool:
    return any(isinstance(n, Box) for n in walk(f))


def contains_prf(f: Formula) -> bool:
    return any(isinstance(n, Prf) for n in walk(f))


def is_propositional(f: Formula) -> bool:
    """True when f has no quantifier, no equality, and only zero-place atoms."""
    for node in walk(f):
        if isinstance(node, (Forall, Exists, Eq)):
            return False
        if isinstance(node, Atom) and node.args:
            return False
    return True


@dataclass(frozen=True, eq=False, repr=False)
class GammaContext:
    """A finite nonempty set of formulas with one member distinguished.

    The member list is kept deduplicated and in canonical order; e_index points
    at the distinguished formula that relative negation is taken against.
    """

    gamma: tuple[Formula, ...]
    e_index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", tuple(self.gamma))
        if not self.gamma:
            raise ValueError("gamma must be nonempty")
        if len(set(self.gamma)) != len(self.gamma):
            raise ValueError("gamma must not contain duplicates")
        keys = [canonical_key(g) for g in self.gamma]
        if keys != sorted(keys):
            raise ValueError("gamma must be in canonical order")
        if not 0 <= self.e_index < len(self.gamma):
            raise ValueError("e_index out of range")

    @classmethod
    def make(cls, formulas: Iterable[Formula], e: Formula) -> "GammaContext":
        """Build a context from any iterable: deduplicate, sort, locate e."""
        distinct: dict[Formula, None] = {}
        for f in formulas:
            distinct.setdefault(f, None)
        ordered = sort_formulas(distinct)
        try:
            idx = ordered.index(e)
        except ValueError:
            raise ValueError(f"distinguished formula {e} is not a member of gamma") from None
        return cls(tuple(ordered), idx)

    @property
    def e(self) -> Formula:
        return self.gamma[self.e_index]

    def with_e(self, e: Formula) -> "GammaContext":
        """Same member set with a different distinguished formula."""
        try:
            idx = self.gamma.index(e)
        except ValueError:
            raise ValueError(f"{e} is not a member of gamma") from None
        return GammaContext(self.gamma, idx)

    def __str__(self) -> str:
        members = ", ".join(str(g) for g in self.gamma)
        return f"[{members}] with E = {self.e}"

    def __repr__(self) -> str:
        return str(self)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GammaContext)
            and self.gamma == other.gamma
            and self.e_index == other.e_index
        )

    def __hash__(self) -> int:
        return hash((self.gamma, self.e_index))


def conj_over(ctx: GammaContext, fn: Callable[[Formula], Formula]) -> Formula:
    """Right-associated conjunction of fn(C) over the members of ctx in order.

    A singleton context yields fn(C) bare, with no conjunction node.
    """
    parts = [fn(c) for c in ctx.gamma]
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = And(part, result)
    return result
