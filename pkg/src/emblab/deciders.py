"""Decision procedures for propositional CPC, IPC, and S4, with countermodels.

CPC is decided by exhaustive valuation.  IPC uses a contraction-free sequent
calculus whose left-implication rule splits four ways on the shape of the
antecedent; search terminates without loop checking.  S4 uses backward search
in a set-based sequent calculus where boxed goals jump to a new world, with a
loop check on the jump sequents of the current branch.

Every search counts node expansions against a budget and raises
BudgetExhausted instead of guessing, so a returned verdict is always real.
"""

from __future__ import annotations

import itertools
import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

from .syntax import (
    And,
    Atom,
    BOT,
    Bot,
    Box,
    Formula,
    Implies,
    Or,
    UnsupportedFormula,
    contains_box,
    contains_prf,
    iff,
    is_propositional,
    walk,
)

DEFAULT_BUDGET = 10**6

Logic = Literal["cpc", "ipc", "s4"]
LOGICS: tuple[str, ...] = ("cpc", "ipc", "s4")


class BudgetExhausted(Exception):
    """The search hit its node-expansion budget before reaching a verdict."""

    def __init__(self, spent: int) -> None:
        super().__init__(f"search budget exhausted after {spent} node expansions")
        self.spent = spent


class _Counter:
    __slots__ = ("spent", "limit")

    def __init__(self, limit: int) -> None:
        self.spent = 0
        self.limit = limit

    def bump(self) -> None:
        self.spent += 1
        if self.spent > self.limit:
            raise BudgetExhausted(self.spent)


@dataclass(frozen=True)
class Sequent:
    """Assumptions and a goal, all propositional; Prf never occurs here."""

    assumptions: tuple[Formula, ...]
    goal: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "assumptions", tuple(self.assumptions))
        for f in (*self.assumptions, self.goal):
            if not is_propositional(f):
                raise UnsupportedFormula("sequents must be propositional")
            if contains_prf(f):
                raise UnsupportedFormula("sequents must not contain the provability operator")

    def implication_form(self) -> Formula:
        """The single formula: conjunction of assumptions implying the goal."""
        if not self.assumptions:
            return self.goal
        conj = self.assumptions[-1]
        for a in reversed(self.assumptions[:-1]):
            conj = And(a, conj)
        return Implies(conj, self.goal)

    def __str__(self) -> str:
        if not self.assumptions:
            return f"|- {self.goal}"
        return f"{', '.join(str(a) for a in self.assumptions)} |- {self.goal}"


@dataclass(frozen=True)
class KripkeModel:
    """A finite Kripke model; worlds are 0..n-1 and order is the full relation."""

    worlds: tuple[int, ...]
    order: frozenset[tuple[int, int]]
    valuation: Mapping[int, frozenset[str]]
    designated: int

    def to_json_dict(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "order": sorted(list(pair) for pair in self.order),
            "valuation": {str(w): sorted(self.valuation.get(w, frozenset())) for w in self.worlds},
            "designated": self.designated,
        }


@dataclass(frozen=True)
class Verdict:
    provable: bool
    countermodel: KripkeModel | None
    stats: int


def _fast_key(f: Formula) -> tuple[int, int]:
    return (f._size, f._fp)  # type: ignore[attr-defined]


def _sequent_atoms(seq: Sequent) -> list[str]:
    names: set[str] = set()
    for f in (*seq.assumptions, seq.goal):
        for node in walk(f):
            if isinstance(node, Atom):
                names.add(node.pred)
    return sorted(names)


def _reject_box(seq: Sequent, logic: str) -> None:
    for f in (*seq.assumptions, seq.goal):
        if contains_box(f):
            raise UnsupportedFormula(f"{logic} does not admit the necessity operator")


# ---------------------------------------------------------------------------
# classical propositional logic


def _eval_classical(f: Formula, true_atoms: frozenset[str], memo: dict) -> bool:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = f.pred in true_atoms
    elif isinstance(f, Bot):
        out = False
    elif isinstance(f, And):
        out = _eval_classical(f.left, true_atoms, memo) and _eval_classical(f.right, true_atoms, memo)
    elif isinstance(f, Or):
        out = _eval_classical(f.left, true_atoms, memo) or _eval_classical(f.right, true_atoms, memo)
    elif isinstance(f, Implies):
        out = (not _eval_classical(f.left, true_atoms, memo)) or _eval_classical(f.right, true_atoms, memo)
    else:
        raise UnsupportedFormula(f"not a classical propositional formula: {type(f).__name__}")
    memo[f] = out
    return out


def decide_cpc(seq: Sequent, budget: int | None = None, want_countermodel: bool = True) -> Verdict:
    """Decide a classical sequent by checking every valuation of its atoms."""
    _reject_box(seq, "cpc")
    limit = DEFAULT_BUDGET if budget is None else budget
    atoms = _sequent_atoms(seq)
    if 1 << len(atoms) > limit:
        raise BudgetExhausted(1 << len(atoms))
    counter = _Counter(limit)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        counter.bump()
        true_atoms = frozenset(a for a, b in zip(atoms, bits) if b)
        memo: dict = {}
        if all(_eval_classical(a, true_atoms, memo) for a in seq.assumptions):
            if not _eval_classical(seq.goal, true_atoms, memo):
                model = None
                if want_countermodel:
                    model = KripkeModel(
                        worlds=(0,),
                        order=frozenset({(0, 0)}),
                        valuation={0: true_atoms},
                        designated=0,
                    )
                return Verdict(False, model, counter.spent)
    return Verdict(True, None, counter.spent)


# ---------------------------------------------------------------------------
# classical projection masks

# A formula's mask has bit v set when the formula is true under valuation v,
# where bit i of v gives the i-th atom's value and Box projects to its body
# (one reflexive world).  Provability implies classical validity in both IPC
# and S4, so a sequent whose mask projection is falsifiable is refutable at
# once; this prunes most dead branches of the searches.

_MASK_ATOM_CAP = 12


class _Masks:
    __slots__ = ("atom_bit", "full", "memo")

    def __init__(self, atoms: list[str]) -> None:
        n = len(atoms)
        count = 1 << n
        self.full = (1 << count) - 1
        self.atom_bit = {}
        for i, name in enumerate(atoms):
            mask = 0
            for v in range(count):
                if (v >> i) & 1:
                    mask |= 1 << v
            self.atom_bit[name] = mask
        self.memo: dict = {}

    def of(self, f: Formula) -> int:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            out = self.atom_bit[f.pred]
        elif isinstance(f, Bot):
            out = 0
        elif isinstance(f, And):
            out = self.of(f.left) & self.of(f.right)
        elif isinstance(f, Or):
            out = self.of(f.left) | self.of(f.right)
        elif isinstance(f, Implies):
            out = (self.full ^ self.of(f.left)) | self.of(f.right)
        elif isinstance(f, Box):
            out = self.of(f.body)
        else:
            raise UnsupportedFormula(f"not a propositional modal formula: {type(f).__name__}")
        self.memo[f] = out
        return out

    def falsifying(self, left, right) -> int | None:
        """The least valuation making all of left true and all of right false."""
        acc = self.full
        for f in left:
            acc &= self.of(f)
            if not acc:
                return None
        for f in right:
            acc &= self.full ^ self.of(f)
            if not acc:
                return None
        return (acc & -acc).bit_length() - 1

    def true_atoms(self, valuation: int) -> frozenset[str]:
        return frozenset(
            name for i, name in enumerate(self.atom_bit) if (valuation >> i) & 1
        )


def _masks_for(seq: Sequent) -> _Masks | None:
    atoms = _sequent_atoms(seq)
    if len(atoms) > _MASK_ATOM_CAP:
        return None
    return _Masks(atoms)


# ---------------------------------------------------------------------------
# intuitionistic propositional logic (contraction-free calculus)

_FILTER_VALUATION_CAP = 1 << 12


class _FrameMasks:
    """Forcing tables for every monotone valuation over one small rooted poset.

    Bit v of table[w] says the formula is forced at world w under the
    valuation whose digit i (base: number of upsets) picks the upset
    assigned to atom i.  Tables for compound formulas come from pointwise
    bit operations, with implication folding over successor worlds.
    """

    __slots__ = ("succ", "atom_tables", "zero", "full", "memo")

    def __init__(
        self,
        atoms: list[str],
        worlds: tuple[int, ...],
        order: tuple[tuple[int, int], ...],
        upsets: tuple[frozenset[int], ...],
    ) -> None:
        self.succ = tuple(tuple(b for a, b in order if a == w) for w in worlds)
        base = len(upsets)
        count = base ** len(atoms)
        self.full = (1 << count) - 1
        self.zero = (0,) * len(worlds)
        self.atom_tables = {}
        for i, name in enumerate(atoms):
            step = base**i
            tables = [0] * len(worlds)
            for v in range(count):
                for w in upsets[(v // step) % base]:
                    tables[w] |= 1 << v
            self.atom_tables[name] = tuple(tables)
        self.memo: dict = {}

    def of(self, f: Formula) -> tuple[int, ...]:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            out = self.atom_tables[f.pred]
        elif isinstance(f, Bot):
            out = self.zero
        elif isinstance(f, And):
            out = tuple(a & b for a, b in zip(self.of(f.left), self.of(f.right)))
        elif isinstance(f, Or):
            out = tuple(a | b for a, b in zip(self.of(f.left), self.of(f.right)))
        elif isinstance(f, Implies):
            full = self.full
            point = [
                (full ^ a) | b for a, b in zip(self.of(f.left), self.of(f.right))
            ]
            forced = []
            for later in self.succ:
                acc = full
                for w in later:
                    acc &= point[w]
                forced.append(acc)
            out = tuple(forced)
        else:
            raise UnsupportedFormula(
                f"not an intuitionistic propositional formula: {type(f).__name__}"
            )
        self.memo[f] = out
        return out

    def refutes(self, gamma, goal: Formula) -> bool:
        acc = self.full
        for f in gamma:
            acc &= self.of(f)[0]
            if not acc:
                return False
        return bool(acc & (self.full ^ self.of(goal)[0]))


def _upsets(worlds: tuple[int, ...], order: tuple[tuple[int, int], ...]) -> tuple[frozenset[int], ...]:
    later = {w: [b for a, b in order if a == w and b != w] for w in worlds}
    found = []
    for picks in itertools.product((False, True), repeat=len(worlds)):
        chosen = frozenset(w for w, p in zip(worlds, picks) if p)
        if all(b in chosen for w in chosen for b in later[w]):
            found.append(chosen)
    return tuple(found)


def _filter_shapes():
    extra_orders = (
        # four-chain
        ((0, 1), (1, 2), (2, 3)),
        # diamond: two incomparable middles under a common top
        ((0, 1), (0, 2), (1, 3), (2, 3)),
        # fork after one step
        ((0, 1), (1, 2), (1, 3)),
        # three-pronged star
        ((0, 1), (0, 2), (0, 3)),
    )
    shapes = [(worlds, order, upsets) for worlds, order, upsets in _IPC_SHAPES]
    worlds = (0, 1, 2, 3)
    for strict in extra_orders:
        closure = set((w, w) for w in worlds) | set(strict)
        changed = True
        while changed:
            changed = False
            for a, b in list(closure):
                for c, d in list(closure):
                    if b == c and (a, d) not in closure:
                        closure.add((a, d))
                        changed = True
        order = tuple(sorted(closure))
        shapes.append((worlds, order, _upsets(worlds, order)))
    return tuple(shapes)


class _IPCFilter:
    """Sound unprovability check: search for a countermodel on small frames.

    A sequent whose assumptions are all forced at the root while the goal
    is not, on any frame under any monotone valuation, has no proof.  The
    converse fails, so a miss says nothing.  Root forcing masks for whole
    assumption sets are cached, since branch siblings share them.
    """

    __slots__ = ("frames", "gacc")

    def __init__(self, atoms: list[str]) -> None:
        self.frames = tuple(
            _FrameMasks(atoms, worlds, order, upsets)
            for worlds, order, upsets in _FILTER_SHAPES
            if len(upsets) ** len(atoms) <= _FILTER_VALUATION_CAP
        )
        self.gacc: tuple[dict, ...] = tuple({} for _ in self.frames)

    def refutes(self, gamma: frozenset, goal: Formula) -> bool:
        for frame, cache in zip(self.frames, self.gacc):
            acc = cache.get(gamma)
            if acc is None:
                acc = frame.full
                for f in gamma:
                    acc &= frame.of(f)[0]
                cache[gamma] = acc
            if acc & (frame.full ^ frame.of(goal)[0]):
                return True
        return False


class _IPCState:
    """Search state with a subsumption memo.

    Provability is monotone in the assumption set, so a proved goal stays
    proved with extra assumptions and a refuted goal stays refuted with
    fewer.  Assumption sets become bitmasks over formulas seen so far;
    lookups test mask inclusion against per-goal lists kept most recent
    first, with exact repeats answered from a plain dict.
    """

    __slots__ = (
        "counter",
        "flt",
        "bit",
        "formulas",
        "gmasks",
        "exact",
        "proved",
        "refuted",
        "imps",
        "filter_on",
        "filter_probes",
        "filter_hits",
    )

    _ANTICHAIN_CAP = 1024
    _FILTER_PROBE_CAP = 2048

    def __init__(self, counter: _Counter, flt: _IPCFilter) -> None:
        self.counter = counter
        self.flt = flt
        self.bit: dict = {}
        self.formulas: list[Formula] = []
        self.gmasks: dict = {}
        self.exact: dict = {}
        self.proved: dict = {}
        self.refuted: dict = {}
        self.imps: dict = {}
        self.filter_on = bool(flt.frames)
        self.filter_probes = 0
        self.filter_hits = 0

    def imp(self, ant: Formula, con: Formula) -> Formula:
        # reuse one object per implication so set and dict operations stay
        # on the identity fast path instead of re-walking equal structure
        key = (ant, con)
        f = self.imps.get(key)
        if f is None:
            f = Implies(ant, con)
            self.imps[key] = f
        return f

    def bit_of(self, f: Formula) -> int:
        b = self.bit.get(f)
        if b is None:
            b = 1 << len(self.formulas)
            self.bit[f] = b
            self.formulas.append(f)
        return b

    def mask(self, gamma: frozenset) -> int:
        out = self.gmasks.get(gamma)
        if out is None:
            bit = self.bit
            out = 0
            for f in gamma:
                b = bit.get(f)
                if b is None:
                    b = self.bit_of(f)
                out |= b
            self.gmasks[gamma] = out
        return out

    def lookup(self, gmask: int, goal: Formula) -> tuple[bool, int] | None:
        # inclusion tests are written without ~x so no negative big int is
        # allocated per scanned element
        hit = self.exact.get((gmask, goal))
        if hit is not None:
            return hit
        kept = self.proved.get(goal)
        if kept:
            for i, s in enumerate(kept):
                if s & gmask == s:
                    if i:
                        kept.insert(0, kept.pop(i))
                    return (True, s)
        kept = self.refuted.get(goal)
        if kept:
            for i, m in enumerate(kept):
                if gmask & m == gmask:
                    if i:
                        kept.insert(0, kept.pop(i))
                    return (False, 0)
        return None

    def store(self, gmask: int, goal: Formula, result: bool, support: int) -> None:
        self.exact[(gmask, goal)] = (result, support)
        table = self.proved if result else self.refuted
        new = support if result else gmask
        kept = table.get(goal)
        if kept is None:
            table[goal] = [new]
            return
        if kept[0] == new:
            return
        if len(kept) < 32:
            kept.insert(0, new)
            return
        # once a list grows, keep it an antichain: a proved entry is the
        # assumptions a proof needs, so a subset answers strictly more
        # contexts; a refuted entry is a whole context, so a superset does
        survivors = []
        dominated = False
        if result:
            for s in kept:
                if s & new == s:
                    dominated = True
                    survivors = kept
                    break
                if new & s != new:
                    survivors.append(s)
        else:
            for m in kept:
                if new & m == new:
                    dominated = True
                    survivors = kept
                    break
                if m & new != m:
                    survivors.append(m)
        if not dominated:
            survivors.insert(0, new)
            if len(survivors) > self._ANTICHAIN_CAP:
                del survivors[self._ANTICHAIN_CAP // 2 :]
        table[goal] = survivors


def _g4ip(gamma: frozenset, goal: Formula, st: _IPCState) -> tuple[bool, int]:
    """Prove gamma => goal; a proved result also names a sufficient subset.

    The second component of a proved result is the bitmask of assumptions
    the found proof consumed.  Storing that instead of the whole context
    lets the memo answer every later sequent that still contains it.
    """
    entry_goal = goal
    gmask = st.mask(gamma)
    hit = st.lookup(gmask, entry_goal)
    if hit is not None:
        return hit
    st.counter.bump()
    if st.filter_on:
        st.filter_probes += 1
        if st.flt.refutes(gamma, goal):
            st.filter_hits += 1
            st.store(gmask, entry_goal, False, 0)
            return False, 0
        if st.filter_probes >= st._FILTER_PROBE_CAP and not st.filter_hits:
            # a search that has never been cut short by the frame check is
            # spending most of its time on provable subgoals; stop paying
            # for the check and let the calculus refute the rare failures
            st.filter_on = False

    # saturation with a worklist: every non-branching rule fires once per
    # membership trigger, so rewriting the context is near-linear.  Each
    # step swaps a formula for cut-equivalent material, so the saturated
    # sequent is provable exactly when the original is.  prov tracks, per
    # derived formula, which entry assumptions sit beneath it; material
    # unfolded from the goal side carries no assumption at all.
    g: set = set()
    prov: dict = {}
    queue: deque = deque()
    by_ant: dict = {}
    by_con: dict = {}
    by_part: dict = {}

    def add(x: Formula, p: int) -> None:
        if x in g:
            return
        g.add(x)
        prov[x] = p
        queue.append(x)
        for f in by_con.pop(x, ()):
            g.discard(f)
        for f in by_ant.pop(x, ()):
            if f in g:
                fp = prov[f]
                g.discard(f)
                add(f.right, fp | p)
        for f in by_part.pop(x, ()):
            g.discard(f)

    def examine(f: Formula) -> None:
        if f not in g:
            return
        p = prov[f]
        if isinstance(f, And):
            g.discard(f)
            add(f.left, p)
            add(f.right, p)
        elif isinstance(f, Or):
            if f.left in g or f.right in g:
                g.discard(f)
            else:
                by_part.setdefault(f.left, []).append(f)
                by_part.setdefault(f.right, []).append(f)
        elif isinstance(f, Implies):
            ant, con = f.left, f.right
            if isinstance(ant, Bot) or con in g:
                g.discard(f)
            elif ant in g:
                g.discard(f)
                add(con, p | prov[ant])
            elif isinstance(ant, And):
                g.discard(f)
                add(st.imp(ant.left, st.imp(ant.right, con)), p)
            elif isinstance(ant, Or):
                g.discard(f)
                add(st.imp(ant.left, con), p)
                add(st.imp(ant.right, con), p)
            else:
                by_ant.setdefault(ant, []).append(f)
                by_con.setdefault(con, []).append(f)

    for f in sorted(gamma, key=_fast_key):
        add(f, st.bit_of(f))

    result: bool | None = None
    support = 0
    while True:
        if BOT in g:
            result, support = True, prov[BOT]
            break
        if goal in g:
            result, support = True, prov[goal]
            break
        if isinstance(goal, Implies):
            add(goal.left, 0)
            goal = goal.right
            continue
        if queue:
            while queue:
                examine(queue.popleft())
            continue
        break

    def back(child_support: int, moved: dict) -> int:
        # map a premise proof's support onto this call's assumptions
        out = 0
        m = child_support
        while m:
            low = m & -m
            m ^= low
            f = st.formulas[low.bit_length() - 1]
            p = moved.get(f)
            out |= prov.get(f, 0) if p is None else p
        return out

    if result is None:
        frozen = frozenset(g)
        if isinstance(goal, And):
            ok, s1 = _g4ip(frozen, goal.left, st)
            if ok:
                ok, s2 = _g4ip(frozen, goal.right, st)
                if ok:
                    result = True
                    support = back(s1, {}) | back(s2, {})
            if result is None:
                result = False
        else:
            disjunctions = sorted((f for f in g if isinstance(f, Or)), key=_fast_key)
            if disjunctions:
                d = disjunctions[0]
                rest = frozen - {d}
                pd = prov[d]
                ok, s1 = _g4ip(rest | {d.left}, goal, st)
                if ok:
                    ok, s2 = _g4ip(rest | {d.right}, goal, st)
                    if ok:
                        result = True
                        support = back(s1, {d.left: pd}) | back(s2, {d.right: pd})
                if result is None:
                    result = False
            else:
                result = False
                if isinstance(goal, Or):
                    ok, s = _g4ip(frozen, goal.left, st)
                    if not ok:
                        ok, s = _g4ip(frozen, goal.right, st)
                    if ok:
                        result = True
                        support = back(s, {})
                if not result:
                    # candidates that conclude the goal outright come first,
                    # then those with small consequents
                    nested = sorted(
                        (
                            f
                            for f in g
                            if isinstance(f, Implies) and isinstance(f.left, Implies)
                        ),
                        key=lambda f: (f.right != goal, f.right._size, _fast_key(f)),
                    )
                    for f in nested:
                        c = f.right
                        rest = frozen - {f}
                        pf = prov[f]
                        ok, s2 = _g4ip(rest | {c}, goal, st)
                        if not ok:
                            # this premise is invertible: its context plus c
                            # rebuilds f, so refuting it refutes the sequent
                            break
                        residue = st.imp(f.left.right, c)
                        ok, s1 = _g4ip(rest | {residue}, f.left, st)
                        if ok:
                            result = True
                            support = (
                                pf
                                | back(s2, {c: pf})
                                | back(s1, {residue: pf})
                            )
                            break

    st.store(gmask, entry_goal, result, support)
    return result, support


# small-model enumeration for IPC countermodels: rooted posets on up to three
# worlds with all monotone valuations, tried smallest first

_IPC_SHAPES: tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...], tuple[frozenset[int], ...]], ...] = (
    ((0,), ((0, 0),), (frozenset(), frozenset({0}))),
    (
        (0, 1),
        ((0, 0), (1, 1), (0, 1)),
        (frozenset(), frozenset({1}), frozenset({0, 1})),
    ),
    (
        (0, 1, 2),
        ((0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)),
        (frozenset(), frozenset({2}), frozenset({1, 2}), frozenset({0, 1, 2})),
    ),
    (
        (0, 1, 2),
        ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2)),
        (
            frozenset(),
            frozenset({1}),
            frozenset({2}),
            frozenset({1, 2}),
            frozenset({0, 1, 2}),
        ),
    ),
)

_COUNTERMODEL_SIZE_CAP = 400
_COUNTERMODEL_ATOM_CAP = 4

_FILTER_SHAPES = _filter_shapes()


def _ipc_forces(f: Formula, world: int, succ: Mapping[int, tuple[int, ...]], val: Mapping[int, frozenset[str]], memo: dict) -> bool:
    key = (f, world)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = f.pred in val[world]
    elif isinstance(f, Bot):
        out = False
    elif isinstance(f, And):
        out = _ipc_forces(f.left, world, succ, val, memo) and _ipc_forces(f.right, world, succ, val, memo)
    elif isinstance(f, Or):
        out = _ipc_forces(f.left, world, succ, val, memo) or _ipc_forces(f.right, world, succ, val, memo)
    elif isinstance(f, Implies):
        out = all(
            (not _ipc_forces(f.left, w, succ, val, memo)) or _ipc_forces(f.right, w, succ, val, memo)
            for w in succ[world]
        )
    else:
        raise UnsupportedFormula(f"not an intuitionistic propositional formula: {type(f).__name__}")
    memo[key] = out
    return out


def _small_ipc_countermodel(seq: Sequent) -> KripkeModel | None:
    total = sum(f._size for f in (*seq.assumptions, seq.goal))  # type: ignore[attr-defined]
    if total > _COUNTERMODEL_SIZE_CAP:
        return None
    atoms = _sequent_atoms(seq)
    if len(atoms) > _COUNTERMODEL_ATOM_CAP:
        return None
    for worlds, order, upsets in _IPC_SHAPES:
        succ = {w: tuple(b for a, b in order if a == w) for w in worlds}
        for choice in itertools.product(upsets, repeat=len(atoms)):
            val = {w: frozenset(a for a, up in zip(atoms, choice) if w in up) for w in worlds}
            memo: dict = {}
            if all(_ipc_forces(a, 0, succ, val, memo) for a in seq.assumptions) and not _ipc_forces(
                seq.goal, 0, succ, val, memo
            ):
                return KripkeModel(
                    worlds=tuple(worlds),
                    order=frozenset(order),
                    valuation=val,
                    designated=0,
                )
    return None


def decide_ipc(seq: Sequent, budget: int | None = None, want_countermodel: bool = True) -> Verdict:
    """Decide an intuitionistic sequent; countermodel emission is best-effort."""
    _reject_box(seq, "ipc")
    limit = DEFAULT_BUDGET if budget is None else budget
    counter = _Counter(limit)
    st = _IPCState(counter, _IPCFilter(_sequent_atoms(seq)))
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20000))
    try:
        provable, _ = _g4ip(frozenset(seq.assumptions), seq.goal, st)
    except RecursionError:
        raise BudgetExhausted(counter.spent) from None
    finally:
        sys.setrecursionlimit(old_limit)
    model = None
    if not provable and want_countermodel:
        model = _small_ipc_countermodel(seq)
        if model is not None and check_model(model, seq.implication_form(), "ipc") != "refutes":
            raise RuntimeError("internal error: emitted countermodel does not refute the sequent")
    return Verdict(provable, model, counter.spent)


# ---------------------------------------------------------------------------
# S4


class _LoopMarker:
    __repr__ = lambda self: "<loop>"  # noqa: E731


_LOOP = _LoopMarker()


@dataclass
class _Fragment:
    """One refuting world plus, per boxed goal, the jump it sends away to."""

    atoms: frozenset[str]
    children: list  # (jump_key, _Fragment | _LOOP)


class _S4State:
    __slots__ = ("memo_true", "memo_false", "counter", "want_model", "masks")

    def __init__(self, counter: _Counter, want_model: bool, masks: _Masks | None) -> None:
        self.memo_true: set = set()
        self.memo_false: dict = {}
        self.counter = counter
        self.want_model = want_model
        self.masks = masks


_EMPTY: frozenset = frozenset()


def _prove_s4(left: frozenset, right: frozenset, path: frozenset, st: _S4State):
    """Return (provable, deps, fragment).

    deps is the set of jump sequents on the path that a refutation leaned on
    by hitting them as loops; the refutation may be reused under any path that
    still contains all of them.  A proof never leans on the path: True results
    always come back with empty deps and are cached globally.
    """
    orig = (left, right)
    if orig in st.memo_true:
        return True, _EMPTY, None
    hit = st.memo_false.get(orig)
    if hit is not None and hit[0] <= path:
        return False, hit[0], hit[1]
    st.counter.bump()
    if st.masks is not None:
        v = st.masks.falsifying(left, right)
        if v is not None:
            frag = _Fragment(st.masks.true_atoms(v), []) if st.want_model else None
            st.memo_false[orig] = (_EMPTY, frag)
            return False, _EMPTY, frag

    # all rules keep their principal formula; a rule fires only while it would
    # add something, so sequents grow inside the finite subformula universe
    lset = set(left)
    rset = set(right)
    provable = None

    while provable is None:
        if BOT in lset or lset & rset:
            provable = True
            break
        applied = False
        for f in sorted(lset, key=_fast_key):
            if isinstance(f, And) and not (f.left in lset and f.right in lset):
                lset.add(f.left)
                lset.add(f.right)
                applied = True
                break
            if isinstance(f, Box) and f.body not in lset:
                lset.add(f.body)
                applied = True
                break
        if not applied:
            for f in sorted(rset, key=_fast_key):
                if isinstance(f, Or) and not (f.left in rset and f.right in rset):
                    rset.add(f.left)
                    rset.add(f.right)
                    applied = True
                    break
                if isinstance(f, Implies) and not (f.left in lset and f.right in rset):
                    lset.add(f.left)
                    rset.add(f.right)
                    applied = True
                    break
        if not applied:
            break

    if provable is None:
        lfrozen = frozenset(lset)
        rfrozen = frozenset(rset)

        premises = None
        for f in sorted(lset, key=_fast_key):
            if isinstance(f, Or) and f.left not in lset and f.right not in lset:
                premises = [(lfrozen | {f.left}, rfrozen), (lfrozen | {f.right}, rfrozen)]
                break
            if isinstance(f, Implies) and f.left not in rset and f.right not in lset:
                premises = [(lfrozen, rfrozen | {f.left}), (lfrozen | {f.right}, rfrozen)]
                break
        if premises is None:
            for f in sorted(rset, key=_fast_key):
                if isinstance(f, And) and f.left not in rset and f.right not in rset:
                    premises = [(lfrozen, rfrozen | {f.left}), (lfrozen, rfrozen | {f.right})]
                    break

        if premises is not None:
            for pl, pr in premises:
                ok, deps, frag = _prove_s4(pl, pr, path, st)
                if not ok:
                    st.memo_false[orig] = (deps, frag)
                    return False, deps, frag
            st.memo_true.add(orig)
            return True, _EMPTY, None

        # saturated: every connective rule is satisfied, only jumps remain
        boxes_left = frozenset(f for f in lset if isinstance(f, Box))
        jump_bodies = sorted((f.body for f in rset if isinstance(f, Box)), key=_fast_key)
        children = []
        all_deps: frozenset = _EMPTY
        for body in jump_bodies:
            jump_key = (boxes_left, body)
            if jump_key in path:
                children.append((jump_key, _LOOP))
                all_deps = all_deps | {jump_key}
                continue
            ok, deps, frag = _prove_s4(boxes_left, frozenset({body}), path | {jump_key}, st)
            if ok:
                st.memo_true.add(orig)
                return True, _EMPTY, None
            # a loop back to this very jump is discharged here, not above
            all_deps = all_deps | (deps - {jump_key})
            children.append((jump_key, frag))
        atoms = frozenset(f.pred for f in lset if isinstance(f, Atom))
        frag = _Fragment(atoms, children) if st.want_model else None
        st.memo_false[orig] = (all_deps, frag)
        return False, all_deps, frag

    st.memo_true.add(orig)
    return True, _EMPTY, None


def _assemble_s4_model(fragment: _Fragment) -> KripkeModel:
    valuations: list[frozenset[str]] = []
    edges: set[tuple[int, int]] = set()

    def build(frag: _Fragment, env: dict) -> int:
        wid = len(valuations)
        valuations.append(frag.atoms)
        for jump_key, child in frag.children:
            if child is _LOOP:
                edges.add((wid, env[jump_key]))
            else:
                child_env = dict(env)
                child_env[jump_key] = len(valuations)
                cid = build(child, child_env)
                edges.add((wid, cid))
        return wid

    root = build(fragment, {})
    n = len(valuations)
    closed = set(edges)
    for w in range(n):
        closed.add((w, w))
    changed = True
    while changed:
        changed = False
        for a, b in list(closed):
            for c, d in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    return KripkeModel(
        worlds=tuple(range(n)),
        order=frozenset(closed),
        valuation={w: valuations[w] for w in range(n)},
        designated=root,
    )


def decide_s4(seq: Sequent, budget: int | None = None, want_countermodel: bool = True) -> Verdict:
    """Decide a propositional S4 sequent under local consequence."""
    limit = DEFAULT_BUDGET if budget is None else budget
    counter = _Counter(limit)
    st = _S4State(counter, want_countermodel, _masks_for(seq))
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20000))
    try:
        ok, _, frag = _prove_s4(frozenset(seq.assumptions), frozenset({seq.goal}), _EMPTY, st)
    except RecursionError:
        raise BudgetExhausted(counter.spent) from None
    finally:
        sys.setrecursionlimit(old_limit)
    model = None
    if not ok and want_countermodel and frag is not None:
        model = _assemble_s4_model(frag)
        if check_model(model, seq.implication_form(), "s4") != "refutes":
            raise RuntimeError("internal error: emitted countermodel does not refute the sequent")
    return Verdict(ok, model, counter.spent)


# ---------------------------------------------------------------------------
# shared entry points


def decide(seq: Sequent, logic: str, budget: int | None = None, want_countermodel: bool = True) -> Verdict:
    """Dispatch to the decider named by logic: one of cpc, ipc, s4."""
    if logic == "cpc":
        return decide_cpc(seq, budget, want_countermodel)
    if logic == "ipc":
        return decide_ipc(seq, budget, want_countermodel)
    if logic == "s4":
        return decide_s4(seq, budget, want_countermodel)
    raise ValueError(f"unknown logic {logic!r}, expected one of {', '.join(LOGICS)}")


def mutually_derivable(a: Formula, b: Formula, logic: str, budget: int | None = None) -> bool:
    """True when each formula is derivable from the other in the given logic."""
    forward = decide(Sequent((a,), b), logic, budget, want_countermodel=False)
    if not forward.provable:
        return False
    backward = decide(Sequent((b,), a), logic, budget, want_countermodel=False)
    return backward.provable


def check_stability(a: Formula, budget: int | None = None) -> bool:
    """True when a and its necessitation are S4-equivalent."""
    return decide_s4(Sequent((), iff(a, Box(a))), budget, want_countermodel=False).provable


# ---------------------------------------------------------------------------
# model checking


def _validate_frame(model: KripkeModel, semantics: str) -> None:
    worlds = set(model.worlds)
    if not worlds:
        raise ValueError("model must have at least one world")
    if len(worlds) != len(model.worlds):
        raise ValueError("world ids must be distinct")
    if model.designated not in worlds:
        raise ValueError("designated world is not a world")
    for a, b in model.order:
        if a not in worlds or b not in worlds:
            raise ValueError("order relates unknown worlds")
    for w in model.valuation:
        if w not in worlds:
            raise ValueError("valuation mentions unknown worlds")
    order = model.order
    for w in worlds:
        if (w, w) not in order:
            raise ValueError("order must be reflexive")
    for a, b in order:
        for c, d in order:
            if b == c and (a, d) not in order:
                raise ValueError("order must be transitive")
    if semantics == "ipc":
        for a, b in order:
            if a != b and (b, a) in order:
                raise ValueError("intuitionistic order must be antisymmetric")
        for a, b in order:
            va = model.valuation.get(a, frozenset())
            vb = model.valuation.get(b, frozenset())
            if not va <= vb:
                raise ValueError("valuation must be monotone along the order")


def _s4_forces(f: Formula, world: int, succ: Mapping[int, tuple[int, ...]], val: Mapping[int, frozenset[str]], memo: dict) -> bool:
    key = (f, world)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = f.pred in val.get(world, frozenset())
    elif isinstance(f, Bot):
        out = False
    elif isinstance(f, And):
        out = _s4_forces(f.left, world, succ, val, memo) and _s4_forces(f.right, world, succ, val, memo)
    elif isinstance(f, Or):
        out = _s4_forces(f.left, world, succ, val, memo) or _s4_forces(f.right, world, succ, val, memo)
    elif isinstance(f, Implies):
        out = (not _s4_forces(f.left, world, succ, val, memo)) or _s4_forces(f.right, world, succ, val, memo)
    elif isinstance(f, Box):
        out = all(_s4_forces(f.body, w, succ, val, memo) for w in succ[world])
    else:
        raise UnsupportedFormula(f"not a propositional modal formula: {type(f).__name__}")
    memo[key] = out
    return out


def check_model(model: KripkeModel, f: Formula, semantics: str) -> str:
    """Evaluate f at the designated world; returns "satisfies" or "refutes".

    The frame invariants of the chosen semantics are checked first and a
    violation raises ValueError.
    """
    if semantics not in ("ipc", "s4"):
        raise ValueError(f"unknown semantics {semantics!r}, expected ipc or s4")
    if not is_propositional(f) or contains_prf(f):
        raise UnsupportedFormula("model checking needs a propositional formula without Prf")
    if semantics == "ipc" and contains_box(f):
        raise UnsupportedFormula("intuitionistic model checking does not admit the necessity operator")
    _validate_frame(model, semantics)
    val = {w: frozenset(model.valuation.get(w, frozenset())) for w in model.worlds}
    succ = {w: tuple(sorted(b for a, b in model.order if a == w)) for w in model.worlds}
    memo: dict = {}
    if semantics == "ipc":
        forced = _ipc_forces(f, model.designated, succ, val, memo)
    else:
        forced = _s4_forces(f, model.designated, succ, val, memo)
    return "satisfies" if forced else "refutes"
