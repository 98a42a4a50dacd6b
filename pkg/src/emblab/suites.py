"""Executable property suites over generated formulas, plus proof-chain replays.

Each suite instantiates one provability equivalence or admissible rule on
seeded random propositional instances and checks it with the deciders.  A
failing instance is a bug somewhere, never noise, so failures carry the source
formulas as parsable witnesses and reports are reproducible from the seed.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass
from typing import Callable

from .deciders import (
    BudgetExhausted,
    Sequent,
    Verdict,
    check_model,
    check_stability,
    decide,
    decide_cpc,
    decide_ipc,
    decide_s4,
    mutually_derivable,
)
from .generate import GenParams, gen_formula
from .surface import parse
from .syntax import (
    And,
    BOT,
    Box,
    Bot,
    Exists,
    Formula,
    GammaContext,
    Implies,
    Or,
    UnsupportedFormula,
    conj_over,
    contains_box,
    contains_prf,
    iff,
    is_propositional,
    neg,
    not_e,
    not_e_n,
    subformulas,
)
from .translations import (
    _map_formula,
    collapse_triple_not_e,
    translate_dbox,
    translate_f,
    translate_ff,
    translate_goedel,
    translate_negative,
    translate_rs,
)


@dataclass(frozen=True)
class SuiteFailure:
    """One failing instance: witness formulas reproduce it under the same seed."""

    index: int
    witness: tuple[Formula, ...]
    detail: str

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "witness": [str(f) for f in self.witness],
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite run; attempted = successes + failures + exhaustions.

    engaged counts the instances where the suite's non-vacuous branch ran (for
    conditional suites such as ff_soundness, the instances whose source was
    provable); it is informational and not part of the wire format.
    """

    suite_id: str
    params: GenParams
    attempted: int
    failures: tuple[SuiteFailure, ...]
    budget_exhaustions: int
    elapsed_ms: int
    engaged: int

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite_id,
            "seed": self.params.seed,
            "attempted": self.attempted,
            "failures": [f.to_json_dict() for f in self.failures],
            "budget_exhausted": self.budget_exhaustions,
            "elapsed_ms": self.elapsed_ms,
        }


# outcome of one instance: ok, witness, detail, non-vacuously engaged
_CaseOutcome = tuple[bool, list[Formula], str, bool]
_OK: _CaseOutcome = (True, [], "", True)

_POOL_SALT = 0xD1B54A32D192ED03
_ALT_SALT = 0x9E3779B97F4A7C15


def _rng(*parts: int) -> random.Random:
    n = 0
    for p in parts:
        n = n * 2**64 + p
    return random.Random(n)


def _boxed(params: GenParams) -> GenParams:
    return dataclasses.replace(params, allow_box=True)


def _alt(params: GenParams) -> GenParams:
    return dataclasses.replace(params, seed=params.seed ^ _ALT_SALT)


def _pool_params(params: GenParams) -> GenParams:
    return GenParams(
        seed=params.seed ^ _POOL_SALT,
        max_depth=2,
        num_atoms=min(params.num_atoms, 3),
        allow_box=False,
    )


def _pool_context(params: GenParams, index: int, salt: int) -> tuple[Formula, GammaContext]:
    """A context whose members are the subformulas of a fresh small formula."""
    pool = gen_formula(_pool_params(params), index)
    members = subformulas(pool)
    rng = _rng(params.seed, salt, index)
    e = members[rng.randrange(len(members))]
    return pool, GammaContext.make(members, e)


def _provable(seq: Sequent, logic: str, budget: int | None) -> bool:
    return decide(seq, logic, budget, want_countermodel=False).provable


# ---------------------------------------------------------------------------
# suite predicates


def _case_glivenko(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    cpc = _provable(Sequent((), a), "cpc", budget)
    ipc = _provable(Sequent((), neg(neg(a))), "ipc", budget)
    if cpc != ipc:
        return False, [a], f"classically provable: {cpc}; double negation provable: {ipc}", True
    return _OK


def _case_goedel_sound_faithful(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    ipc = _provable(Sequent((), a), "ipc", budget)
    s4 = _provable(Sequent((), translate_goedel(a)), "s4", budget)
    if ipc != s4:
        return False, [a], f"source provable: {ipc}; necessity image provable: {s4}", True
    return _OK


def _case_rs_sound_faithful(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    ipc = _provable(Sequent((), a), "ipc", budget)
    s4 = _provable(Sequent((), translate_rs(a)), "s4", budget)
    if ipc != s4:
        return False, [a], f"source provable: {ipc}; boxed-disjunct image provable: {s4}", True
    return _OK


def _case_box_equiv(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    goal = iff(translate_goedel(a), translate_rs(a))
    if not _provable(Sequent((), goal), "s4", budget):
        return False, [a], "the two modal images are not S4-equivalent", True
    return _OK


def _case_ff_soundness(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(params, index)
    if not _provable(Sequent((), b), "s4", budget):
        return True, [], "", False
    for k in (0, 1):
        pool = gen_formula(_pool_params(params), 2 * index + k)
        members = subformulas(pool)
        rng = _rng(params.seed, 101, index, k)
        ctx = GammaContext.make(members, members[rng.randrange(len(members))])
        image = translate_ff(b, ctx)
        if not _provable(Sequent((), image), "ipc", budget):
            return (
                False,
                [b, pool, ctx.e],
                f"S4-provable source has unprovable image for sampled context (pair {k})",
                True,
            )
    return _OK


def _case_core_lemma(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    members = subformulas(a)
    ctx = GammaContext.make(members, members[0])
    for tr, label in ((translate_rs, "boxed-disjunct"), (translate_goedel, "necessity")):
        t = tr(a)
        image = conj_over(ctx, lambda c: translate_ff(t, ctx.with_e(c)))
        if not mutually_derivable(a, image, "ipc", budget):
            return (
                False,
                [a],
                f"source and round-trip conjunction differ over the {label} image",
                True,
            )
    return _OK


def _case_lemma13(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    b = gen_formula(_alt(params), index)
    pool = gen_formula(_pool_params(params), index)
    members = subformulas(And(a, pool))
    e = members[_rng(params.seed, 13, index).randrange(len(members))]
    witness = [a, b, pool, e]

    def n2(e_: Formula, x: Formula) -> Formula:
        return not_e_n(e_, 2, x)

    if not mutually_derivable(a, n2(a, a), "ipc", budget):
        return False, witness, "item 1: self-relative double negation differs", True
    if not _provable(Sequent((a,), n2(e, a)), "ipc", budget):
        return False, witness, "item 2: relative double negation not derivable", True
    if not mutually_derivable(not_e(e, a), not_e_n(e, 3, a), "ipc", budget):
        return False, witness, "item 3: single and triple relative negation differ", True
    gamma_ctx = GammaContext.make(members, e)
    conj4 = conj_over(gamma_ctx, lambda c: n2(c, a))
    if not mutually_derivable(a, conj4, "ipc", budget):
        return False, witness, "item 4: member formula differs from its double-negation conjunction", True
    if not mutually_derivable(n2(e, Or(a, b)), n2(e, Or(n2(e, a), n2(e, b))), "ipc", budget):
        return False, witness, "item 5: disjunction distribution fails", True
    if not mutually_derivable(n2(e, And(a, b)), And(n2(e, a), n2(e, b)), "ipc", budget):
        return False, witness, "item 6: conjunction distribution fails", True
    imp = Implies(a, b)
    members7 = subformulas(And(imp, pool))
    ctx7 = GammaContext.make(members7, members7[0])
    conj7 = conj_over(ctx7, lambda c: Implies(n2(c, a), n2(c, b)))
    if not mutually_derivable(imp, conj7, "ipc", budget):
        return False, witness, "item 7: implication differs from its relativized conjunction", True
    premises = (a,) if index % 2 == 0 else (a, b)
    if _provable(Sequent(premises, pool), "ipc", budget):
        shifted = Sequent(tuple(n2(e, p) for p in premises), n2(e, pool))
        if not _provable(shifted, "ipc", budget):
            return False, witness, "item 9: double-negation image of a derivable rule fails", True
    return _OK


def _case_lemma14(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(_boxed(params), index)
    pool, ctx = _pool_context(params, index, 14)
    e = ctx.e
    image = translate_ff(b, ctx)
    neg_image = translate_ff(neg(b), ctx)
    if not mutually_derivable(neg_image, not_e(e, image), "ipc", budget):
        return False, [b, pool, e], "negated source image differs from relative negation of image", True
    if not mutually_derivable(not_e_n(e, 2, image), image, "ipc", budget):
        return False, [b, pool, e], "image is not fixed by relative double negation", True
    return _OK


def _case_lemma41(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(_boxed(params), index)
    pool, ctx = _pool_context(params, index, 41)
    image = translate_ff(b, ctx)
    goal = iff(not_e_n(ctx.e, 2, image), image)
    if not _provable(Sequent((), goal), "ipc", budget):
        return False, [b, pool, ctx.e], "image not equivalent to its relative double negation", True
    return _OK


def _case_prop41(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(_boxed(params), index)
    ctx = GammaContext.make([BOT], BOT)
    goal = iff(translate_ff(b, ctx), translate_f(b))
    if not _provable(Sequent((), goal), "ipc", budget):
        return False, [b], "singleton-falsum context image differs from its simplification", True
    return _OK


def _case_prop42_1(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    goal = iff(a, not_e_n(a, 2, a))
    if not _provable(Sequent((), goal), "ipc", budget):
        return False, [a], "formula not equivalent to its self-relative double negation", True
    return _OK


def _case_prop51(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(_boxed(params), index)
    goal = iff(translate_f(b), translate_negative(translate_dbox(b)))
    if not _provable(Sequent((), goal), "ipc", budget):
        return False, [b], "falsum-context image differs from negative translation of the erasure", True
    return _OK


def _case_lemma51(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    b = gen_formula(_boxed(params), index)
    f_image = translate_f(b)
    d_image = translate_dbox(b)
    if not _provable(Sequent((), iff(f_image, neg(neg(d_image)))), "ipc", budget):
        return False, [b], "image differs from double-negated erasure", True
    if not _provable(Sequent((), iff(f_image, neg(neg(f_image)))), "ipc", budget):
        return False, [b], "image not fixed by double negation", True
    return _OK


def _case_stability(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    boxed = _boxed(_alt(params))
    b1 = gen_formula(boxed, 2 * index)
    b2 = gen_formula(boxed, 2 * index + 1)
    checks = (
        (translate_goedel(a), "necessity image"),
        (translate_rs(a), "boxed-disjunct image"),
        (Box(b1), "boxed formula"),
        (Or(Box(b1), Box(b2)), "disjunction of boxed formulas"),
        (And(Box(b1), Box(b2)), "conjunction of boxed formulas"),
    )
    for formula, label in checks:
        if not check_stability(formula, budget):
            return False, [a, b1, b2], f"not stable: {label}", True
    return _OK


def _case_decider_consistency(params: GenParams, index: int, budget: int | None) -> _CaseOutcome:
    a = gen_formula(params, index)
    b = gen_formula(_alt(params), index)
    seq = Sequent((), a)
    cpc_v = decide_cpc(seq, budget)
    ipc_v = decide_ipc(seq, budget)
    s4_v = decide_s4(seq, budget)
    if ipc_v.provable and not cpc_v.provable:
        return False, [a], "intuitionistically provable but classically refuted", True
    if s4_v.provable != cpc_v.provable:
        return False, [a], "S4 and classical verdicts differ on a Box-free formula", True
    for verdict, semantics in ((cpc_v, "s4"), (ipc_v, "ipc"), (s4_v, "s4")):
        if verdict.countermodel is not None:
            if check_model(verdict.countermodel, a, semantics) != "refutes":
                return False, [a], f"emitted {semantics} countermodel does not refute", True
    local = Sequent((b,), a)
    reduced = Sequent((), local.implication_form())
    for logic in ("cpc", "ipc", "s4"):
        if _provable(local, logic, budget) != _provable(reduced, logic, budget):
            return False, [a, b], f"assumption sequent and its implication form differ in {logic}", True
    if s4_v.provable and not _provable(Sequent((), Box(a)), "s4", budget):
        return False, [a], "provable formula has unprovable necessitation", True
    if _provable(Sequent((), Or(a, b)), "ipc", budget):
        if not (_provable(Sequent((), a), "ipc", budget) or _provable(Sequent((), b), "ipc", budget)):
            return False, [a, b], "provable disjunction with neither disjunct provable", True
    return _OK


_SuiteSpec = tuple[Callable[[GenParams, int, int | None], _CaseOutcome], int, dict]

_SUITES: dict[str, _SuiteSpec] = {
    "rs_sound_faithful": (_case_rs_sound_faithful, 500, {}),
    "goedel_sound_faithful": (_case_goedel_sound_faithful, 500, {}),
    "box_equiv": (_case_box_equiv, 500, {}),
    "glivenko": (_case_glivenko, 500, {}),
    "ff_soundness": (_case_ff_soundness, 2000, {"max_depth": 3, "num_atoms": 3, "allow_box": True}),
    "core_lemma": (_case_core_lemma, 200, {"max_depth": 3, "num_atoms": 3}),
    "lemma13": (_case_lemma13, 200, {"max_depth": 3, "num_atoms": 3}),
    "lemma14": (_case_lemma14, 200, {"max_depth": 3, "num_atoms": 3}),
    "lemma41": (_case_lemma41, 200, {"max_depth": 3, "num_atoms": 3}),
    "prop41": (_case_prop41, 200, {"max_depth": 3, "num_atoms": 3}),
    "prop42_1": (_case_prop42_1, 200, {"max_depth": 3, "num_atoms": 3}),
    "prop51": (_case_prop51, 200, {"max_depth": 3, "num_atoms": 3}),
    "lemma51": (_case_lemma51, 200, {"max_depth": 3, "num_atoms": 3}),
    "stability": (_case_stability, 200, {}),
    "decider_consistency": (_case_decider_consistency, 1000, {}),
}

SUITE_IDS: tuple[str, ...] = tuple(_SUITES)

DEFAULT_SEED = 42


def suite_default_params(suite_id: str, seed: int = DEFAULT_SEED) -> GenParams:
    """The generator parameters a suite runs with when none are given."""
    if suite_id not in _SUITES:
        raise ValueError(f"unknown suite {suite_id!r}")
    _, _, overrides = _SUITES[suite_id]
    return GenParams(seed=seed, **overrides)


def suite_default_count(suite_id: str) -> int:
    if suite_id not in _SUITES:
        raise ValueError(f"unknown suite {suite_id!r}")
    return _SUITES[suite_id][1]


def run_suite(
    suite_id: str,
    params: GenParams | None = None,
    count: int | None = None,
    budget: int | None = None,
) -> SuiteReport:
    """Run a suite's predicate on count generated instances and report.

    Budget exhaustions are counted separately and never as successes; failures
    are reported in instance order with reproducible witnesses.
    """
    if suite_id not in _SUITES:
        raise ValueError(f"unknown suite {suite_id!r}")
    case, default_count, _ = _SUITES[suite_id]
    if params is None:
        params = suite_default_params(suite_id)
    n = default_count if count is None else count
    if n < 0:
        raise ValueError("count must be nonnegative")
    failures: list[SuiteFailure] = []
    exhausted = 0
    engaged = 0
    start = time.perf_counter()
    for index in range(n):
        try:
            ok, witness, detail, was_engaged = case(params, index, budget)
        except BudgetExhausted:
            exhausted += 1
            continue
        if was_engaged:
            engaged += 1
        if not ok:
            failures.append(SuiteFailure(index, tuple(witness), detail))
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    return SuiteReport(
        suite_id=suite_id,
        params=params,
        attempted=n,
        failures=tuple(failures),
        budget_exhaustions=exhausted,
        elapsed_ms=elapsed_ms,
        engaged=engaged,
    )


# ---------------------------------------------------------------------------
# proof-chain replays


def _rewrite_fixpoint(f: Formula, rule: Callable[[Formula], Formula]) -> Formula:
    """Apply rule bottom-up, at each node to a local fixpoint, until stable."""

    def one_pass(node: Formula, memo: dict) -> Formula:
        hit = memo.get(node)
        if hit is not None:
            return hit
        rebuilt = _map_formula(node, lambda child: one_pass(child, memo))
        while True:
            reduced = rule(rebuilt)
            if reduced is rebuilt or reduced == rebuilt:
                break
            rebuilt = reduced
        memo[node] = rebuilt
        return rebuilt

    while True:
        out = one_pass(f, {})
        if out == f:
            return out
        f = out


def _strip_self_double(f: Formula) -> Formula:
    """Rewrite (X -> X) -> X to X everywhere."""

    def rule(node: Formula) -> Formula:
        if (
            isinstance(node, Implies)
            and isinstance(node.left, Implies)
            and node.left.left == node.right
            and node.left.right == node.right
        ):
            return node.right
        return node

    return _rewrite_fixpoint(f, rule)


def _drop_double_negation_under_exists(f: Formula) -> Formula:
    """Rewrite ~~exists x. ~~B to ~~exists x. B everywhere."""

    def unwrap_nn(node: Formula) -> Formula | None:
        if (
            isinstance(node, Implies)
            and isinstance(node.right, Bot)
            and isinstance(node.left, Implies)
            and isinstance(node.left.right, Bot)
        ):
            return node.left.left
        return None

    def rule(node: Formula) -> Formula:
        inner = unwrap_nn(node)
        if inner is not None and isinstance(inner, Exists):
            body = unwrap_nn(inner.body)
            if body is not None:
                return neg(neg(Exists(inner.var, body)))
        return node

    return _rewrite_fixpoint(f, rule)


_MARKOV_SOURCE = "[] forall x. <> exists y. R(x, y)"
_MARKOV_EXPECTED = (
    "forall x. (~~(exists y. ~~R(x, y)) -> ~~bot) -> ~~bot",
    "forall x. (~~(exists y. ~~R(x, y)) -> ~~bot) -> ~~bot",
    "forall x. ~~exists y. ~~R(x, y)",
    "forall x. ~~exists y. R(x, y)",
)
_MARKOV_LABELS = (
    "falsum-context image",
    "displayed unfolding",
    "double negation collapsed",
    "existential body simplified",
)


def replay_markov_chain() -> list[tuple[str, Formula]]:
    """Rewrite the falsum-context image of a boxed forall-diamond-exists source
    down to a plain double-negated existential, asserting each stage against a
    hard-coded expected formula.
    """
    expected = [parse(text) for text in _MARKOV_EXPECTED]
    stages = [translate_f(parse(_MARKOV_SOURCE))]
    stages.append(expected[1])
    if stages[0] != stages[1]:
        raise AssertionError("image does not match the expected unfolding")
    collapsed = collapse_triple_not_e(BOT, _strip_self_double(stages[1]))
    stages.append(collapsed)
    stages.append(_drop_double_negation_under_exists(collapsed))
    for stage, want, label in zip(stages, expected, _MARKOV_LABELS):
        if stage != want:
            raise AssertionError(f"stage {label!r} does not match its expected formula")
    return list(zip(_MARKOV_LABELS, stages))


def replay_glivenko_chain(a: Formula, budget: int | None = None) -> list[tuple[str, Formula, Verdict]]:
    """Follow a classical provability claim through its staged images.

    Stages: the source in S4; its falsum-context image, the double-negated
    modal erasure, and the plain double negation, each in IPC.  When the
    source is classically provable every stage must come back provable.
    """
    if not is_propositional(a) or contains_box(a) or contains_prf(a):
        raise UnsupportedFormula("the chain needs a propositional, Box-free source")
    stages = [
        ("s4", a, decide_s4(Sequent((), a), budget, want_countermodel=False)),
        ("ipc", translate_f(a), None),
        ("ipc", neg(neg(translate_dbox(a))), None),
        ("ipc", neg(neg(a)), None),
    ]
    out: list[tuple[str, Formula, Verdict]] = []
    for logic, formula, verdict in stages:
        if verdict is None:
            verdict = decide_ipc(Sequent((), formula), budget, want_countermodel=False)
        out.append((logic, formula, verdict))
    return out
