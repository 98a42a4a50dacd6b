"""Provability verdicts, countermodels, budgets, and sequent preconditions."""

import pytest

from emblab.deciders import (
    BudgetExhausted,
    DEFAULT_BUDGET,
    KripkeModel,
    Sequent,
    check_model,
    check_stability,
    decide,
    decide_cpc,
    decide_ipc,
    decide_s4,
    mutually_derivable,
)
from emblab.surface import parse
from emblab.syntax import Atom, BOT, Box, Forall, Implies, Prf, UnsupportedFormula, Var

P = Atom("p")
Q = Atom("q")

# hand-checked intuitionistic verdicts; the classical-only rows are the
# standard non-theorems (excluded middle, double negation, Peirce, Dummett,
# de Morgan for conjunction) and every provable row has a pen-and-paper
# derivation
IPC_CASES = [
    ("p -> p", True),
    ("p -> (q -> p)", True),
    ("(p -> (q -> r)) -> ((p -> q) -> (p -> r))", True),
    ("p | ~p", False),
    ("~~p -> p", False),
    ("((p -> q) -> p) -> p", False),
    ("~~(p | ~p)", True),
    ("(~~p -> p) -> (p | ~p)", False),
    ("((p | ~p) -> q) -> ~~q", True),
    ("(p -> q) | (q -> p)", False),
    ("~(p & ~p)", True),
    ("((p & q) -> r) -> (p -> (q -> r))", True),
    ("(p -> (q -> r)) -> ((p & q) -> r)", True),
    ("((p | q) -> r) -> ((p -> r) & (q -> r))", True),
    ("((p -> r) & (q -> r)) -> ((p | q) -> r)", True),
    ("(~p | q) -> (p -> q)", True),
    ("(p -> q) -> (~p | q)", False),
    ("~(p & q) -> (~p | ~q)", False),
    ("(~p | ~q) -> ~(p & q)", True),
    ("((((a -> b) -> c) -> d) -> e) -> ((e -> a) -> (d -> a))", True),
    ("(((a -> b) -> c) -> (b -> d)) -> ((b -> c) -> (a -> d))", False),
    ("bot -> p", True),
    ("~~~p -> ~p", True),
]

CPC_CASES = [
    ("p | ~p", True),
    ("~~p -> p", True),
    ("((p -> q) -> p) -> p", True),
    ("(p -> q) | (q -> p)", True),
    ("~(p & q) -> (~p | ~q)", True),
    ("p & ~p", False),
    ("p -> q", False),
    ("(p | q) -> p", False),
]

# reflexivity and transitivity hold, the euclidean and symmetry axioms fail,
# and local consequence does not admit necessitation of an assumption
S4_CASES = [
    ("[]p -> p", True),
    ("[]p -> [][]p", True),
    ("[](p -> q) -> ([]p -> []q)", True),
    ("[]p | ~[]p", True),
    ("p -> []p", False),
    ("<>p -> []<>p", False),
    ("~[]p -> []~[]p", False),
    ("[](p & q) -> ([]p & []q)", True),
    ("([]p & []q) -> [](p & q)", True),
    ("[](p | q) -> ([]p | []q)", False),
    ("<>[]p -> []<>p", False),
]


@pytest.mark.parametrize("text,want", IPC_CASES)
def test_ipc_verdicts(text, want):
    verdict = decide_ipc(Sequent((), parse(text)))
    assert verdict.provable == want
    if not want and verdict.countermodel is not None:
        assert check_model(verdict.countermodel, parse(text), "ipc") == "refutes"


@pytest.mark.parametrize("text,want", CPC_CASES)
def test_cpc_verdicts(text, want):
    verdict = decide_cpc(Sequent((), parse(text)))
    assert verdict.provable == want
    if not want:
        assert verdict.countermodel is not None
        assert check_model(verdict.countermodel, parse(text), "s4") == "refutes"


@pytest.mark.parametrize("text,want", S4_CASES)
def test_s4_verdicts(text, want):
    verdict = decide_s4(Sequent((), parse(text)))
    assert verdict.provable == want
    if not want and verdict.countermodel is not None:
        assert check_model(verdict.countermodel, parse(text), "s4") == "refutes"


def test_assumptions_are_used():
    assert decide_ipc(Sequent((P,), P)).provable
    assert decide_ipc(Sequent((parse("p -> q"), P), Q)).provable
    assert not decide_ipc(Sequent((parse("p | q"),), P)).provable
    # local consequence: an assumption holds at the root world only
    assert not decide_s4(Sequent((P,), Box(P))).provable
    assert decide_s4(Sequent((Box(P),), Box(Box(P)))).provable


def test_sequent_matches_its_implication_form():
    seq = Sequent((parse("p -> q"), P), Q)
    for logic in ("cpc", "ipc", "s4"):
        direct = decide(seq, logic).provable
        folded = decide(Sequent((), seq.implication_form()), logic).provable
        assert direct == folded


def test_goal_rewriting_never_leaks_across_calls():
    # regression: one shared state proving p -> p must not mark p proved
    from emblab.deciders import _Counter, _IPCFilter, _IPCState, _g4ip, _sequent_atoms

    st = _IPCState(_Counter(10**6), _IPCFilter(_sequent_atoms(Sequent((), P))))
    proved_imp, _ = _g4ip(frozenset(), parse("p -> p"), st)
    proved_atom, _ = _g4ip(frozenset(), P, st)
    assert proved_imp and not proved_atom


def test_dispatch_and_unknown_logic():
    assert decide(Sequent((), parse("p | ~p")), "cpc").provable
    assert not decide(Sequent((), parse("p | ~p")), "ipc").provable
    with pytest.raises(ValueError):
        decide(Sequent((), P), "k4")


def test_propositional_preconditions():
    with pytest.raises(UnsupportedFormula):
        Sequent((), Forall("x", Atom("P", (Var("x"),))))
    with pytest.raises(UnsupportedFormula):
        Sequent((), Prf(P))
    with pytest.raises(UnsupportedFormula):
        decide_ipc(Sequent((), Box(P)))
    with pytest.raises(UnsupportedFormula):
        decide_cpc(Sequent((Box(P),), P))


def test_budget_exhaustion_raises_with_spend():
    with pytest.raises(BudgetExhausted) as info:
        decide_cpc(Sequent((), parse("p | q | r | ~p")), budget=2)
    assert info.value.spent > 0
    with pytest.raises(BudgetExhausted):
        decide_ipc(Sequent((), parse("((p -> q) -> p) -> p")), budget=1)
    with pytest.raises(BudgetExhausted):
        decide_s4(Sequent((), parse("[](p -> q) -> ([]p -> []q)")), budget=1)
    assert DEFAULT_BUDGET == 10**6


def test_mutual_derivability():
    assert mutually_derivable(parse("p & q"), parse("q & p"), "ipc")
    assert mutually_derivable(parse("~~~p"), parse("~p"), "ipc")
    assert not mutually_derivable(P, Q, "ipc")
    # one direction holding is not enough
    assert not mutually_derivable(parse("p & q"), P, "ipc")
    assert mutually_derivable(parse("p | ~p"), parse("~~p -> p"), "cpc")


def test_stability_is_box_equivalence():
    assert check_stability(Box(P))
    assert check_stability(parse("[]p | []q"))
    assert check_stability(parse("[]p & []q"))
    assert not check_stability(P)
    assert not check_stability(parse("p | []q"))


def test_check_model_validates_frames():
    flat = KripkeModel(
        worlds=(0,),
        order=frozenset({(0, 0)}),
        valuation={0: frozenset()},
        designated=0,
    )
    assert check_model(flat, parse("p | ~p"), "ipc") == "refutes"
    assert check_model(flat, parse("~p"), "ipc") == "satisfies"
    broken = KripkeModel(
        worlds=(0, 1),
        order=frozenset({(0, 0), (1, 1), (0, 1)}),
        valuation={0: frozenset({"p"}), 1: frozenset()},
        designated=0,
    )
    # intuitionistic valuations must be monotone along the order
    with pytest.raises(ValueError):
        check_model(broken, P, "ipc")
    # the same frame and valuation are a legal modal model
    assert check_model(broken, Box(P), "s4") == "refutes"
    assert check_model(broken, P, "s4") == "satisfies"


def test_countermodels_refute_their_sequents():
    seq = Sequent((parse("p -> q"),), parse("q -> p"))
    for logic, semantics in (("cpc", "s4"), ("ipc", "ipc"), ("s4", "s4")):
        verdict = decide(seq, logic)
        assert not verdict.provable
        if verdict.countermodel is not None:
            refuted = seq.implication_form()
            assert check_model(verdict.countermodel, refuted, semantics) == "refutes"


def test_verdict_stats_counts_work():
    verdict = decide_ipc(Sequent((), parse("p -> p")))
    assert verdict.stats >= 1
    harder = decide_ipc(Sequent((), parse("((p | ~p) -> q) -> ~~q")))
    assert harder.stats >= verdict.stats
