"""Workbench for syntactic embeddings between classical, intuitionistic, and
S4 modal propositional logic: formula syntax, translations, deciders with
countermodels, and seeded property suites exercising the lot.
"""

from .deciders import (
    BudgetExhausted,
    DEFAULT_BUDGET,
    KripkeModel,
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
from .suites import (
    SUITE_IDS,
    SuiteFailure,
    SuiteReport,
    replay_glivenko_chain,
    replay_markov_chain,
    run_suite,
    suite_default_count,
    suite_default_params,
)
from .surface import ParseError, format_formula, parse, parse_lines
from .syntax import (
    And,
    App,
    Atom,
    BOT,
    Bot,
    Box,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    GammaContext,
    Implies,
    Or,
    Prf,
    Term,
    UnsupportedFormula,
    Var,
    conj_over,
    contains_box,
    contains_prf,
    diamond,
    formula_size,
    iff,
    is_propositional,
    neg,
    not_e,
    not_e_n,
    sort_formulas,
    subformulas,
    walk,
)
from .translations import (
    translate_dbox,
    translate_f,
    translate_ff,
    translate_ff_mea,
    translate_goedel,
    translate_negative,
    translate_rs,
)

__all__ = [
    "And",
    "App",
    "Atom",
    "BOT",
    "Bot",
    "Box",
    "BudgetExhausted",
    "Const",
    "DEFAULT_BUDGET",
    "Eq",
    "Exists",
    "Forall",
    "Formula",
    "GammaContext",
    "GenParams",
    "Implies",
    "KripkeModel",
    "Or",
    "ParseError",
    "Prf",
    "SUITE_IDS",
    "Sequent",
    "SuiteFailure",
    "SuiteReport",
    "Term",
    "UnsupportedFormula",
    "Var",
    "Verdict",
    "check_model",
    "check_stability",
    "conj_over",
    "contains_box",
    "contains_prf",
    "decide",
    "decide_cpc",
    "decide_ipc",
    "decide_s4",
    "diamond",
    "format_formula",
    "formula_size",
    "gen_formula",
    "iff",
    "is_propositional",
    "mutually_derivable",
    "neg",
    "not_e",
    "not_e_n",
    "parse",
    "parse_lines",
    "replay_glivenko_chain",
    "replay_markov_chain",
    "run_suite",
    "sort_formulas",
    "subformulas",
    "suite_default_count",
    "suite_default_params",
    "translate_dbox",
    "translate_f",
    "translate_ff",
    "translate_ff_mea",
    "translate_goedel",
    "translate_negative",
    "translate_rs",
    "walk",
]

__version__ = "0.1.0"
