"""Translation outputs frozen against hand-derived expected formulas.

Every expected string below was worked out on paper from the defining clauses
of the translation in question, then frozen; the tests assert the
implementation agrees with the definitions, not with itself.
"""

import pytest

from emblab.generate import GenParams, gen_formula
from emblab.surface import format_formula, parse
from emblab.syntax import (
    Atom,
    BOT,
    GammaContext,
    UnsupportedFormula,
    formula_size,
    subformulas,
    walk,
)
from emblab.translations import (
    collapse_triple_not_e,
    translate_dbox,
    translate_f,
    translate_ff,
    translate_ff_mea,
    translate_goedel,
    translate_negative,
    translate_rs,
)

P = Atom("p")
CTX_BOT = GammaContext.make([BOT], BOT)
CTX_BOT_P = GammaContext.make([BOT, P], BOT)


def check(got, expected_text):
    assert format_formula(got) == expected_text
    assert parse(expected_text) == got


# necessity translation: box every atom, implication, and quantifier


def test_goedel_frozen_values():
    check(translate_goedel(parse("p")), "[]p")
    check(translate_goedel(parse("p -> q")), "[]([]p -> []q)")
    check(translate_goedel(parse("p | q")), "[]p | []q")
    check(translate_goedel(parse("p & q")), "[]p & []q")
    check(translate_goedel(parse("bot")), "bot")
    check(translate_goedel(parse("~p")), "[]~[]p")
    check(translate_goedel(parse("forall x. P(x)")), "[]forall x. []P(x)")
    check(translate_goedel(parse("exists x. P(x)")), "exists x. []P(x)")
    check(translate_goedel(parse("x = y")), "x = y")


# boxed-disjunct variant: like the necessity translation but disjuncts and
# existential bodies get an extra box


def test_rs_frozen_values():
    check(translate_rs(parse("p")), "[]p")
    check(translate_rs(parse("p | q")), "[][]p | [][]q")
    check(translate_rs(parse("p -> q")), "[]([][]p -> [][]q)")
    check(translate_rs(parse("p & q")), "[]p & []q")
    check(translate_rs(parse("exists x. P(x)")), "exists x. [][]P(x)")
    check(translate_rs(parse("forall x. P(x)")), "forall x. []P(x)")
    check(translate_rs(parse("bot")), "bot")


def test_modal_translations_reject_modal_sources():
    for tr in (translate_goedel, translate_rs):
        with pytest.raises(UnsupportedFormula):
            tr(parse("[]p"))
        with pytest.raises(UnsupportedFormula):
            tr(parse("prf p"))


# contextual double-negation translation: relative negation is (. -> E),
# doubled at atoms, disjunctions, and existentials; Box maps to the doubled
# conjunction of images over every member of the context


def test_ff_frozen_values():
    check(translate_ff(P, CTX_BOT_P), "~~p")
    check(translate_ff(parse("[]p"), CTX_BOT), "~~~~p")
    check(translate_ff(parse("p | q"), CTX_BOT_P), "~~(~~p | ~~q)")
    check(translate_ff(parse("p & q"), CTX_BOT), "~~p & ~~q")
    check(translate_ff(parse("p -> q"), CTX_BOT), "~~p -> ~~q")
    check(translate_ff(parse("exists x. P(x)"), CTX_BOT), "~~exists x. ~~P(x)")
    check(translate_ff(parse("forall x. P(x)"), CTX_BOT), "forall x. ~~P(x)")
    check(translate_ff(parse("bot"), CTX_BOT), "~~bot")
    check(translate_ff(parse("x = y"), CTX_BOT), "~~x = y")


def test_ff_respects_the_distinguished_member():
    check(translate_ff(P, CTX_BOT_P.with_e(P)), "(p -> p) -> p")


def test_ff_box_conjoins_over_all_members():
    check(translate_ff(parse("[]p"), CTX_BOT_P), "~~(~~p & ((p -> p) -> p))")


def test_ff_rejects_prf():
    with pytest.raises(UnsupportedFormula):
        translate_ff(parse("prf p"), CTX_BOT)


# the variant reading prf as bare context-conjunction, diamond-prf example
# unfolds to a relative double negation of it


def test_ff_mea_frozen_values():
    check(translate_ff_mea(parse("prf p"), CTX_BOT), "~~p")
    check(translate_ff_mea(parse("<>prf p"), CTX_BOT), "(~~p -> ~~bot) -> ~~bot")


def test_ff_mea_agrees_with_ff_on_box_free_sources():
    f = parse("(p -> q) & ~p | q")
    assert translate_ff_mea(f, CTX_BOT_P) == translate_ff(f, CTX_BOT_P)


def test_ff_mea_reads_box_transparently():
    assert translate_ff_mea(parse("[]p"), CTX_BOT) == translate_ff_mea(P, CTX_BOT)


# falsum-context image and its helpers


def test_f_is_ff_at_singleton_falsum_context_off_box():
    for text in ("p", "p | q", "p -> q & r", "~~p"):
        f = parse(text)
        assert translate_f(f) == translate_ff(f, CTX_BOT)


def test_f_simplifies_box_to_plain_double_negation():
    # the contextual image of []p at the falsum singleton is ~~~~p; the
    # direct image collapses it (the two are checked equivalent elsewhere)
    check(translate_f(parse("[]p")), "~~p")
    check(translate_ff(parse("[]p"), CTX_BOT), "~~~~p")


def test_dbox_erases_boxes():
    check(translate_dbox(parse("[](p -> []q)")), "p -> q")
    check(translate_dbox(parse("[][]p | q")), "p | q")
    assert translate_dbox(parse("p & q")) == parse("p & q")


def test_negative_translation_frozen_values():
    check(translate_negative(parse("p")), "~~p")
    check(translate_negative(parse("p | ~p")), "~(~~~p & ~~~~p)")
    check(translate_negative(parse("p & q")), "~~p & ~~q")
    check(translate_negative(parse("p -> q")), "~~p -> ~~q")
    check(translate_negative(parse("bot")), "bot")
    check(translate_negative(parse("exists x. P(x)")), "~forall x. ~~~P(x)")
    check(translate_negative(parse("forall x. P(x)")), "forall x. ~~P(x)")


def test_negative_rejects_modal_operators():
    with pytest.raises(UnsupportedFormula):
        translate_negative(parse("[]p"))
    with pytest.raises(UnsupportedFormula):
        translate_negative(parse("prf p"))


def test_collapse_triple_not_e():
    f = parse("((p -> bot) -> bot) -> bot")
    assert collapse_triple_not_e(BOT, f) == parse("p -> bot")
    g = parse("~~~~p")
    assert collapse_triple_not_e(BOT, g) == parse("~~p")


def test_translations_are_deterministic_functions():
    params = GenParams(seed=3, max_depth=4, num_atoms=3, allow_box=False)
    for index in range(50):
        f = gen_formula(params, index)
        assert translate_goedel(f) == translate_goedel(f)
        assert translate_rs(f) == translate_rs(f)
        members = subformulas(f)
        ctx = GammaContext.make(members, members[0])
        assert translate_ff(translate_rs(f), ctx) == translate_ff(translate_rs(f), ctx)


def test_ff_images_share_structure_capped_growth():
    # the image's node count is huge but its distinct-object count stays small,
    # which is what makes downstream decisions feasible
    params = GenParams(seed=8, max_depth=3, num_atoms=3, allow_box=False)
    f = gen_formula(params, 5)
    members = subformulas(f)
    ctx = GammaContext.make(members, members[0])
    image = translate_ff(translate_rs(f), ctx)
    distinct_objects = sum(1 for _ in walk(image))
    assert formula_size(image) > 10**6
    assert distinct_objects < 5000
