"""Seeded formula generation: reproducibility, bounds, and parameter checks."""

import pytest

from emblab.generate import CONNECTIVES, GenParams, gen_formula
from emblab.syntax import Atom, Box, formula_size, walk


def test_same_params_and_index_reproduce_the_formula():
    for index in (0, 1, 17, 999):
        a = gen_formula(GenParams(seed=7), index)
        b = gen_formula(GenParams(seed=7), index)
        assert a == b


def test_distinct_indices_mostly_differ():
    params = GenParams(seed=7)
    formulas = [gen_formula(params, i) for i in range(60)]
    assert len({str(f) for f in formulas}) > 40


def test_seed_changes_the_corpus():
    xs = [gen_formula(GenParams(seed=1), i) for i in range(30)]
    ys = [gen_formula(GenParams(seed=2), i) for i in range(30)]
    assert any(x != y for x, y in zip(xs, ys))


def test_depth_bounds_formula_size():
    # a depth-d tree over binary connectives has at most 2**(d+1) - 1 nodes
    for depth in range(5):
        params = GenParams(seed=3, max_depth=depth)
        for index in range(80):
            assert formula_size(gen_formula(params, index)) <= 2 ** (depth + 1) - 1


def test_depth_zero_is_a_leaf():
    params = GenParams(seed=5, max_depth=0)
    for index in range(20):
        assert formula_size(gen_formula(params, index)) == 1


def test_atoms_are_drawn_from_the_declared_range():
    params = GenParams(seed=11, num_atoms=2)
    names = {
        node.pred
        for index in range(100)
        for node in walk(gen_formula(params, index))
        if isinstance(node, Atom)
    }
    assert names <= {"p0", "p1"}
    assert len(names) == 2


def test_box_appears_only_when_allowed():
    plain = GenParams(seed=13)
    assert not any(
        isinstance(node, Box)
        for index in range(150)
        for node in walk(gen_formula(plain, index))
    )
    modal = GenParams(seed=13, allow_box=True)
    assert any(
        isinstance(node, Box)
        for index in range(150)
        for node in walk(gen_formula(modal, index))
    )


def test_zero_weight_excludes_a_connective():
    params = GenParams(seed=17, connective_weights={"leaf": 1.0})
    for index in range(30):
        assert formula_size(gen_formula(params, index)) == 1


def test_weights_accept_mappings_and_pairs():
    as_mapping = GenParams(seed=19, connective_weights={"leaf": 1.0, "and": 2.0})
    as_pairs = GenParams(seed=19, connective_weights=(("and", 2.0), ("leaf", 1.0)))
    assert as_mapping.connective_weights == as_pairs.connective_weights
    assert [gen_formula(as_mapping, i) for i in range(20)] == [
        gen_formula(as_pairs, i) for i in range(20)
    ]


def test_weight_of_defaults_to_zero():
    params = GenParams(seed=23, connective_weights={"leaf": 1.0})
    assert params.weight_of("box") == 0.0
    assert params.weight_of("leaf") == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"seed": -1},
        {"seed": 2**64},
        {"seed": 0, "max_depth": -1},
        {"seed": 0, "num_atoms": 0},
        {"seed": 0, "connective_weights": {"nand": 1.0}},
        {"seed": 0, "connective_weights": (("leaf", 1.0), ("leaf", 2.0))},
        {"seed": 0, "connective_weights": {"leaf": -1.0}},
        {"seed": 0, "connective_weights": {"leaf": 0.0}},
    ],
)
def test_invalid_params_are_rejected(kwargs):
    with pytest.raises(ValueError):
        GenParams(**kwargs)


def test_negative_index_is_rejected():
    with pytest.raises(ValueError):
        gen_formula(GenParams(seed=0), -1)


def test_connective_names_are_closed():
    assert set(dict(GenParams(seed=0).connective_weights)) <= set(CONNECTIVES)
