"""Moment structures: word reduction, class identification, qubit oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from dirand.bell import QubitStrategy, Scenario, catalog, evaluate, \
    singlet_correlations
from dirand.npa import (functional_from_operator, local_probability_functional,
                        moment_structure, monomials, probability_functional,
                        reduce_word)
from dirand.qubit import moment_matrix, moment_vector

S22 = Scenario(2, 2)
S43 = Scenario(4, 3)


def test_reduce_word_idempotence():
    m = reduce_word((1, 1, 2, 2, 2, 1), (3, 3))
    assert m.alice_word == (1, 2, 1)
    assert m.bob_word == (3,)


def test_reduce_word_keeps_noncommuting_order():
    m = reduce_word((1, 2), ())
    assert m.alice_word == (1, 2)
    m = reduce_word((2, 1), ())
    assert m.alice_word == (2, 1)


def test_reduce_word_bounds_checked():
    with pytest.raises(ValueError):
        reduce_word((3,), (), Scenario(2, 2))


def test_adjoint_reverses():
    m = reduce_word((1, 2), (2, 1))
    a = m.adjoint()
    assert a.alice_word == (2, 1) and a.bob_word == (1, 2)


def test_monomial_counts_chsh_scenario():
    assert len(monomials(S22, "Q1")) == 5
    assert len(monomials(S22, "Q1+AB")) == 9
    assert len(monomials(S22, "Q2")) == 13


# regression baseline: (scenario, level) -> (matrix dim, free moments)
_GOLDEN_SIZES = {
    (2, 2, "Q1"): (5, 11),
    (2, 2, "Q1+AB"): (9, 17),
    (2, 2, "Q2"): (13, 31),
    (4, 3, "Q2"): (38, 302),
    (5, 5, "Q2"): (76, 1276),
    (7, 7, "Q1+AB"): (64, 1282),
}


@pytest.mark.parametrize("na,nb,level", sorted(_GOLDEN_SIZES))
def test_structure_sizes_regression(na, nb, level):
    st = moment_structure(Scenario(na, nb), level)
    dim, n_vars = _GOLDEN_SIZES[(na, nb, level)]
    assert st.dim == dim
    assert st.n_vars == n_vars


def test_identity_class_pinned():
    st = moment_structure(S22, "Q2")
    assert st.entry_class[0, 0] == 0
    assert st.class_of((), ()) == 0
    y = np.zeros(st.n_vars)
    y[0] = 1.0
    assert st.assemble(y)[0, 0] == 1.0


def test_assemble_symmetric():
    st = moment_structure(S43, "Q2")
    rng = np.random.default_rng(3)
    y = rng.standard_normal(st.n_vars)
    m = st.assemble(y)
    assert (m == m.T).all()


def test_qubit_moment_matrix_psd():
    st = moment_structure(S22, "Q2")
    strat = QubitStrategy([math.pi, math.pi / 2.0],
                          [-3.0 * math.pi / 4.0, 3.0 * math.pi / 4.0],
                          visibility=0.9)
    m = moment_matrix(st, strat)
    evs = np.linalg.eigvalsh(m)
    assert evs.min() > -1e-10
    assert m[0, 0] == pytest.approx(1.0)


@pytest.mark.parametrize("level", ["Q1", "Q1+AB", "Q2"])
def test_qubit_moments_psd_all_levels(level):
    st = moment_structure(S43, level)
    rng = np.random.default_rng(7)
    strat = QubitStrategy(rng.uniform(0, math.pi, 4),
                          rng.uniform(0, math.pi, 3), visibility=0.8)
    m = moment_matrix(st, strat)
    assert np.linalg.eigvalsh(m).min() > -1e-10


def test_functional_matches_direct_evaluation():
    # the moment-space functional of an operator agrees with the
    # correlator-space evaluation on qubit strategies
    st = moment_structure(S22, "Q2")
    strat = QubitStrategy([0.2, 1.4], [2.2, 0.9], visibility=0.95)
    y = moment_vector(st, strat)
    corr = singlet_correlations(strat)
    for name in ("chsh", "e0", "e1"):
        op = catalog(name)
        f = functional_from_operator(st, op)
        assert f.value(y) == pytest.approx(evaluate(op, corr), abs=1e-12)


def test_probability_functional_qubit_oracle():
    st = moment_structure(S22, "Q2")
    strat = QubitStrategy([0.3, 1.2], [0.8, 2.1], visibility=0.9)
    y = moment_vector(st, strat)
    corr = singlet_correlations(strat)
    for a, b in ((1, 1), (2, 2), (1, 2)):
        c = corr.joint[a - 1, b - 1]
        total = 0.0
        for oa in (1, -1):
            for ob in (1, -1):
                prob = probability_functional(st, a, b, oa, ob).value(y)
                # marginals vanish for the strategy, so
                # P(oa, ob) = (1 + oa ob Cor) / 4
                assert prob == pytest.approx((1.0 + oa * ob * c) / 4.0,
                                             abs=1e-12)
                total += prob
        assert total == pytest.approx(1.0, abs=1e-12)


def test_local_probability_functional_qubit_oracle():
    st = moment_structure(S22, "Q2")
    strat = QubitStrategy([0.3, 1.2], [0.8, 2.1], visibility=0.9)
    y = moment_vector(st, strat)
    for party, setting in (("alice", 1), ("alice", 2), ("bob", 2)):
        plus = local_probability_functional(st, party, setting, 1).value(y)
        minus = local_probability_functional(st, party, setting, -1).value(y)
        assert plus == pytest.approx(0.5, abs=1e-12)   # unbiased marginals
        assert plus + minus == pytest.approx(1.0, abs=1e-12)


def test_structure_cache_identity():
    assert moment_structure(S22, "Q2") is moment_structure(S22, "Q2")


def test_unknown_level_rejected():
    with pytest.raises(ValueError):
        moment_structure(S22, "Q3")


@settings(max_examples=30, deadline=None)
@given(hst.lists(hst.integers(min_value=1, max_value=3), max_size=8),
       hst.lists(hst.integers(min_value=1, max_value=3), max_size=8))
def test_reduction_is_idempotent_property(aw, bw):
    m = reduce_word(tuple(aw), tuple(bw))
    again = reduce_word(m.alice_word, m.bob_word)
    assert (again.alice_word, again.bob_word) == (m.alice_word, m.bob_word)
    # no adjacent duplicates remain
    for word in (m.alice_word, m.bob_word):
        assert all(word[i] != word[i + 1] for i in range(len(word) - 1))
