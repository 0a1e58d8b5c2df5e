"""Operators, classical bounds, qubit correlations, symmetry group."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from dirand.bell import (BellOperator, QubitStrategy, Scenario,
                         apply_group_element, canonical_form, catalog,
                         catalog_names, classical_bound, embed_operator,
                         evaluate, random_group_element, singlet_correlations)

S22 = Scenario(2, 2)
S43 = Scenario(4, 3)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(0, 2)
    s = Scenario(2, 3)
    s.check_alice(1)
    s.check_alice(2)
    with pytest.raises(ValueError):
        s.check_alice(3)
    with pytest.raises(ValueError):
        s.check_bob(0)


def test_operator_shape_validation():
    with pytest.raises(ValueError):
        BellOperator(S22, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        BellOperator(S22, np.zeros((2, 2)), alice_marginal=np.zeros(3))


def test_catalog_chsh_coefficients():
    op = catalog("chsh")
    assert op.scenario == S22
    assert op.joint.tolist() == [[1.0, 1.0], [1.0, -1.0]]
    assert op.is_correlator_only


def test_catalog_names_resolve():
    for name in catalog_names():
        op = catalog(name)
        assert op.scenario.n_alice >= 1
    with pytest.raises(ValueError):
        catalog("nonsense")
    with pytest.raises(ValueError):
        catalog("bc")  # needs n


def test_chained_coefficient_counts():
    # chain of 2n correlators, one negated
    for n in (3, 5, 7):
        op = catalog("bc", n=n)
        assert op.scenario == Scenario(n, n)
        nz = np.abs(op.joint) > 0
        assert nz.sum() == 2 * n
        assert (op.joint == -1).sum() == 1


def test_classical_bounds_enumerated():
    assert classical_bound(catalog("chsh")) == 2.0
    assert classical_bound(catalog("bc3")) == 4.0
    assert classical_bound(catalog("bc5")) == 8.0
    # E0 + E1 has local bound 2
    e = BellOperator(S22, catalog("e0").joint + catalog("e1").joint)
    assert classical_bound(e) == 2.0
    assert classical_bound(catalog("zero")) == 0.0


def test_classical_bound_marginals():
    op = BellOperator(S22, np.zeros((2, 2)),
                      alice_marginal=[1.0, -2.0], bob_marginal=[0.5, 0.0],
                      constant=0.25)
    # all four coefficients can be saturated independently
    assert classical_bound(op) == pytest.approx(3.75)


def test_singlet_correlations_sign():
    # aligned measurements on the singlet anticorrelate
    st = QubitStrategy([0.0], [0.0])
    corr = singlet_correlations(st)
    assert corr.joint[0, 0] == pytest.approx(-1.0)
    st = QubitStrategy([0.0], [math.pi])
    assert singlet_correlations(st).joint[0, 0] == pytest.approx(1.0)


def test_visibility_scales_correlators():
    st1 = QubitStrategy([0.3, 1.1], [0.7, 2.0], visibility=1.0)
    stp = QubitStrategy([0.3, 1.1], [0.7, 2.0], visibility=0.85)
    c1 = singlet_correlations(st1).joint
    cp = singlet_correlations(stp).joint
    assert np.allclose(cp, 0.85 * c1)


def test_chsh_singlet_value():
    # maximizing angles for the anticorrelated-correlator convention
    st = QubitStrategy([0.0, -math.pi / 2.0],
                       [3.0 * math.pi / 4.0, -3.0 * math.pi / 4.0])
    val = evaluate(catalog("chsh"), singlet_correlations(st))
    assert val == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)


def test_evaluate_includes_marginals_and_constant():
    op = BellOperator(S22, np.ones((2, 2)), alice_marginal=[1.0, 0.0],
                      constant=2.0)
    corr = singlet_correlations(QubitStrategy([0.0, 1.0], [0.5, 1.5], 0.9))
    expected = 2.0 + corr.alice[0] + corr.joint.sum()
    assert evaluate(op, corr) == pytest.approx(expected)


def test_embed_operator():
    op = embed_operator(catalog("chsh"), S43)
    assert op.scenario == S43
    assert op.joint[:2, :2].tolist() == [[1.0, 1.0], [1.0, -1.0]]
    assert not op.joint[2:].any() and not op.joint[:, 2:].any()
    with pytest.raises(ValueError):
        embed_operator(catalog("i1"), S22)


def test_canonical_form_fixed_point():
    op = catalog("bc3")
    c1 = canonical_form(op)
    assert (canonical_form(c1).joint == c1.joint).all()


def test_canonical_form_identifies_orbit():
    rng = np.random.default_rng(11)
    for name in ("chsh", "bc3", "t3", "i1", "i2"):
        op = catalog(name)
        if op.scenario != S43:
            op = embed_operator(op, S43)
        base = canonical_form(op).joint
        for _ in range(5):
            g = random_group_element(S43, rng)
            moved = apply_group_element(op, g)
            assert (canonical_form(moved).joint == base).all()


def test_canonical_form_separates_classes():
    a = canonical_form(embed_operator(catalog("bc3"), S43)).joint
    b = canonical_form(catalog("i1")).joint
    assert not (a == b).all()


@settings(max_examples=40, deadline=None)
@given(hst.integers(min_value=0, max_value=2 ** 32 - 1))
def test_group_action_preserves_classical_bound(seed):
    rng = np.random.default_rng(seed)
    joint = rng.integers(-1, 2, size=(3, 3)).astype(float)
    op = BellOperator(Scenario(3, 3), joint)
    g = random_group_element(Scenario(3, 3), rng)
    moved = apply_group_element(op, g)
    assert classical_bound(moved) == pytest.approx(classical_bound(op))


@settings(max_examples=25, deadline=None)
@given(hst.integers(min_value=0, max_value=2 ** 32 - 1))
def test_classical_bound_dominates_local_strategies(seed):
    rng = np.random.default_rng(seed)
    joint = rng.uniform(-1.0, 1.0, size=(2, 2))
    op = BellOperator(S22, joint)
    bound = classical_bound(op)
    for _ in range(8):
        a = rng.choice([-1.0, 1.0], 2)
        b = rng.choice([-1.0, 1.0], 2)
        assert float(a @ joint @ b) <= bound + 1e-12
