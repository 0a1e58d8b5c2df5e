"""Interior-point solver: toy exactness, duality, determinism, robustness."""

import math

import numpy as np
import pytest

from dirand.bell import BellOperator, Scenario, catalog
from dirand.npa import (MomentFunctional, MomentStructure,
                        functional_from_operator, moment_structure,
                        reduce_word)
from dirand.sdp import SdpProblem, SolveOptions, certify_bound, solve

SQRT2 = math.sqrt(2.0)


def _toy_structure() -> MomentStructure:
    """2x2 matrix [[1, y1], [y1, y2]], identity pinned to 1."""
    return MomentStructure(scenario=Scenario(1, 1), level="toy",
                           monomials=[reduce_word((), ()),
                                      reduce_word((1,), ())],
                           entry_class=np.array([[0, 1], [1, 2]]),
                           n_vars=3,
                           class_words=[reduce_word((), ()),
                                        reduce_word((1,), ()),
                                        reduce_word((1,), (1,))])


def test_toy_max_offdiagonal():
    # max y1 s.t. [[1, y1], [y1, 1]] >= 0  ->  1
    st = _toy_structure()
    obj = MomentFunctional({1: 1.0})
    eq = [(MomentFunctional({2: 1.0}), 1.0)]
    sol = solve(SdpProblem(st, obj, "max", equalities=eq))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-8)


def test_toy_min_diagonal():
    # min y2 s.t. [[1, 1], [1, y2]] >= 0  ->  1
    st = _toy_structure()
    obj = MomentFunctional({2: 1.0})
    eq = [(MomentFunctional({1: 1.0}), 1.0)]
    sol = solve(SdpProblem(st, obj, "min", equalities=eq))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-8)


def test_toy_inequality_binds():
    # min y1 s.t. y1 >= -0.5 (PSD alone would allow -1)
    st = _toy_structure()
    obj = MomentFunctional({1: 1.0})
    eq = [(MomentFunctional({2: 1.0}), 1.0)]
    ineq = [(MomentFunctional({1: 1.0}), -0.5)]
    sol = solve(SdpProblem(st, obj, "min", equalities=eq, inequalities=ineq))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(-0.5, abs=1e-7)


def test_constant_objective_short_circuit():
    st = _toy_structure()
    obj = MomentFunctional({}, 0.75)
    eq = [(MomentFunctional({1: 1.0}), 0.0), (MomentFunctional({2: 1.0}), 1.0)]
    sol = solve(SdpProblem(st, obj, "max", equalities=eq))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(0.75)


def test_correlator_bounded_by_one():
    st = moment_structure(Scenario(1, 1), "Q2")
    cor = functional_from_operator(
        st, BellOperator(Scenario(1, 1), [[1.0]]))
    sol = solve(SdpProblem(st, cor, "max"))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-7)


def test_chsh_tsirelson_q1():
    st = moment_structure(Scenario(2, 2), "Q1")
    obj = functional_from_operator(st, catalog("chsh"))
    sol = solve(SdpProblem(st, obj, "max"))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(2.0 * SQRT2, abs=1e-6)


def test_bc3_q2():
    st = moment_structure(Scenario(3, 3), "Q2")
    obj = functional_from_operator(st, catalog("bc3"))
    sol = solve(SdpProblem(st, obj, "max"))
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(6.0 * math.cos(math.pi / 6.0),
                                                abs=1e-6)


def test_certified_bound_brackets_optimum():
    # the dual-side certified bound must sit on the safe side of the
    # returned value for maximization and minimization alike
    st = moment_structure(Scenario(2, 2), "Q1")
    obj = functional_from_operator(st, catalog("chsh"))
    prob = SdpProblem(st, obj, "max")
    sol = solve(prob)
    bound = certify_bound(prob, sol)
    assert sol.objective_value == pytest.approx(2.0 * SQRT2, abs=1e-6)
    assert bound >= 2.0 * SQRT2 - 1e-12          # safe side of the optimum
    assert bound == pytest.approx(2.0 * SQRT2, abs=1e-5)

    prob = SdpProblem(st, obj, "min")
    sol = solve(prob)
    bound = certify_bound(prob, sol)
    assert sol.objective_value == pytest.approx(-2.0 * SQRT2, abs=1e-6)
    assert bound <= -2.0 * SQRT2 + 1e-12
    assert bound == pytest.approx(-2.0 * SQRT2, abs=1e-5)


def test_moment_vector_reconstructed_feasible():
    st = moment_structure(Scenario(2, 2), "Q2")
    obj = functional_from_operator(st, catalog("chsh"))
    eqs = [(functional_from_operator(st, catalog("e0")), 1.2)]
    sol = solve(SdpProblem(st, obj, "max", equalities=eqs))
    assert sol.status == "Optimal"
    y = sol.y
    assert y[0] == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.eigvalsh(st.assemble(y)).min() > -1e-6
    assert eqs[0][0].value(y) == pytest.approx(1.2, abs=1e-6)
    assert obj.value(y) == pytest.approx(sol.objective_value, abs=1e-6)


def test_determinism():
    st = moment_structure(Scenario(3, 3), "Q2")
    obj = functional_from_operator(st, catalog("bc3"))
    s1 = solve(SdpProblem(st, obj, "max"))
    s2 = solve(SdpProblem(st, obj, "max"))
    assert s1.objective_value == s2.objective_value
    assert s1.iterations == s2.iterations
    assert np.array_equal(s1.y, s2.y)


@pytest.mark.parametrize("name,scen", [("chsh", Scenario(2, 2)),
                                       ("bc3", Scenario(3, 3)),
                                       ("t3", Scenario(4, 3))])
def test_objective_scaling_invariance(name, scen):
    st = moment_structure(scen, "Q2")
    obj = functional_from_operator(st, catalog(name))
    v1 = solve(SdpProblem(st, obj, "max")).objective_value
    v10 = solve(SdpProblem(st, obj.scaled(10.0), "max")).objective_value
    assert v10 == pytest.approx(10.0 * v1, rel=1e-6)


def test_redundant_equality_harmless():
    st = moment_structure(Scenario(2, 2), "Q2")
    obj = functional_from_operator(st, catalog("chsh"))
    eq = (functional_from_operator(st, catalog("e0")), 1.0)
    v1 = solve(SdpProblem(st, obj, "max", equalities=[eq])).objective_value
    v2 = solve(SdpProblem(st, obj, "max",
                          equalities=[eq, eq])).objective_value
    assert v2 == pytest.approx(v1, abs=1e-7)


def test_infeasible_equality_flagged():
    # a correlator cannot reach 3
    st = moment_structure(Scenario(2, 2), "Q1")
    obj = functional_from_operator(st, catalog("chsh"))
    eqs = [(functional_from_operator(st, catalog("e0")), 3.0)]
    sol = solve(SdpProblem(st, obj, "max", equalities=eqs))
    assert sol.status != "Optimal"


def test_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(gap_tol=-1.0)
