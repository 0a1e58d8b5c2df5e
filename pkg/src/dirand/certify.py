"""Noise-parameterized randomness certificates and min-entropy bounds.

A certificate is a named set of Bell-value constraints, scaled by the
visibility p, under which the guessing probability of a fixed settings
pair is maximized outcome by outcome.  The max of the certified outcome
bounds gives the guessing probability; min-entropy is its -log2.

The default constraint relation is equality (the device is required to
reach the stated value), matching the published numbers.  A ">=" mode is
available; it yields monotone (in p) and still-valid lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bell import BellOperator, Scenario, catalog
from .npa import (MomentStructure, functional_from_operator,
                  local_probability_functional, moment_structure,
                  probability_functional)
from .sdp import SdpProblem, SdpSolution, SolveOptions, certify_bound, solve

__all__ = [
    "Certificate",
    "CertificationResult",
    "make_certificate",
    "certificate_names",
    "quantum_max",
    "t3max_given_C",
    "guessing_probability",
    "local_guessing_probability",
    "sweep_noise",
    "tune_parameter",
    "augmented_certificate",
    "local_chsh_entropy",
]

SQRT2 = math.sqrt(2.0)
T3_MAX = 4.0 * math.sqrt(3.0)  # Q2 value, matches the SDP to < 1e-8
I1_MAX = 1.0 + 6.0 * math.cos(math.pi / 6.0)
I2_MAX = 2.0 + 4.0 * SQRT2


def chained_max(n: int) -> float:
    return 2.0 * n * math.cos(math.pi / (2.0 * n))


@dataclass
class Certificate:
    """Constraint-set generator parameterized by noise p (and one tunable)."""

    name: str
    scenario: Scenario
    target_pair: tuple
    level: str = "Q2"
    param_name: str | None = None  # 'phi' or 'C'
    param_range: tuple | None = None
    # constraints(p, param) -> (equalities, inequalities), each a list of
    # (BellOperator, rhs); inequality means operator-value >= rhs.
    constraints: callable = None

    def constraint_functionals(self, structure: MomentStructure, p: float,
                               param: float | None, mode: str = "eq"):
        if self.param_name is not None and param is None:
            raise ValueError(f"certificate {self.name} needs parameter "
                             f"{self.param_name}")
        eqs, ineqs = self.constraints(p, param)
        feq = [(functional_from_operator(structure, op), rhs) for op, rhs in eqs]
        fineq = [(functional_from_operator(structure, op), rhs) for op, rhs in ineqs]
        if mode == "eq":
            return feq, fineq
        if mode == "geq":
            return [], feq + fineq
        raise ValueError("mode must be 'eq' or 'geq'")


@dataclass
class CertificationResult:
    certificate: str
    p: float
    param: float | None
    pair: tuple
    outcome_maxima: list
    guessing_probability: float
    min_entropy: float
    statuses: list

    @property
    def ok(self) -> bool:
        return all(s == "Optimal" for s in self.statuses)


# The near-boundary certificate instances (p -> 1, conditions at the
# Tsirelson point) have an almost-empty strict interior and floor out at
# a duality gap of a few 1e-7 in double precision.  The bound returned by
# certify_bound folds the actual residuals in, so loosening the stopping
# tolerances here costs ~1e-5 bits, far below the published precision.
_DEFAULT_OPTS = SolveOptions(gap_tol=1e-6, feas_tol=5e-6)


def quantum_max(op: BellOperator, level: str = "Q2",
                options: SolveOptions | None = None) -> float:
    """Level-l relaxation maximum of a Bell operator (upper bounds quantum)."""
    st = moment_structure(op.scenario, level)
    # unconstrained relaxations converge cleanly; keep the solver defaults
    sol = solve(SdpProblem(st, functional_from_operator(st, op), "max"),
                options or SolveOptions())
    if sol.status != "Optimal":
        raise RuntimeError(f"quantum_max solver status {sol.status}")
    return sol.objective_value


@lru_cache(maxsize=512)
def t3max_given_C(C: float, level: str = "Q2") -> float:
    """Max of the T3 operator given both embedded CHSH values >= C (p=1)."""
    if not 0.0 <= C <= 2.0 * SQRT2 + 1e-12:
        raise ValueError("C must lie in [0, 2*sqrt(2)]")
    # At C = 2 sqrt(2) the feasible set degenerates to the Tsirelson point
    # (no interior), which breaks the interior-point iteration.  Back off by
    # 1e-5; the optimum varies as O(sqrt(backoff)) here, so queries within
    # 1e-5 of the boundary are reported ~1e-2 high, which only affects the
    # extreme endpoint of a constraint sweep.
    C = min(C, 2.0 * SQRT2 - 1e-5)
    st = moment_structure(Scenario(4, 3), level)
    obj = functional_from_operator(st, catalog("t3"))
    ineqs = [(functional_from_operator(st, catalog("chsh1")), C),
             (functional_from_operator(st, catalog("chsh2")), C)]
    sol = solve(SdpProblem(st, obj, "max", inequalities=ineqs),
                SolveOptions(gap_tol=1e-7, feas_tol=1e-6))
    if sol.status != "Optimal":
        raise RuntimeError(f"t3max_given_C solver status {sol.status}")
    return sol.objective_value


def _simple(name, opname, pair, rhs_of_p, level="Q2"):
    op = catalog(opname)

    def gen(p, param):
        return [(op, p * rhs_of_p)], []

    return Certificate(name, op.scenario, pair, level=level, constraints=gen)


def _e0e1():
    e0, e1 = catalog("e0"), catalog("e1")

    def gen(p, phi):
        return [(e0, p * 2.0 * math.cos(phi)), (e1, p * 2.0 * math.sin(phi))], []

    return Certificate("e0e1", e0.scenario, (2, 1), level="Q2",
                       param_name="phi", param_range=(0.0, math.pi / 2.0),
                       constraints=gen)


def _t3c():
    t3, c1, c2 = catalog("t3"), catalog("chsh1"), catalog("chsh2")

    def gen(p, C):
        return ([(t3, p * t3max_given_C(round(C, 12)))],
                [(c1, p * C), (c2, p * C)])

    return Certificate("t3c", t3.scenario, (1, 3), level="Q2",
                       param_name="C", param_range=(0.0, 2.0 * SQRT2),
                       constraints=gen)


def _modchsh_plus():
    base = _simple("modchsh+", "modchsh", (1, 1), 1.0 + 2.0 * SQRT2)
    aux = catalog("modchsh-aux")
    return augmented_certificate(base, [(aux, lambda p: p * 2.0 * SQRT2, "geq")],
                                 name="modchsh+")


_REGISTRY = {
    "chsh": lambda: _simple("chsh", "chsh", (1, 1), 2.0 * SQRT2),
    "bc3": lambda: _simple("bc3", "bc3", (1, 3), chained_max(3)),
    "bc5": lambda: _simple("bc5", "bc5", (1, 4), chained_max(5)),
    "bc7": lambda: _simple("bc7", "bc7", (1, 5), chained_max(7), level="Q1+AB"),
    "e0e1": _e0e1,
    "t3": lambda: _simple("t3", "t3", (1, 3), T3_MAX),
    "t3c": _t3c,
    "modchsh": lambda: _simple("modchsh", "modchsh", (1, 1), 1.0 + 2.0 * SQRT2),
    "modchsh+": _modchsh_plus,
    "i1": lambda: _simple("i1", "i1", (1, 1), I1_MAX),
    "i2": lambda: _simple("i2", "i2", (1, 1), I2_MAX),
}


def make_certificate(name: str) -> Certificate:
    try:
        return _REGISTRY[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown certificate: {name}") from None


def certificate_names():
    return sorted(_REGISTRY)


def augmented_certificate(base: Certificate, extra, name: str | None = None
                          ) -> Certificate:
    """Certificate with additional constraints.

    ``extra`` is a list of (BellOperator, rhs_as_function_of_p, relation)
    with relation 'eq' or 'geq'.  Adding constraints can only shrink the
    feasible set, so the certified entropy never decreases.
    """
    for op, _, rel in extra:
        if op.scenario != base.scenario:
            raise ValueError("augmenting operator scenario mismatch")
        if rel not in ("eq", "geq"):
            raise ValueError("relation must be 'eq' or 'geq'")
    inner = base.constraints

    def gen(p, param):
        eqs, ineqs = inner(p, param)
        eqs = list(eqs)
        ineqs = list(ineqs)
        for op, rhs_fn, rel in extra:
            (eqs if rel == "eq" else ineqs).append((op, rhs_fn(p)))
        return eqs, ineqs

    return Certificate(name or f"{base.name}+", base.scenario, base.target_pair,
                       level=base.level, param_name=base.param_name,
                       param_range=base.param_range, constraints=gen)


def _clamped_entropy(g: float, floor: float) -> tuple:
    g = min(1.0, max(floor, g))
    return g, max(0.0, -math.log2(g))


def _run_outcomes(cert, objectives, p, param, level, mode, options,
                  floor) -> CertificationResult:
    level = level or cert.level
    st = moment_structure(cert.scenario, level)
    eqs, ineqs = cert.constraint_functionals(st, p, param, mode)
    maxima = []
    statuses = []
    for obj in objectives(st):
        prob = SdpProblem(st, obj, "max", equalities=eqs, inequalities=ineqs)
        sol = solve(prob, options or _DEFAULT_OPTS)
        statuses.append(sol.status)
        maxima.append(certify_bound(prob, sol) if sol.status == "Optimal"
                      else math.nan)
    if all(s == "Optimal" for s in statuses):
        g, h = _clamped_entropy(max(maxima), floor)
    else:
        g, h = math.nan, math.nan
    return CertificationResult(cert.name, p, param, cert.target_pair,
                               maxima, g, h, statuses)


def guessing_probability(cert: Certificate, p: float, param: float | None = None,
                         level: str | None = None, mode: str = "eq",
                         options: SolveOptions | None = None) -> CertificationResult:
    """Certified max over the four outcome-pair probabilities of the target pair."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    a, b = cert.target_pair

    def objectives(st):
        return [probability_functional(st, a, b, oa, ob)
                for oa in (1, -1) for ob in (1, -1)]

    return _run_outcomes(cert, objectives, p, param, level, mode, options, 0.25)


def local_guessing_probability(cert: Certificate, p: float,
                               param: float | None = None,
                               level: str | None = None, mode: str = "eq",
                               party: str = "alice",
                               options: SolveOptions | None = None
                               ) -> CertificationResult:
    """Certified single-party guessing probability of the target setting."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    setting = cert.target_pair[0] if party == "alice" else cert.target_pair[1]

    def objectives(st):
        return [local_probability_functional(st, party, setting, o)
                for o in (1, -1)]

    return _run_outcomes(cert, objectives, p, param, level, mode, options, 0.5)


def sweep_noise(cert: Certificate, p_list, params_policy=None,
                level: str | None = None, mode: str = "eq",
                options: SolveOptions | None = None) -> list:
    """One certification per p.

    ``params_policy``: None (certificate has no parameter), a fixed number,
    a mapping p -> value, or the string 'tuned' for a per-p grid search.
    """
    out = []
    for p in p_list:
        if params_policy is None:
            param = None
        elif params_policy == "tuned":
            param, res = tune_parameter(cert, p, level=level, mode=mode,
                                        options=options)
            out.append(res)
            continue
        elif callable(params_policy):
            param = params_policy(p)
        elif isinstance(params_policy, dict):
            param = params_policy[p]
        else:
            param = float(params_policy)
        out.append(guessing_probability(cert, p, param, level, mode, options))
    return out


_GRID_SIZES = {"phi": 65, "C": 57}
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def tune_parameter(cert: Certificate, p: float, grid=None,
                   refine_steps: int = 24, level: str | None = None,
                   mode: str = "eq", options: SolveOptions | None = None):
    """Grid search plus golden-section refinement of the tunable parameter.

    Returns (best_param, CertificationResult at best_param).  The grid
    includes both endpoints of the parameter range (the optimal C sits at
    the boundary 2*sqrt(2) for some noises).
    """
    if cert.param_name is None:
        raise ValueError(f"certificate {cert.name} has no tunable parameter")
    lo, hi = cert.param_range
    if grid is None:
        grid = np.linspace(lo, hi, _GRID_SIZES.get(cert.param_name, 61))
    cache: dict = {}

    def entropy(x):
        x = float(np.clip(x, lo, hi))
        key = round(x, 12)
        if key not in cache:
            res = guessing_probability(cert, p, x, level, mode, options)
            cache[key] = (res.min_entropy if res.ok else -math.inf, res)
        return cache[key][0]

    vals = [entropy(x) for x in grid]
    i = int(np.argmax(vals))
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    # golden-section (maximization, unimodal on the bracket)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = entropy(x1), entropy(x2)
    for _ in range(refine_steps):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = entropy(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = entropy(x1)
    candidates = [(v, k) for k, (v, _) in cache.items()]
    best_v, best_k = max(candidates)
    return best_k, cache[best_k][1]


def local_chsh_entropy(p: float) -> float:
    """Closed-form local-randomness oracle for the CHSH certificate.

    -log2(1/2 + 1/2 sqrt(2 - S^2/4)) with S = p * 2 sqrt(2); zero below
    the classical threshold.
    """
    S = p * 2.0 * SQRT2
    if S <= 2.0:
        return 0.0
    g = 0.5 + 0.5 * math.sqrt(max(0.0, 2.0 - S * S / 4.0))
    return -math.log2(g)
