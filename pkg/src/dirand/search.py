"""Randomized exploration of correlator-form Bell operators.

Samples operators with coefficients in a small set (default {-1, 0, 1}) on
the 4x3 scenario, evaluates the min-entropy each certifies at a fixed noise
level, bins the results into a histogram and extracts the best-performing
isomorphism classes.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bell import BellOperator, Scenario, canonical_form, classical_bound
from .npa import (functional_from_operator, moment_structure,
                  probability_functional)
from .sdp import SdpProblem, SolveOptions, certify_bound, solve

__all__ = [
    "SearchConfig",
    "OperatorEvaluation",
    "SearchReport",
    "sample_operator",
    "evaluate_operator",
    "run_search",
    "class_members_equivalent",
]

# histogram bins are 0.05 wide; a 1e-5 gap costs ~1e-4 bits via the
# certified fold, far below the bin resolution
_EVAL_OPTS = SolveOptions(gap_tol=1e-5, feas_tol=1e-5)
_DEGENERATE_TOL = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    scenario: Scenario = Scenario(4, 3)
    coefficient_set: tuple = (-1, 0, 1)
    sample_count: int = 500
    seed: int = 0
    p: float = 0.95
    level: str = "Q2"
    bin_width: float = 0.05
    top_threshold: float = 0.72

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.bin_width <= 0.0:
            raise ValueError("bin_width must be positive")
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must lie in (0, 1]")


@dataclass
class OperatorEvaluation:
    min_entropy: float
    pair: tuple | None
    quantum_max: float
    classical_max: float
    degenerate: bool
    ok: bool


@dataclass
class SearchReport:
    config: SearchConfig
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    top_classes: list           # (canonical BellOperator, count, entropy, pair)
    evaluated: int
    degenerate: int
    skipped: int
    entropies: list = field(repr=False, default_factory=list)

    def histogram_rows(self):
        return [(self.bin_edges[k], self.bin_edges[k + 1],
                 int(self.bin_counts[k])) for k in range(len(self.bin_counts))]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out)
        w.writerow(["bin_low", "bin_high", "count"])
        for lo, hi, n in self.histogram_rows():
            w.writerow([f"{lo:.6g}", f"{hi:.6g}", n])
        return out.getvalue()

    def top_classes_json(self) -> str:
        items = [{"joint": op.joint.astype(int).tolist(),
                  "count": int(n),
                  "min_entropy": round(float(h), 6),
                  "pair": list(pair)}
                 for op, n, h, pair in self.top_classes]
        return json.dumps({"p": self.config.p,
                           "top_threshold": self.config.top_threshold,
                           "classes": items}, indent=2)


def sample_operator(rng: np.random.Generator,
                    scenario: Scenario = Scenario(4, 3),
                    coefficient_set=(-1, 0, 1)) -> BellOperator:
    """Draw each joint correlator coefficient uniformly from the set."""
    coeffs = np.sort(np.asarray(coefficient_set, dtype=float))
    idx = rng.integers(0, len(coeffs),
                       size=(scenario.n_alice, scenario.n_bob))
    return BellOperator(scenario, coeffs[idx])


def _pair_candidates(op: BellOperator):
    """Settings pairs worth solving for.

    A pair with a setting absent from the operator never wins the max: the
    absent measurement is unconstrained, so the adversary may take it
    deterministic, and the pair's guessing probability is at least that of
    any pair sharing the constrained setting.
    """
    s = op.scenario
    a_used = [a for a in range(1, s.n_alice + 1)
              if op.joint[a - 1].any() or op.alice_marginal[a - 1] != 0.0]
    b_used = [b for b in range(1, s.n_bob + 1)
              if op.joint[:, b - 1].any() or op.bob_marginal[b - 1] != 0.0]
    return [(a, b) for a in a_used for b in b_used]


def evaluate_operator(op: BellOperator, config: SearchConfig,
                      structure=None) -> OperatorEvaluation:
    """Best certified min-entropy over settings pairs at the config noise.

    The device is constrained to attain p times the level-l maximum of the
    operator; a pair's entropy is -log2 of the certified maximum over its
    four outcome probabilities, and the best pair is reported.
    """
    if op.scenario != config.scenario:
        raise ValueError("operator scenario does not match config")
    st = structure if structure is not None \
        else moment_structure(config.scenario, config.level)
    cmax = classical_bound(op)
    # gap 1e-7 keeps the value well inside the 1e-6 degeneracy margin
    sol = solve(SdpProblem(st, functional_from_operator(st, op), "max"),
                SolveOptions(gap_tol=1e-7, feas_tol=1e-7))
    if sol.status != "Optimal":
        return OperatorEvaluation(math.nan, None, math.nan, cmax, False, False)
    qmax = sol.objective_value
    if qmax - cmax < _DEGENERATE_TOL:
        return OperatorEvaluation(0.0, None, qmax, cmax, True, True)

    eqs = [(functional_from_operator(st, op), config.p * qmax)]
    # correlator-only constraints are invariant under flipping every
    # outcome, which swaps (+,+) with (-,-); two solves cover four outcomes
    corr_only = op.is_correlator_only
    best_h, best_pair = -1.0, None
    for (a, b) in _pair_candidates(op):
        gmax = 0.0
        outcomes = [(1, 1), (1, -1)] if corr_only \
            else [(oa, ob) for oa in (1, -1) for ob in (1, -1)]
        for oa, ob in outcomes:
            obj = probability_functional(st, a, b, oa, ob)
            prob = SdpProblem(st, obj, "max", equalities=eqs)
            s = solve(prob, _EVAL_OPTS)
            if s.status != "Optimal":
                return OperatorEvaluation(math.nan, None, qmax, cmax,
                                          False, False)
            gmax = max(gmax, certify_bound(prob, s))
        gmax = min(1.0, max(0.25, gmax))
        h = -math.log2(gmax)
        if h > best_h:
            best_h, best_pair = h, (a, b)
    return OperatorEvaluation(max(0.0, best_h), best_pair, qmax, cmax,
                              False, True)


def run_search(config: SearchConfig, progress=None) -> SearchReport:
    """Sample, evaluate with a canonical-form cache, bin, extract top classes.

    Degenerate operators (quantum max equals the classical bound) certify
    zero entropy and land in the first bin; ``skipped`` counts solver
    failures only, which are excluded from the histogram.
    """
    rng = np.random.default_rng(config.seed)
    st = moment_structure(config.scenario, config.level)
    cache = {}
    entropies = []
    degenerate = skipped = 0
    class_counts = {}
    for i in range(config.sample_count):
        op = sample_operator(rng, config.scenario, config.coefficient_set)
        rep = canonical_form(op)
        key = rep.key()
        if key not in cache:
            cache[key] = evaluate_operator(rep, config, structure=st)
        ev = cache[key]
        if progress is not None:
            progress(i, ev)
        if not ev.ok:
            skipped += 1
            continue
        if ev.degenerate:
            degenerate += 1
        entropies.append(ev.min_entropy)
        if ev.min_entropy > config.top_threshold:
            cnt, _ = class_counts.get(key, (0, None))
            class_counts[key] = (cnt + 1, (rep, ev))

    w = config.bin_width
    n_bins = max(1, int(math.ceil((max(entropies, default=0.0) + 1e-12) / w)))
    edges = np.arange(n_bins + 1) * w
    counts = np.zeros(n_bins, dtype=int)
    for h in entropies:
        counts[min(n_bins - 1, int(h / w))] += 1

    top = [(rep, n, ev.min_entropy, ev.pair)
           for n, (rep, ev) in class_counts.values()]
    top.sort(key=lambda t: (-t[2], -t[1]))
    return SearchReport(config, edges, counts, top,
                        evaluated=len(entropies), degenerate=degenerate,
                        skipped=skipped, entropies=entropies)


def class_members_equivalent(op_a: BellOperator, op_b: BellOperator,
                             p_list, level: str = "Q2",
                             tol: float = 1e-5) -> bool:
    """Same relaxation maximum and same certified entropies across p_list."""
    if op_a.scenario != op_b.scenario:
        raise ValueError("operators live on different scenarios")
    st = moment_structure(op_a.scenario, level)
    for p in p_list:
        cfg = SearchConfig(scenario=op_a.scenario, p=p, level=level)
        ea = evaluate_operator(op_a, cfg, structure=st)
        eb = evaluate_operator(op_b, cfg, structure=st)
        if not (ea.ok and eb.ok):
            return False
        if abs(ea.quantum_max - eb.quantum_max) > tol:
            return False
        if abs(ea.min_entropy - eb.min_entropy) > tol:
            return False
    return True
