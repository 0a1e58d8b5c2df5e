"""Bell scenarios and correlator-form Bell operators.

Conventions used throughout:

* Settings are 1-based.  Outcomes are +1/-1.
* A correlator table stores single-party marginals ``alice[i]``, ``bob[j]``
  and joint correlators ``joint[i, j]`` (0-based arrays).
* Singlet correlations follow the sign convention
  ``Cor(i, j) = -p * cos(alpha_i - beta_j)``: equal angles give perfect
  anticorrelation.  Tests pick measurement angles accordingly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Scenario",
    "Correlations",
    "BellOperator",
    "QubitStrategy",
    "BlochStrategy",
    "singlet_correlations",
    "evaluate",
    "classical_bound",
    "catalog",
    "catalog_names",
    "canonical_form",
    "embed_operator",
    "random_group_element",
    "apply_group_element",
]


@dataclass(frozen=True)
class Scenario:
    """Numbers of binary-outcome settings for Alice and Bob."""

    n_alice: int
    n_bob: int

    def __post_init__(self):
        if self.n_alice < 1 or self.n_bob < 1:
            raise ValueError("scenario needs at least one setting per party")

    def check_alice(self, i: int):
        if not 1 <= i <= self.n_alice:
            raise ValueError(f"Alice setting {i} out of range 1..{self.n_alice}")

    def check_bob(self, j: int):
        if not 1 <= j <= self.n_bob:
            raise ValueError(f"Bob setting {j} out of range 1..{self.n_bob}")


@dataclass
class Correlations:
    """Full correlator table: marginals and joint correlators."""

    scenario: Scenario
    alice: np.ndarray  # shape (n_alice,)
    bob: np.ndarray  # shape (n_bob,)
    joint: np.ndarray  # shape (n_alice, n_bob)

    def __post_init__(self):
        self.alice = np.asarray(self.alice, dtype=float)
        self.bob = np.asarray(self.bob, dtype=float)
        self.joint = np.asarray(self.joint, dtype=float)
        s = self.scenario
        if self.alice.shape != (s.n_alice,) or self.bob.shape != (s.n_bob,) \
                or self.joint.shape != (s.n_alice, s.n_bob):
            raise ValueError("correlation table shape mismatch")


@dataclass
class BellOperator:
    """Linear functional of correlators: constant + marginals + joint terms.

    Named catalog operators are correlator-only (constant and marginals all
    zero); the extra terms exist so probability-style objectives can share
    the same representation.
    """

    scenario: Scenario
    joint: np.ndarray
    alice_marginal: np.ndarray = None
    bob_marginal: np.ndarray = None
    constant: float = 0.0
    name: str = ""

    def __post_init__(self):
        s = self.scenario
        self.joint = np.asarray(self.joint, dtype=float)
        if self.alice_marginal is None:
            self.alice_marginal = np.zeros(s.n_alice)
        if self.bob_marginal is None:
            self.bob_marginal = np.zeros(s.n_bob)
        self.alice_marginal = np.asarray(self.alice_marginal, dtype=float)
        self.bob_marginal = np.asarray(self.bob_marginal, dtype=float)
        if self.joint.shape != (s.n_alice, s.n_bob):
            raise ValueError("joint coefficient shape mismatch")
        if self.alice_marginal.shape != (s.n_alice,) \
                or self.bob_marginal.shape != (s.n_bob,):
            raise ValueError("marginal coefficient shape mismatch")

    @property
    def is_correlator_only(self) -> bool:
        return (self.constant == 0.0
                and not self.alice_marginal.any()
                and not self.bob_marginal.any())

    def key(self):
        """Hashable coefficient key (exact float tuple)."""
        return (self.scenario, self.constant,
                tuple(self.alice_marginal), tuple(self.bob_marginal),
                tuple(map(tuple, self.joint)))


@dataclass
class QubitStrategy:
    """Planar singlet measurements with Werner-state visibility p.

    Alice measures ``cos(a)*sz + sin(a)*sx`` and similarly Bob; the shared
    state is ``p |psi-><psi-| + (1-p) I/4``.
    """

    alice_angles: np.ndarray
    bob_angles: np.ndarray
    visibility: float = 1.0

    def __post_init__(self):
        self.alice_angles = np.atleast_1d(np.asarray(self.alice_angles, dtype=float))
        self.bob_angles = np.atleast_1d(np.asarray(self.bob_angles, dtype=float))
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")

    @property
    def scenario(self) -> Scenario:
        return Scenario(len(self.alice_angles), len(self.bob_angles))


@dataclass
class BlochStrategy:
    """Singlet measurements along arbitrary Bloch directions.

    Rows of the vector arrays are normalized on construction.  The planar
    :class:`QubitStrategy` covers most catalog operators; a few (the
    triple-CHSH operator) only reach their quantum maximum with
    measurement directions spanning all three Bloch axes.
    """

    alice_vectors: np.ndarray  # (n_alice, 3)
    bob_vectors: np.ndarray  # (n_bob, 3)
    visibility: float = 1.0

    def __post_init__(self):
        self.alice_vectors = np.atleast_2d(np.asarray(self.alice_vectors,
                                                      dtype=float))
        self.bob_vectors = np.atleast_2d(np.asarray(self.bob_vectors,
                                                    dtype=float))
        for arr in (self.alice_vectors, self.bob_vectors):
            if arr.shape[1] != 3:
                raise ValueError("Bloch vectors must have 3 components")
        self.alice_vectors = self.alice_vectors / np.linalg.norm(
            self.alice_vectors, axis=1, keepdims=True)
        self.bob_vectors = self.bob_vectors / np.linalg.norm(
            self.bob_vectors, axis=1, keepdims=True)
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")

    @property
    def scenario(self) -> Scenario:
        return Scenario(len(self.alice_vectors), len(self.bob_vectors))


def _bloch_vectors(strategy):
    """(alice (n,3), bob (n,3)) unit vectors; angle a maps to the z-x plane."""
    if isinstance(strategy, BlochStrategy):
        return strategy.alice_vectors, strategy.bob_vectors

    def from_angles(angles):
        return np.stack([np.sin(angles), np.zeros_like(angles),
                         np.cos(angles)], axis=1)

    return from_angles(strategy.alice_angles), from_angles(strategy.bob_angles)


def singlet_correlations(strategy) -> Correlations:
    """Correlator table of a noisy singlet.

    Cor(i, j) = -p a_i . b_j, which is -p cos(alpha_i - beta_j) for planar
    strategies; all marginals vanish.
    """
    a, b = _bloch_vectors(strategy)
    joint = -strategy.visibility * (a @ b.T)
    s = strategy.scenario
    return Correlations(s, np.zeros(s.n_alice), np.zeros(s.n_bob), joint)


def evaluate(op: BellOperator, corr: Correlations) -> float:
    """Value of the Bell operator on a correlator table."""
    if op.scenario != corr.scenario:
        raise ValueError("operator/correlations scenario mismatch")
    return float(op.constant
                 + op.alice_marginal @ corr.alice
                 + op.bob_marginal @ corr.bob
                 + np.sum(op.joint * corr.joint))


_MAX_ENUM_SETTINGS = 24


def classical_bound(op: BellOperator) -> float:
    """Local deterministic maximum by brute-force enumeration.

    Local randomization never beats a deterministic assignment for a linear
    functional, so enumerating all +-1 assignments is exact.
    """
    s = op.scenario
    if s.n_alice + s.n_bob > _MAX_ENUM_SETTINGS:
        raise ValueError("scenario too large for brute-force enumeration")
    A = np.array(list(itertools.product((-1.0, 1.0), repeat=s.n_alice)))
    B = np.array(list(itertools.product((-1.0, 1.0), repeat=s.n_bob)))
    vals = (A @ op.joint) @ B.T
    vals += (A @ op.alice_marginal)[:, None]
    vals += (B @ op.bob_marginal)[None, :]
    return float(op.constant + vals.max())


def _correlator_op(scenario: Scenario, terms, name: str = "") -> BellOperator:
    joint = np.zeros((scenario.n_alice, scenario.n_bob))
    for (i, j), coef in terms.items():
        scenario.check_alice(i)
        scenario.check_bob(j)
        joint[i - 1, j - 1] = coef
    return BellOperator(scenario, joint, name=name)


def _braunstein_caves(n: int) -> BellOperator:
    if n < 2:
        raise ValueError("chained operator needs n >= 2")
    s = Scenario(n, n)
    terms = {}
    for i in range(1, n + 1):
        terms[(i, i)] = 1.0
        if i < n:
            terms[(i, i + 1)] = 1.0
    terms[(n, 1)] = -1.0
    return _correlator_op(s, terms, name=f"BC{n}")


def _chsh() -> BellOperator:
    return _correlator_op(
        Scenario(2, 2),
        {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1},
        name="CHSH")


def _t3() -> BellOperator:
    terms = {
        (1, 1): 1, (2, 1): 1, (3, 1): 1, (4, 1): 1,
        (1, 2): 1, (2, 2): 1, (3, 2): -1, (4, 2): -1,
        (1, 3): 1, (2, 3): -1, (3, 3): 1, (4, 3): -1,
    }
    return _correlator_op(Scenario(4, 3), terms, name="T3")


def _modchsh() -> BellOperator:
    # CHSH on settings (1,2)x(2,3) plus one extra correlator C(2,1).
    terms = {(1, 2): 1, (1, 3): 1, (2, 1): 1, (2, 2): 1, (2, 3): -1}
    return _correlator_op(Scenario(2, 3), terms, name="modCHSH")


def _modchsh_aux() -> BellOperator:
    # CHSH embedded in the modified-CHSH scenario, used as a side condition.
    terms = {(1, 2): 1, (1, 3): 1, (2, 2): 1, (2, 3): -1}
    return _correlator_op(Scenario(2, 3), terms, name="modCHSH-aux")


def _i1() -> BellOperator:
    terms = {
        (1, 2): 1, (1, 3): -1, (2, 1): -1, (2, 2): -1,
        (3, 1): 1, (3, 3): 1, (4, 1): 1,
    }
    return _correlator_op(Scenario(4, 3), terms, name="I1")


def _i2() -> BellOperator:
    terms = {
        (1, 2): -1, (1, 3): 1, (2, 1): 1, (2, 2): 1, (2, 3): 1,
        (3, 2): 1, (3, 3): -1, (4, 1): 1, (4, 2): 1, (4, 3): 1,
    }
    return _correlator_op(Scenario(4, 3), terms, name="I2")


_CATALOG = {
    "chsh": _chsh,
    "e0": lambda: _correlator_op(Scenario(2, 2), {(1, 1): 1, (1, 2): 1}, name="E0"),
    "e1": lambda: _correlator_op(Scenario(2, 2), {(2, 1): 1, (2, 2): -1}, name="E1"),
    "t3": _t3,
    "chsh1": lambda: _correlator_op(
        Scenario(4, 3), {(1, 1): 1, (3, 1): 1, (1, 2): 1, (3, 2): -1}, name="CHSH1"),
    "chsh2": lambda: _correlator_op(
        Scenario(4, 3), {(2, 1): 1, (4, 1): 1, (2, 2): 1, (4, 2): -1}, name="CHSH2"),
    "modchsh": _modchsh,
    "modchsh-aux": _modchsh_aux,
    "i1": _i1,
    "i2": _i2,
    "zero": lambda: _correlator_op(Scenario(2, 2), {}, name="zero"),
}


def catalog(name: str, n: int | None = None) -> BellOperator:
    """Named Bell operators with exact transcribed coefficients.

    ``catalog("bc", n=5)`` or ``catalog("bc5")`` gives the n-th chained
    operator.  Other names: chsh, e0, e1, t3, chsh1, chsh2, modchsh,
    modchsh-aux, i1, i2, zero.
    """
    key = name.lower()
    if key == "bc":
        if n is None:
            raise ValueError("chained operator needs n")
        return _braunstein_caves(n)
    if key.startswith("bc") and key[2:].isdigit():
        return _braunstein_caves(int(key[2:]))
    if key in _CATALOG:
        return _CATALOG[key]()
    raise ValueError(f"unknown operator name: {name}")


def catalog_names():
    return sorted(_CATALOG) + ["bc3", "bc5", "bc7"]


# ---------------------------------------------------------------------------
# isomorphism canonicalization


_transform_cache: dict = {}


def _transform_tables(scenario: Scenario):
    """Flat index map and sign table for the full symmetry group.

    The group is generated by Alice-setting permutations, Bob-setting
    permutations and per-setting outcome sign flips.  For 4x3 it has
    4! * 3! * 2^7 = 18432 elements.
    """
    key = (scenario.n_alice, scenario.n_bob)
    if key in _transform_cache:
        return _transform_cache[key]
    na, nb = key
    perms_a = list(itertools.permutations(range(na)))
    perms_b = list(itertools.permutations(range(nb)))
    idx = np.empty((len(perms_a) * len(perms_b), na * nb), dtype=np.intp)
    k = 0
    base = np.arange(na * nb).reshape(na, nb)
    for pa in perms_a:
        for pb in perms_b:
            idx[k] = base[np.ix_(pa, pb)].ravel()
            k += 1
    sa = np.array(list(itertools.product((1.0, -1.0), repeat=na)))
    sb = np.array(list(itertools.product((1.0, -1.0), repeat=nb)))
    signs = (sa[:, None, :, None] * sb[None, :, None, :]).reshape(-1, na * nb)
    _transform_cache[key] = (idx, signs)
    return idx, signs


def canonical_form(op: BellOperator) -> BellOperator:
    """Lexicographically minimal coefficient table over the symmetry orbit.

    Two correlator-form operators are isomorphic iff their canonical forms
    have identical joint tables.
    """
    if not op.is_correlator_only:
        raise ValueError("canonical_form is defined for correlator-only operators")
    idx, signs = _transform_tables(op.scenario)
    flat = op.joint.ravel()
    # candidates: (n_perm * n_sign, na*nb)
    permuted = flat[idx]  # (n_perm, d)
    cands = (permuted[:, None, :] * signs[None, :, :]).reshape(-1, flat.size)
    order = np.lexsort(cands.T[::-1])
    best = cands[order[0]]
    return BellOperator(op.scenario, best.reshape(op.joint.shape),
                        name=op.name and f"canon({op.name})")


def embed_operator(op: BellOperator, scenario: Scenario) -> BellOperator:
    """Zero-pad an operator into a larger scenario (extra settings unused)."""
    if scenario.n_alice < op.scenario.n_alice \
            or scenario.n_bob < op.scenario.n_bob:
        raise ValueError("target scenario is smaller than the operator's")
    joint = np.zeros((scenario.n_alice, scenario.n_bob))
    joint[:op.scenario.n_alice, :op.scenario.n_bob] = op.joint
    am = np.zeros(scenario.n_alice)
    am[:op.scenario.n_alice] = op.alice_marginal
    bm = np.zeros(scenario.n_bob)
    bm[:op.scenario.n_bob] = op.bob_marginal
    return BellOperator(scenario, joint, am, bm, op.constant, op.name)


def random_group_element(scenario: Scenario, rng: np.random.Generator):
    """Pseudo-random symmetry-group element (perm_a, perm_b, signs_a, signs_b)."""
    pa = rng.permutation(scenario.n_alice)
    pb = rng.permutation(scenario.n_bob)
    sa = rng.integers(0, 2, scenario.n_alice) * 2 - 1
    sb = rng.integers(0, 2, scenario.n_bob) * 2 - 1
    return pa, pb, sa, sb


def apply_group_element(op: BellOperator, element) -> BellOperator:
    """Apply a symmetry-group element to a correlator-only operator."""
    pa, pb, sa, sb = element
    joint = op.joint[np.ix_(pa, pb)] * np.outer(sa, sb)
    return BellOperator(op.scenario, joint, name=op.name)
