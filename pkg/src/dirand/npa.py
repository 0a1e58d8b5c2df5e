"""NPA moment-matrix structure for two-party binary-outcome scenarios.

Monomials are words over the +1-outcome projectors of each setting
(A letters and B letters kept separate, encoding commutation between the
parties).  The moment matrix entry (r, c) is <w_r^dagger w_c>; entries are
grouped into equivalence classes after projector idempotence and adjoint
identification, giving a real symmetric matrix parameterized by one moment
variable per class.  Class 0 is the identity moment, pinned to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bell import BellOperator, Scenario

__all__ = [
    "Monomial",
    "MomentStructure",
    "MomentFunctional",
    "reduce_word",
    "monomials",
    "moment_structure",
    "functional_from_operator",
    "probability_functional",
    "local_probability_functional",
]

LEVELS = ("Q1", "Q1+AB", "Q2")


@dataclass(frozen=True)
class Monomial:
    """Reduced word: Alice letters then Bob letters (1-based settings)."""

    alice_word: tuple
    bob_word: tuple

    @property
    def length(self) -> int:
        return len(self.alice_word) + len(self.bob_word)

    def adjoint(self) -> "Monomial":
        return Monomial(self.alice_word[::-1], self.bob_word[::-1])

    def __str__(self):
        if self.length == 0:
            return "1"
        parts = [f"A{i}" for i in self.alice_word] + [f"B{j}" for j in self.bob_word]
        return "".join(parts)


def _collapse(word) -> tuple:
    out = []
    for letter in word:
        if not out or out[-1] != letter:
            out.append(letter)
    return tuple(out)


def reduce_word(alice_word, bob_word, scenario: Scenario | None = None) -> Monomial:
    """Canonical monomial: adjacent duplicates collapsed within each party.

    Projectors of different settings of one party do not commute, so no
    further rewriting is done.
    """
    if scenario is not None:
        for i in alice_word:
            scenario.check_alice(i)
        for j in bob_word:
            scenario.check_bob(j)
    return Monomial(_collapse(alice_word), _collapse(bob_word))


def monomials(scenario: Scenario, level: str) -> list:
    """Ordered monomial list for an NPA level.

    Q1 = {1} + single letters; Q1+AB adds A_i B_j; Q2 adds all reduced
    length-2 words.  Ordering: by length, then party-lexicographic, which is
    part of the structure's identity (regression baselines depend on it).
    """
    if level not in LEVELS:
        raise ValueError(f"unsupported level {level!r}; use one of {LEVELS}")
    na, nb = scenario.n_alice, scenario.n_bob
    out = [Monomial((), ())]
    out += [Monomial((i,), ()) for i in range(1, na + 1)]
    out += [Monomial((), (j,)) for j in range(1, nb + 1)]
    if level == "Q2":
        out += [Monomial((i, k), ()) for i in range(1, na + 1)
                for k in range(1, na + 1) if i != k]
        out += [Monomial((), (j, l)) for j in range(1, nb + 1)
                for l in range(1, nb + 1) if j != l]
    if level in ("Q1+AB", "Q2"):
        out += [Monomial((i,), (j,)) for i in range(1, na + 1)
                for j in range(1, nb + 1)]
    return out


def _class_key(m: Monomial):
    """Identify a word with its adjoint (real symmetric moment matrix)."""
    a = (m.alice_word, m.bob_word)
    m2 = m.adjoint()
    b = (m2.alice_word, m2.bob_word)
    return min(a, b)


@dataclass
class MomentStructure:
    """Monomial basis plus the equivalence-class map of moment entries."""

    scenario: Scenario
    level: str
    monomials: list
    entry_class: np.ndarray  # (n, n) int
    n_vars: int
    class_words: list  # representative Monomial per class
    _word_class: dict = field(repr=False, default_factory=dict)
    _mono_index: dict = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def class_of(self, alice_word, bob_word) -> int:
        """Class index of a (reduced) word; KeyError if not tracked."""
        m = reduce_word(alice_word, bob_word)
        return self._word_class[_class_key(m)]

    def class_positions(self):
        """Per-class list of (row, col) entries of the moment matrix."""
        pos = [[] for _ in range(self.n_vars)]
        n = self.dim
        for r in range(n):
            for c in range(n):
                pos[self.entry_class[r, c]].append((r, c))
        return pos

    def assemble(self, y: np.ndarray) -> np.ndarray:
        """Moment matrix from a moment vector (y[0] is the identity moment)."""
        y = np.asarray(y, dtype=float)
        return y[self.entry_class]

    def dump(self) -> str:
        """Text dump (monomials + class matrix) for golden-file comparisons."""
        lines = [f"scenario ({self.scenario.n_alice},{self.scenario.n_bob}) "
                 f"level {self.level} dim {self.dim} n_vars {self.n_vars}"]
        lines += [f"{i}: {m}" for i, m in enumerate(self.monomials)]
        for row in self.entry_class:
            lines.append(" ".join(str(int(v)) for v in row))
        return "\n".join(lines)


_structure_cache: dict = {}


def moment_structure(scenario: Scenario, level: str) -> MomentStructure:
    """Build (and cache) the moment-matrix structure for a scenario/level."""
    key = (scenario.n_alice, scenario.n_bob, level)
    if key in _structure_cache:
        return _structure_cache[key]
    monos = monomials(scenario, level)
    n = len(monos)
    word_class: dict = {}
    class_words: list = []
    entry = np.empty((n, n), dtype=np.int32)
    for r in range(n):
        wr = monos[r].adjoint()
        for c in range(n):
            wc = monos[c]
            m = reduce_word(wr.alice_word + wc.alice_word,
                            wr.bob_word + wc.bob_word)
            k = _class_key(m)
            cls = word_class.get(k)
            if cls is None:
                cls = len(class_words)
                word_class[k] = cls
                class_words.append(m)
            entry[r, c] = cls
    st = MomentStructure(scenario, level, monos, entry, len(class_words),
                         class_words, word_class,
                         {m: i for i, m in enumerate(monos)})
    _structure_cache[key] = st
    return st


@dataclass
class MomentFunctional:
    """Sparse linear functional of moment variables plus a constant."""

    coeffs: dict  # class index -> coefficient
    constant: float = 0.0

    def value(self, y: np.ndarray) -> float:
        return self.constant + sum(c * y[k] for k, c in self.coeffs.items())

    def scaled(self, factor: float) -> "MomentFunctional":
        return MomentFunctional({k: factor * c for k, c in self.coeffs.items()},
                                factor * self.constant)

    def plus(self, other: "MomentFunctional") -> "MomentFunctional":
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0.0) + c
        return MomentFunctional(coeffs, self.constant + other.constant)

    def cleaned(self) -> "MomentFunctional":
        return MomentFunctional({k: c for k, c in self.coeffs.items() if c != 0.0},
                                self.constant)


def _add(coeffs: dict, cls: int, c: float):
    coeffs[cls] = coeffs.get(cls, 0.0) + c


def functional_from_operator(structure: MomentStructure,
                             op: BellOperator) -> MomentFunctional:
    """Translate a Bell operator into a functional of moment variables.

    Cor(a, b) -> 4 y[A_a B_b] - 2 y[A_a] - 2 y[B_b] + 1 and
    <A_i> -> 2 y[A_i] - 1 (the +1-projector encoding of +-1 observables).
    """
    if op.scenario != structure.scenario:
        raise ValueError("operator/structure scenario mismatch")
    coeffs: dict = {}
    const = op.constant
    for i in range(1, op.scenario.n_alice + 1):
        c = op.alice_marginal[i - 1]
        if c:
            _add(coeffs, structure.class_of((i,), ()), 2.0 * c)
            const -= c
    for j in range(1, op.scenario.n_bob + 1):
        c = op.bob_marginal[j - 1]
        if c:
            _add(coeffs, structure.class_of((), (j,)), 2.0 * c)
            const -= c
    for i in range(1, op.scenario.n_alice + 1):
        for j in range(1, op.scenario.n_bob + 1):
            c = op.joint[i - 1, j - 1]
            if not c:
                continue
            _add(coeffs, structure.class_of((i,), (j,)), 4.0 * c)
            _add(coeffs, structure.class_of((i,), ()), -2.0 * c)
            _add(coeffs, structure.class_of((), (j,)), -2.0 * c)
            const += c
    return MomentFunctional(coeffs, const).cleaned()


def probability_functional(structure: MomentStructure, a: int, b: int,
                           outcome_a: int, outcome_b: int) -> MomentFunctional:
    """P(outcome_a, outcome_b | a, b) as a functional of moment variables."""
    structure.scenario.check_alice(a)
    structure.scenario.check_bob(b)
    if outcome_a not in (1, -1) or outcome_b not in (1, -1):
        raise ValueError("outcomes must be +1 or -1")
    ya = structure.class_of((a,), ())
    yb = structure.class_of((), (b,))
    yab = structure.class_of((a,), (b,))
    coeffs: dict = {}
    const = 0.0
    if outcome_a == 1 and outcome_b == 1:
        _add(coeffs, yab, 1.0)
    elif outcome_a == 1:
        _add(coeffs, ya, 1.0)
        _add(coeffs, yab, -1.0)
    elif outcome_b == 1:
        _add(coeffs, yb, 1.0)
        _add(coeffs, yab, -1.0)
    else:
        const = 1.0
        _add(coeffs, ya, -1.0)
        _add(coeffs, yb, -1.0)
        _add(coeffs, yab, 1.0)
    return MomentFunctional(coeffs, const).cleaned()


def local_probability_functional(structure: MomentStructure, party: str,
                                 setting: int, outcome: int) -> MomentFunctional:
    """P(outcome | setting) for one party."""
    if party not in ("alice", "bob"):
        raise ValueError("party must be 'alice' or 'bob'")
    if outcome not in (1, -1):
        raise ValueError("outcome must be +1 or -1")
    if party == "alice":
        structure.scenario.check_alice(setting)
        cls = structure.class_of((setting,), ())
    else:
        structure.scenario.check_bob(setting)
        cls = structure.class_of((), (setting,))
    if outcome == 1:
        return MomentFunctional({cls: 1.0}, 0.0)
    return MomentFunctional({cls: -1.0}, 1.0)
