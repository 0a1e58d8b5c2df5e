"""Explicit two-qubit oracle for moment vectors.

Computes every moment <w> of a moment structure by 4x4 matrix algebra on
the Werner state p |psi-><psi-| + (1-p) I/4 with projective measurements
along arbitrary Bloch directions.  Used as an independent feasibility
witness for the NPA relaxation and for certificate constraints at p = 1.
"""

from __future__ import annotations

import numpy as np

from .bell import _bloch_vectors
from .npa import MomentStructure

__all__ = ["projector", "projector_from_vector", "moment_vector",
           "moment_matrix"]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

# |psi-> = (|01> - |10>)/sqrt(2)
_PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
_SINGLET = np.outer(_PSI_MINUS, _PSI_MINUS)


def werner_state(p: float) -> np.ndarray:
    return p * _SINGLET + (1.0 - p) * np.eye(4) / 4.0


def projector(angle: float) -> np.ndarray:
    """+1-outcome projector of the observable cos(a) sz + sin(a) sx."""
    return projector_from_vector([np.sin(angle), 0.0, np.cos(angle)])


def projector_from_vector(v) -> np.ndarray:
    """+1-outcome projector of the observable v . (sx, sy, sz)."""
    x, y, z = v
    return 0.5 * (_I2 + x * _SX + y * _SY + z * _SZ)


def _word_product(vectors: np.ndarray, word) -> np.ndarray:
    m = _I2
    for letter in word:
        m = m @ projector_from_vector(vectors[letter - 1])
    return m


def moment_vector(structure: MomentStructure, strategy) -> np.ndarray:
    """Moments of every class representative under the qubit strategy.

    Products of projectors of one party are generally non-Hermitian; the
    real part is taken, matching the real-symmetric moment matrix (the
    class identifies each word with its adjoint).
    """
    if strategy.scenario != structure.scenario:
        raise ValueError("strategy/structure scenario mismatch")
    va, vb = _bloch_vectors(strategy)
    rho = werner_state(strategy.visibility)
    y = np.empty(structure.n_vars)
    for k, mono in enumerate(structure.class_words):
        op = np.kron(_word_product(va, mono.alice_word),
                     _word_product(vb, mono.bob_word))
        y[k] = float(np.real(np.trace(rho @ op)))
    return y


def moment_matrix(structure: MomentStructure, strategy) -> np.ndarray:
    """Assembled moment matrix of the strategy (PSD up to symmetrization)."""
    return structure.assemble(moment_vector(structure, strategy))
