"""Device-independent min-entropy bounds from Bell-operator constraints.

Moment-matrix relaxations of quantum correlations, a dense interior-point
semidefinite solver, noise-parameterized randomness certificates, and a
randomized search over small Bell operators.
"""

from .bell import (BellOperator, BlochStrategy, Correlations, QubitStrategy,
                   Scenario,
                   apply_group_element, canonical_form, catalog,
                   catalog_names, classical_bound, embed_operator, evaluate,
                   random_group_element, singlet_correlations)
from .certify import (Certificate, CertificationResult, certificate_names,
                      guessing_probability, local_chsh_entropy,
                      local_guessing_probability, make_certificate,
                      quantum_max, sweep_noise, t3max_given_C, tune_parameter)
from .npa import (Monomial, MomentFunctional, MomentStructure,
                  functional_from_operator, local_probability_functional,
                  moment_structure, monomials, probability_functional,
                  reduce_word)
from .sdp import (SdpProblem, SdpSolution, SolveOptions, certify_bound,
                  solve)
from .search import (OperatorEvaluation, SearchConfig, SearchReport,
                     class_members_equivalent, evaluate_operator, run_search,
                     sample_operator)

__version__ = "1.0.0"
