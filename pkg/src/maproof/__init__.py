"""Merlin-Arthur proofs for batch evaluation of low-degree arithmetic circuits.

Merlin sends one univariate polynomial; Arthur checks it at a single
random point and reads off every circuit output.  On top of that core
protocol sit certified cube sums (#SAT, permanents, Hamiltonian cycles),
a QBF protocol, counting applications and brute-force oracles.
"""

from .apps import elementary_symmetric_circuit, hamming_count, kclique_count, ov_count
from .circuit import (BoolFormula, Circuit, CircuitBuilder, QuantifiedFormula, arithmetize, evaluate,
                      parse_circuit, parse_formula, parse_qbf, syntactic_degree)
from .errors import (CapacityError, DomainError, MAError, ParameterError, ParseError, ProofFormatError,
                     ProtocolError, UsageError)
from .field import (ExtensionField, FieldElement, PrimeField, build_extension, canonical_element, find_prime,
                    is_irreducible, random_element)
from .graphs import Graph
from .opcount import OpCounter, counting
from .poly import DensePoly, horner_eval, interpolate, multipoint_eval, poly_mul
from .protocol import (EvalOutput, Proof, ProtocolParams, build_psi, choose_params, prove_eval, upit_deterministic,
                       upit_random, verify_eval)
from .qbf import QbfParams, flip_if_needed, qbf_decide, suffix_arithmetize
from .serialize import parse_proof, serialize_proof
from .sums import (SumClaim, build_half_sum_circuit, count_hamcycles, count_sat, hamiltonian_circuit,
                   multiround_sum, permanent, prove_sum, ryser_circuit, verify_sum)
from .transcript import Coins, Transcript

__version__ = "0.1.0"
