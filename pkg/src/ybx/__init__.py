"""Linear and affine set-theoretical solutions of the quantum Yang-Baxter equation."""

from .modmat import GroupSpec, Matrix, NotInvertible, Ring, det, invert, rank_mod_p
from .kernel import (AffineSolution, Eq13Violation, LinearSolution, PermutationMap,
                     check_eq13, complete_affine, complete_solution, to_permutation,
                     verify_braid_algebraic, verify_crossing_linear, verify_crossing_matrix,
                     verify_qybe_set, verify_unitarity_algebraic, verify_unitarity_set)
from .canon import (JordanType, NotNilpotent, binomial_matrix, canonical_pair,
                    canonical_solution, jordan_type, nilpotency_index, shift_matrix,
                    solve_b_space)
from .hunt import cross_validate, enumerate_linear, enumerate_set_theoretic

__version__ = "0.1.0"
