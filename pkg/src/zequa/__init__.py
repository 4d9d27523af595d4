"""Zero-error capacity of quantum channels through their noncommutative graphs."""

__version__ = "0.1.0"

from .activation import (bilinear_feasibility, check_activation, family_diagonals, family_T,
                         lemma5_crosscheck, prop2_verify, qubit_nonactivation_suite,
                         schmidt_collapse)
from .capacity import (alpha_exact_qubit, alpha_lower, codebook_search, tensor_power_lower,
                       verify_codebook)
from .rankone import SearchConfig, capacity_is_zero, find_rank_one, rank_one_exact_1d
from .subspaces import (KrausChannel, NoncommGraph, OperatorSubspace, complement, conjugate,
                        contains, from_kraus, from_spanning, is_noncomm_graph, tensor)
