"""latvoa: exact-arithmetic lattice vertex operator algebra engine."""

from .commutant import (
    Subspace,
    commutant_of_generators,
    generated_subalgebra,
    heisenberg_commutant,
    highest_weight_vectors,
    mode_kernel,
)
from .lattice import (
    EmbeddedLattice,
    GramLattice,
    GuardError,
    build_a_tensor,
    dual_quotient,
    inner,
    sublattice_k,
    sublattice_n,
)
from .levi import Composition, levi_realization, relative_parafermion
from .maps import (
    LatticeVoaMap,
    build_tau,
    build_theta,
    difference_voa,
    verify_homomorphism,
)
from .states import GradedBasis, StateVector, enumerate_basis, make_state, state_weight
from .vertex import VOA

__version__ = "0.1.0"
