"""qalab: a numerical laboratory for an algebraic model of quantum measurement.

Observable algebras as dense complex matrices, measurement contexts as
ordered orthonormal bases, seeded per-context outcome samplers, ensemble
statistics with exact trace averages, a Hilbert-space reconstruction from
any quantum state, and CHSH / magic-square contextuality experiments.
"""

from .algebra import (
    AlgebraElement,
    Spectrum,
    add,
    adjoint,
    commutator_norm,
    eigenbasis,
    element,
    identity,
    is_hermitian,
    multiply,
    operator_norm,
    scale,
    spectrum,
    verify_postulate1,
    zero,
)
from .contexts import (
    Context,
    character_value,
    compatible,
    computational_context,
    contains,
    context_diagonal,
    context_from_basis,
    context_from_observable,
    context_to_dict,
    joint_context,
    tensor_context,
)
from .ensemble import (
    QuantumState,
    SampleStats,
    density_state,
    exact_outcome_std,
    linearity_check,
    maximally_mixed,
    mixed_state,
    outcome_cdf,
    outcome_distribution,
    pure_state,
    quantum_average,
    sample_mean,
    separation_check,
    separation_witness,
)
from .errors import (
    ArgumentError,
    DimensionError,
    FileFormatError,
    IncompatibleObservablesError,
    InvalidStateError,
    NotInContextError,
    NotObservableError,
    NumericalError,
    QalabError,
)
from .experiments import (
    ChshConfig,
    MagicSquare,
    chsh_run,
    classical_bound_bruteforce,
    magic_square,
    mermin_peres_bruteforce,
    mermin_peres_contextual_run,
    no_signaling_check,
    singlet_state,
    verify_magic_square,
)
from .gns import GnsRepresentation, cstar_norm, gns_construct, verify_gns
from .physical import (
    PhysicalState,
    born_weights,
    evaluate,
    new_physical_state,
    verify_character_properties,
)

__version__ = "0.1.0"
