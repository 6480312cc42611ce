"""Complete-positivity tests for dissipative neutral-kaon dynamics."""

from .bloch import (
    K,
    K1,
    K2,
    KBAR,
    SIGMA,
    bloch_to_matrix,
    matrix_to_bloch,
    superop_to_bloch,
)
from .cp import (
    ChoiMatrix,
    KrausSet,
    NotCompletelyPositiveError,
    choi_of_map,
    dynamics_verdict,
    extension_witness,
    is_completely_positive,
    kraus_from_choi,
)
from .evolution import (
    EvolutionMap,
    TauClosedForm,
    expm,
    expm_evolution,
    tau_closed_form,
    trotter_compose,
)
from .generators import (
    DissipativeParams,
    EffectiveHamiltonian,
    LindbladOperators,
    cp_inequalities,
    dissipator_matrix,
    full_generator,
    kossakowski_check,
    lindblad_dissipator,
)
from .linalg import (
    NonHermitianError,
    hermitian_eigen,
    negative_mass,
    psd_check,
    signed_decompose,
    tensor_product,
)
from .observables import DecayObservable, asymmetry, decay_rate
from .twokaon import (
    product_evolution,
    singlet,
    trotter_negative_mass_bound,
    two_kaon_witness,
)

__version__ = "0.1.0"
