"""Truncated Fock-basis tensors of optical gates and their gradients.

The core objects are GeneratingExponent (the Gaussian data C, mu, Sigma of
a gate's coherent-state generating function), GateTensor (the truncated
matrix elements filled by recurrence), per-parameter gradient tensors, and
a layered-circuit state-preparation optimizer.
"""

from .exponents import (
    GaussianSpec,
    GeneratingExponent,
    NonUnitaryError,
    TwoModeSpec,
    beamsplitter_matrix,
    build_general,
    build_interferometer,
    build_single_mode,
    build_two_mode,
    build_two_mode_squeezer,
)
from .tensors import (
    BudgetExceededError,
    GateTensor,
    beamsplitter,
    displacement,
    general_gaussian_tensor,
    interferometer_tensor,
    single_mode_gaussian,
    squeezer,
    two_mode_squeezer,
)
from .gradients import (
    ExponentJacobian,
    amplitude_gradient_two_mode_squeezer,
    combine_upstream,
    finite_difference_jacobians,
    grad_from_jacobian,
    jacobians_all_params,
    phase_gradient_single_param,
    polar_chain,
    single_mode_jacobians,
    two_mode_jacobians,
)
from .nongaussian import (
    FellBackToOracle,
    KerrSpec,
    PhaseGateSpec,
    QuadratureError,
    UnstableRegimeError,
    cubic_amplitude_gradient,
    cubic_phase,
    kerr_diagonal,
    kerr_tensor,
    quadrature_element,
    quadrature_oracle,
    quartic_phase,
)
from .states import (
    LossValue,
    StateVector,
    apply_beamsplitter_fast,
    apply_gate,
    apply_two_mode_squeezer_fast,
    fock,
    loss,
    vacuum,
)
from .optimize import (
    AdamState,
    LayerParams,
    RunRecord,
    adam_step,
    backward,
    best_of_seeds,
    forward,
    optimize_state_prep,
)
from .container import dump, dump_bytes, load, load_bytes

__version__ = "0.1.0"
