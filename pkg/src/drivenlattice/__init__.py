"""Quantum transport and dynamic localization in driven biased lattices.

Closed-form transport coefficients via generalized Bessel functions for a
biased single-band tight-binding chain under time-periodic driving, the
exact one-shot wave-packet propagator, and a continuum split-step solver
for cross-validation.
"""

from .model import (
    INCOMMENSURABLE,
    Bichromatic,
    DriveProfile,
    Flipped,
    Fourier,
    FrequencyRatio,
    Incommensurable,
    LatticeModel,
    Mono,
    ResonanceClass,
    Static,
    TransportVerdict,
    classify_transport,
    parse_ratio,
    period,
    profile_from_dict,
    profile_from_json,
    profile_to_dict,
    profile_to_json,
    solve_diophantine,
)
from .specialfn import (
    BesselSum2D,
    asymptotic_zero_estimates,
    bessel_j,
    bessel_jn_all,
    bessel_tail_index,
    gen_bessel_2d,
    gen_bessel_2d_slice,
    inf_var_bessel,
    inf_var_bessel_table,
)
from .phases import (
    MissingResonanceError,
    PhasePair,
    QuadratureError,
    TransportCoefficient,
    bichromatic_gamma_slice,
    chi,
    chi_values,
    eta,
    field_value,
    find_localization_zeros,
    gamma,
    quadrature_chi,
    quasienergy,
    transport_velocity,
)
from .wavepacket import (
    CoherenceParams,
    WavepacketState,
    WindowOverflowError,
    coherence_params,
    evolve,
    gaussian_state,
    is_dispersion_reduced,
    norm,
    position_expectation,
    position_mean,
    position_variance,
    width_evolution,
)
from .continuum import (
    ContinuumGrid,
    ContinuumState,
    WrapAroundError,
    band_structure,
    drift_velocity,
    gaussian_packet,
    length_gauge_propagate,
    lowest_band_packet,
    project_lowest_band,
    split_step_propagate,
)
from .kernels import backend as kernel_backend

__version__ = "0.1.0"
