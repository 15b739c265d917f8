"""Single-photon emission and scattering spectra of a mixed optomechanical
cavity (linear + quadratic coupling), with brute-force verification and
spectral inference of the coupling strengths."""

from .errors import (
    OmspecError, DomainError, ConvergenceError, NormalizationError,
    TruncationError, GridError, InferenceError,
)
from .model import (
    ModelParams, SqueezeDisplaceParams, EigenLevel, SubPeakSpacing,
    squeeze_param, displace_param, squeeze_displace_params,
    eigen_energy, eigen_level, energy_shift, sideband_location,
    sub_peak_spacing,
)
from .overlaps import (
    SqueezeDisplaceSpec, TransitionMatrix, hermite, overlap_sd,
    transition_matrix,
)
from .oracle import (
    BathDiscretization, AmplitudeSnapshot, annihilation, expm_normal,
    squeeze_matrix, displace_matrix, oracle_overlap, oracle_overlap_matrix,
    diagonalize_sector, evolve_amplitudes, lorentzian_bath_init,
)
from .emission import (
    MechanicalInitState, SpectrumGrid, make_init_state, emission_amplitude,
    emission_spectrum, detuning_grid,
)
from .scattering import (
    WavepacketParams, scattering_amplitude, scattering_spectrum,
    default_center,
)
from .analysis import (
    Peak, Dip, PeakReport, ResolutionCheck, QuadraticCouplingEstimate,
    find_extrema, infer_g2, infer_c_and_g1, check_resolution,
    analyze_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "OmspecError", "DomainError", "ConvergenceError", "NormalizationError",
    "TruncationError", "GridError", "InferenceError",
    "ModelParams", "SqueezeDisplaceParams", "EigenLevel", "SubPeakSpacing",
    "squeeze_param", "displace_param", "squeeze_displace_params",
    "eigen_energy", "eigen_level", "energy_shift", "sideband_location",
    "sub_peak_spacing",
    "SqueezeDisplaceSpec", "TransitionMatrix", "hermite", "overlap_sd",
    "transition_matrix",
    "BathDiscretization", "AmplitudeSnapshot", "annihilation", "expm_normal",
    "squeeze_matrix", "displace_matrix", "oracle_overlap",
    "oracle_overlap_matrix", "diagonalize_sector", "evolve_amplitudes",
    "lorentzian_bath_init",
    "MechanicalInitState", "SpectrumGrid", "make_init_state",
    "emission_amplitude", "emission_spectrum", "detuning_grid",
    "WavepacketParams", "scattering_amplitude", "scattering_spectrum",
    "default_center",
    "Peak", "Dip", "PeakReport", "ResolutionCheck",
    "QuadraticCouplingEstimate", "find_extrema", "infer_g2",
    "infer_c_and_g1", "check_resolution", "analyze_spectrum",
]
