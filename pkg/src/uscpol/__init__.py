"""uscpol: light-matter interaction quantities of an ultra-strongly coupled
cavity-dresser-emitter system.

Units: omega_d = hbar = eps0 = c = 1 throughout; lengths in r0 = c/omega_d.
"""

from .params import (
    SystemParams, CavityDispersion, DopingInput,
    rabi_from_doping, load_config, serialize_config,
)
from .hopfield import (
    BranchPoint, ThreeModeSpectrum,
    polariton_frequencies, mixing_angle, mixing_sin_cos, mixing_weights,
    emitter_polariton_rabi, three_mode_spectrum, resonant_wavevector,
)
from .vacuum import (
    VacuumObservables,
    displacement_fluctuations, efield_fluctuations, zero_point_amplitudes,
    virtual_populations, zero_point_shift,
)
from .correlator import (
    PotentialProfile, Triplet,
    correlator_tm0_fourier, kernel_K, gap_center,
    effective_potential, potential_hankel_oracle,
    emitter_shift_coefficients, chi2_effective, find_phase_matched_triplets,
)
from .emission import LossModel, EmissionPoint, polariton_linewidths, purcell_rates
from .classical import (
    SpectralMap, PermittivityResult,
    dynamical_matrix, transmission, transmission_map,
    permittivity_hopfield, permittivity_matrix, permittivity_both,
    classical_dispersion_roots, classical_purcell,
)
from .tomography import (
    PeakSet, TomographyRecord, ReconstructionCurve,
    detect_peaks, minimal_anticrossing, tomography_sweep,
)
from . import errors

__version__ = "0.1.0"
