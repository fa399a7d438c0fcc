"""Nonlinear Compton scattering of electrons on a circularly polarized laser.

Natural units with hbar = c = m_e = 1 throughout; see :mod:`nlcompton.constants`
for the SI conversions.
"""

from .amplitudes import channel_vectors, fg_coefficients, polarization_basis, script_h, z_tensor
from .bessel import bessel_j, bessel_j_eval, bessel_j_two_term_asymptotic
from .cross_sections import (
    XSecContext,
    dsigma_fixed_spins,
    dsigma_polarization,
    dsigma_spin_averaged,
    dsigma_unpolarized,
    klein_nishina_baseline,
    klein_nishina_covariant,
    outgoing_polarization,
    y_of_x_curve,
)
from .errors import DomainError, NLComptonError, ValidationError
from .gain import gain_parameter, photon_number_closed, photon_number_ode
from .kinematics import (
    Channel,
    ElectronIn,
    LaserParams,
    compton_limit_energy,
    emitted_photon_energy,
    laser_flux_si,
    scattered_state,
)

__version__ = "0.1.0"

__all__ = [
    "Channel", "DomainError", "ElectronIn", "LaserParams", "NLComptonError", "ValidationError",
    "XSecContext", "bessel_j", "bessel_j_eval", "bessel_j_two_term_asymptotic",
    "channel_vectors", "compton_limit_energy", "dsigma_fixed_spins", "dsigma_polarization",
    "dsigma_spin_averaged", "dsigma_unpolarized", "emitted_photon_energy", "fg_coefficients",
    "gain_parameter", "klein_nishina_baseline", "klein_nishina_covariant", "laser_flux_si",
    "outgoing_polarization", "photon_number_closed", "photon_number_ode", "polarization_basis",
    "scattered_state", "script_h", "y_of_x_curve", "z_tensor",
]
