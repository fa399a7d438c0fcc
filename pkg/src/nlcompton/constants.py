"""Physical constants and unit conversions.

All library quantities are in natural units with hbar = c = m_e = 1, so
energies and momenta are ratios to the electron rest energy and lengths are
in units of the reduced Compton wavelength.  SI only enters through the
conversion constants defined here.

Laser intensity conversion
--------------------------
For a circularly polarized plane wave with vector potential amplitude A the
field strength is constant in time, |E| = |B| = k A.  In Heaviside-Lorentz
units the energy density is (E^2 + B^2)/2 = (k A)^2 and the intensity equals
the energy density.  With a0 = e A / m and e^2 = 4 pi alpha this gives

    I = (a0 k)^2 / (4 pi alpha)      [units of m^4]

and one natural intensity unit is m^4 c^6 / hbar^3 (about 4.27e32 W/m^2).
"""

import math

from scipy import constants as _sc

#: Fine-structure constant (CODATA, via scipy), 1/137.0359992.
ALPHA = _sc.fine_structure

#: Reduced Compton wavelength hbar/(m_e c) in metres (about 3.8616e-13).
COMPTON_WAVELENGTH_M = _sc.physical_constants["reduced Compton wavelength"][0]

#: Electron rest energy in MeV.
ELECTRON_MASS_MEV = _sc.physical_constants["electron mass energy equivalent in MeV"][0]

#: Natural intensity unit m^4 c^6 / hbar^3 in W/m^2.
NATURAL_INTENSITY_W_M2 = _sc.m_e**4 * _sc.c**6 / _sc.hbar**3

#: Intensity in W/m^2 per unit (a0 k)^2.
FLUX_CONSTANT_W_M2 = NATURAL_INTENSITY_W_M2 / (4.0 * math.pi * ALPHA)

#: One natural area unit (Compton wavelength squared) expressed in barns.
COMPTON_AREA_BARN = COMPTON_WAVELENGTH_M**2 / 1e-28
