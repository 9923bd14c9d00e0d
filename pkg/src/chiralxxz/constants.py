"""Physical constants (CODATA 2018) and unit conversions.

The values are fixed here instead of taken from ``scipy.constants`` so that
results do not drift with the CODATA release bundled in a given SciPy.
"""

import math

PLANCK = 6.62607015e-34  # J s (exact)
BOLTZMANN = 1.380649e-23  # J / K (exact)
ELEMENTARY_CHARGE = 1.602176634e-19  # C (exact)
EPSILON_0 = 8.8541878128e-12  # F / m
DEBYE = 3.33564e-30  # C m

NM = 1e-9
MHZ_PER_GHZ = 1e3

COULOMB_K = 1.0 / (4.0 * math.pi * EPSILON_0)
