"""Physical constants (CODATA 2018, via scipy.constants).

Every SI conversion in the package reads from this table so that results are
bit-identical wherever they are computed.
"""

from scipy import constants as _c

HBAR = _c.hbar
C = _c.c
EPSILON_0 = _c.epsilon_0
ELEMENTARY_CHARGE = _c.e

# angular frequency of one electron-volt photon, rad/s
EV_TO_RAD_S = ELEMENTARY_CHARGE / HBAR
