"""Physical constants (CODATA, via scipy.constants) in SI units."""

from scipy import constants as _c

HBAR = _c.hbar
K_B = _c.k
C = _c.c
EPS0 = _c.epsilon_0
MU0 = _c.mu_0
