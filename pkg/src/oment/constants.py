"""Physical constants (CODATA 2018), fixed here so every module agrees bit-for-bit."""

HBAR = 1.054571817e-34  # reduced Planck constant (J*s)
K_B = 1.380649e-23      # Boltzmann constant (J/K)
C_LIGHT = 299792458.0   # speed of light in vacuum (m/s)
