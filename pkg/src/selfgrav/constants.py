"""Physical constants, frozen to CODATA-2018 values for bit-reproducible output."""

HBAR = 1.054571817e-34  # J s
G_NEWTON = 6.67430e-11  # m^3 kg^-1 s^-2
C_LIGHT = 2.99792458e8  # m / s (exact)
