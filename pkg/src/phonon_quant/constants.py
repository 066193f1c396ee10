"""Physical constants (CODATA exact values, SI units)."""

E_CHARGE = 1.602176634e-19  # elementary charge, C
HBAR = 1.054571817e-34      # reduced Planck constant, J s
PHI0_RED = HBAR / (2.0 * E_CHARGE)  # reduced flux quantum hbar/2e, Wb
