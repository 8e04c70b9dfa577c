"""Physical constants (SI, CODATA 2018 exact values).

Every module reads its constants from here.
"""

H: float = 6.626_070_15e-34
"""Planck constant (J s)."""

K_B: float = 1.380_649e-23
"""Boltzmann constant (J/K)."""

C: float = 2.997_924_58e8
"""Speed of light in vacuum (m/s)."""

ZETA3: float = 1.202_056_903_159_594_2
"""Apery's constant, zeta(3)."""

GHZ: float = 1.0e9
PS: float = 1.0e-12
