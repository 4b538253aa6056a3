from .action import (
    CohomologyAction,
    atiyah_bott_eta,
    circle_torsion,
    clamp_spectrum,
    is_integral_matrix,
    lefschetz_number,
    spectrum_table,
    torsion_k,
)
from .fourier import fourier_torsion_coefficients, fourier_torsion_oracle
from .zeta import RationalZeta, ZetaFactor, reversed_charpoly, zeta_rational

__all__ = [
    'CohomologyAction',
    'RationalZeta',
    'ZetaFactor',
    'atiyah_bott_eta',
    'circle_torsion',
    'clamp_spectrum',
    'fourier_torsion_coefficients',
    'fourier_torsion_oracle',
    'is_integral_matrix',
    'lefschetz_number',
    'reversed_charpoly',
    'spectrum_table',
    'torsion_k',
    'zeta_rational',
]
