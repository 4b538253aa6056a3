from .complex import EquivariantComplex, direct_sum, expand_equivariant, right_translation, validate_complex
from .indices import (
    alternating_coefficient_sum,
    class_index,
    index_table,
    nielsen_index,
    orbit_coefficients,
    twisted_coefficient_sum,
)
from .lefschetz import (
    bundle_matrices,
    cochain_action,
    zeta_pairing,
    pairing_on_circle,
    recover_torsion_trivial_group,
    twisted_lefschetz,
    zeta_rho,
)

__all__ = [
    'EquivariantComplex',
    'alternating_coefficient_sum',
    'bundle_matrices',
    'class_index',
    'cochain_action',
    'direct_sum',
    'zeta_pairing',
    'expand_equivariant',
    'index_table',
    'nielsen_index',
    'orbit_coefficients',
    'pairing_on_circle',
    'recover_torsion_trivial_group',
    'right_translation',
    'twisted_coefficient_sum',
    'twisted_lefschetz',
    'validate_complex',
    'zeta_rho',
]
