from .base import BaseSampler
from .invariants import (
    EtaSampler,
    HeatTraceSampler,
    InvariantKind,
    InvariantValue,
    TorsionSeries,
    assemble_torsion_series,
    eta_integral,
    eta_quadrature,
    linear_combination,
    torsion_integral,
    torsion_quadrature,
)
from .properties import dual_class_value, eta_product, product_combinators, vanishing_rules
from .quadrature import (
    QuadratureResult,
    TailEnvelope,
    gaussian_envelope,
    gaussian_family_envelope,
    gaussian_kernel,
    gaussian_moment,
    integrate_ds,
    integrate_dt_over_t,
    log_quadrature,
)

__all__ = [
    'BaseSampler',
    'EtaSampler',
    'HeatTraceSampler',
    'InvariantKind',
    'InvariantValue',
    'TorsionSeries',
    'assemble_torsion_series',
    'eta_integral',
    'eta_quadrature',
    'linear_combination',
    'torsion_integral',
    'torsion_quadrature',
    'dual_class_value',
    'eta_product',
    'product_combinators',
    'vanishing_rules',
    'QuadratureResult',
    'TailEnvelope',
    'gaussian_envelope',
    'gaussian_family_envelope',
    'gaussian_kernel',
    'gaussian_moment',
    'integrate_ds',
    'integrate_dt_over_t',
    'log_quadrature',
]
