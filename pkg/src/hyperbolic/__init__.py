from .geodesic import GeodesicClass, power_class, random_class, wrap_angle
from .invariants import (
    betti_decay_profile,
    eta_closed,
    hyperbolic_betti,
    leading_torsion,
    n1_identity,
    torsion_closed,
)
from .kernels import (
    MillsonEtaSampler,
    SelbergKernel,
    SelbergSampler,
    millson_eta_sampler,
    selberg_heat_trace,
    selberg_kernels,
    selberg_torsion_series,
    sigma_trace,
    sigma_traces,
)
from .length_spectrum import LengthEstimate, recover_length

__all__ = [
    'GeodesicClass',
    'LengthEstimate',
    'MillsonEtaSampler',
    'SelbergKernel',
    'SelbergSampler',
    'betti_decay_profile',
    'eta_closed',
    'hyperbolic_betti',
    'leading_torsion',
    'millson_eta_sampler',
    'n1_identity',
    'power_class',
    'random_class',
    'recover_length',
    'selberg_heat_trace',
    'selberg_kernels',
    'selberg_torsion_series',
    'sigma_trace',
    'sigma_traces',
    'torsion_closed',
    'wrap_angle',
]
