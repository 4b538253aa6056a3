from .laurent import (
    LaurentMatrix,
    LaurentMatrixComplex,
    laplacians_on_grid,
    tensor_product,
    twisted_laplacian,
)
from .traces import (
    DelocalizedBetti,
    cover_torsion,
    cover_torsion_series,
    delocalized_betti,
    delocalized_heat_trace,
    heat_trace_coefficients,
    heat_trace_sampler,
    log_determinant_torsion,
    theta_heat_traces,
)

__all__ = [
    'DelocalizedBetti',
    'LaurentMatrix',
    'LaurentMatrixComplex',
    'cover_torsion',
    'cover_torsion_series',
    'delocalized_betti',
    'delocalized_heat_trace',
    'heat_trace_coefficients',
    'heat_trace_sampler',
    'log_determinant_torsion',
    'laplacians_on_grid',
    'tensor_product',
    'theta_heat_traces',
    'twisted_laplacian',
]
