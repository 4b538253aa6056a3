import math

import numpy as np
import pytest
from scipy import special

from errors import ConvergenceError, DomainError, SchemaError, ValidationError
from heat_trace import (
    LaurentMatrix,
    LaurentMatrixComplex,
    cover_torsion,
    delocalized_betti,
    delocalized_heat_trace,
    heat_trace_coefficients,
    heat_trace_sampler,
    log_determinant_torsion,
    tensor_product,
    theta_heat_traces,
    twisted_laplacian,
)
from mapping_torus import CohomologyAction, torsion_k
from serialization import load_json


@pytest.fixture
def circle(fixtures_dir):
    return LaurentMatrixComplex.from_json(load_json(fixtures_dir / "circle.json"))


def bessel_series(m, t, terms=200):
    """e^(-2t) I_m(2t) from the power series of I_m"""
    m = abs(m)
    term = t ** m / math.factorial(m)
    terms_ = []
    for j in range(terms):
        terms_.append(term)
        term *= t * t / ((j + 1) * (j + 1 + m))
    return math.exp(-2.0 * t) * math.fsum(terms_)


class TestLaurentComplex:
    def test_fixture_matches_constructor(self, circle):
        theta = [0.9]
        assert np.allclose(twisted_laplacian(circle, 0, theta),
                           twisted_laplacian(LaurentMatrixComplex.circle(), 0, theta))

    def test_circle_laplacian(self, circle):
        for theta in (0.0, 0.4, 2.0, 5.5):
            expected = 2.0 - 2.0 * math.cos(theta)
            assert twisted_laplacian(circle, 0, [theta])[0, 0] == pytest.approx(expected, abs=1e-14)
            assert twisted_laplacian(circle, 1, [theta])[0, 0] == pytest.approx(expected, abs=1e-14)

    def test_untwisted_laplacian(self):
        torus = LaurentMatrixComplex.torus(2)
        lap = twisted_laplacian(torus, 1, [0.0, 0.0])
        assert np.allclose(lap, 0.0)
        assert torus.cells == [1, 2, 1]

    def test_torus_spectrum_is_kronecker_sum(self, rng):
        torus = LaurentMatrixComplex.torus(2)
        assert torus.validate().ok
        for theta in rng.uniform(0, 2 * np.pi, size=(5, 2)):
            a, b = (2.0 - 2.0 * np.cos(theta))
            assert twisted_laplacian(torus, 0, theta)[0, 0] == pytest.approx(a + b, abs=1e-13)
            assert np.sort(np.linalg.eigvalsh(twisted_laplacian(torus, 1, theta))) == \
                pytest.approx(np.sort([a + b, a + b]), abs=1e-13)

    def test_product_of_twisted_circles(self):
        X = tensor_product(LaurentMatrixComplex.circle(0.5), LaurentMatrixComplex.circle(2.0))
        theta = np.array([0.3, 1.1])
        a = abs(0.5 * np.exp(1j * theta[0]) - 1) ** 2
        b = abs(2.0 * np.exp(1j * theta[1]) - 1) ** 2
        assert np.linalg.eigvalsh(twisted_laplacian(X, 1, theta)) == pytest.approx(sorted([a + b, a + b]))
        assert twisted_laplacian(X, 2, theta)[0, 0] == pytest.approx(a + b)

    def test_dd_nonzero_rejected(self):
        d0 = LaurentMatrix(1, 1, 1, {(1,): [[1.0]]})
        d1 = LaurentMatrix(1, 1, 1, {(0,): [[1.0]]})
        X = LaurentMatrixComplex(1, [1, 1, 1], [d0, d1])
        assert not X.validate().ok
        with pytest.raises(ValidationError):
            LaurentMatrixComplex.from_json(X.to_json())

    def test_wrong_exponent_length(self):
        doc = {"l": 2, "cells": [1, 1], "diff": [[[{"exponent": [1], "coeff": 1}]]]}
        with pytest.raises(SchemaError) as info:
            LaurentMatrixComplex.from_json(doc)
        assert "exponent" in info.value.path

    def test_json_round_trip(self, circle):
        again = LaurentMatrixComplex.from_json(circle.to_json())
        assert np.allclose(twisted_laplacian(again, 0, [1.3]), twisted_laplacian(circle, 0, [1.3]))


class TestHeatTrace:
    def test_bessel_examples(self, circle):
        assert delocalized_heat_trace(circle, 0, 0, 1.0) == pytest.approx(0.308508, abs=1e-6)
        assert delocalized_heat_trace(circle, 0, 1, 1.0) == pytest.approx(0.215269, abs=1e-6)

    @pytest.mark.parametrize("t", [0.1, 1.0, 5.0, 20.0])
    def test_bessel_benchmark(self, circle, t):
        values = heat_trace_coefficients(circle, 0, range(6), t)
        for m in range(6):
            assert abs(values[(m,)] - special.ive(m, 2 * t)) <= 1e-10
            assert abs(values[(m,)] - bessel_series(m, t)) <= 1e-10

    def test_conjugate_symmetry(self):
        X = tensor_product(LaurentMatrixComplex.circle(0.5 + 0.3j), LaurentMatrixComplex.circle())
        for m in ([1, 0], [2, -1], [0, 3]):
            plus = delocalized_heat_trace(X, 1, m, 0.7)
            minus = delocalized_heat_trace(X, 1, [-x for x in m], 0.7)
            assert plus == pytest.approx(minus.conjugate(), abs=1e-12)

    def test_torus_factorises(self):
        torus = LaurentMatrixComplex.torus(2)
        t = 0.8
        value = delocalized_heat_trace(torus, 0, [1, 2], t)
        assert value == pytest.approx(special.ive(1, 2 * t) * special.ive(2, 2 * t), abs=1e-12)

    def test_grid_doubling_is_stable(self, circle):
        coarse = delocalized_heat_trace(circle, 0, 2, 3.0, grid=64)
        fine = delocalized_heat_trace(circle, 0, 2, 3.0, grid=512)
        assert abs(coarse - fine) < 1e-10

    def test_parseval_bound(self, circle):
        t, grid = 0.5, 256
        trace = theta_heat_traces(circle, 0, t, grid)
        total = np.mean(np.abs(trace) ** 2)
        values = heat_trace_coefficients(circle, 0, range(-10, 11), t)
        assert sum(abs(v) ** 2 for v in values.values()) <= total + 1e-12

    def test_small_t_is_bounded(self, circle):
        assert abs(delocalized_heat_trace(circle, 0, 3, 1e-4)) < 1e-10

    def test_small_grid(self, circle):
        with pytest.raises(DomainError):
            delocalized_heat_trace(circle, 0, 1, 1.0, grid=16)

    def test_class_vector_length(self, circle):
        with pytest.raises(DomainError):
            delocalized_heat_trace(circle, 0, [1, 0], 1.0)

    def test_grid_cap_argument(self, circle):
        with pytest.raises(ConvergenceError) as info:
            delocalized_heat_trace(circle, 0, 1, 1.0, max_grid=64)
        assert info.value.partial_value is not None

    def test_relative_tolerance_alone(self, circle):
        value = delocalized_heat_trace(circle, 0, 1, 1.0, tolerance=0.0, rtol=1e-8)
        assert value == pytest.approx(special.ive(1, 2.0), rel=1e-7)


class TestBetti:
    def test_circle_vanishes(self, circle):
        report = delocalized_betti(circle, 0, 1)
        assert not report.anomaly
        assert abs(report.limit) < 1e-3
        assert report.model == "power"
        assert report.power_rate == pytest.approx(0.5, abs=0.05)
        assert list(report.table.index[:3]) == [1.0, 2.0, 4.0]

    def test_gapped_decays_exponentially(self):
        X = LaurentMatrixComplex.circle(0.5)
        report = delocalized_betti(X, 0, 1, t_max=64)
        assert abs(report.limit) < 1e-7
        assert report.model == "exponential"
        # min over theta of |0.5 e^(i theta) - 1|^2
        assert report.exponential_rate >= 0.25 - 1e-6

    def test_m_zero_rejected(self, circle):
        with pytest.raises(DomainError):
            delocalized_betti(circle, 0, 0)


class TestCoverTorsion:
    def test_sampler(self, circle):
        sampler = heat_trace_sampler(circle, 1, 1)
        assert sampler(1.0) == pytest.approx(special.ive(1, 2.0), abs=1e-10)
        assert sampler.degree == 1 and sampler.dimension == 1

    @pytest.mark.parametrize("holonomy", [0.5, 2.0, 0.3 + 0.4j])
    def test_matches_mapping_torus(self, holonomy):
        X = LaurentMatrixComplex.circle(holonomy)
        action = CohomologyAction([[[holonomy]]])
        for m in (1, 2, -1):
            assert cover_torsion(X, m, tolerance=1e-9) == pytest.approx(torsion_k(action, m), abs=1e-7)

    def test_class_zero_rejected(self, circle):
        with pytest.raises(DomainError):
            cover_torsion(circle, 0)


class TestLogDeterminantTorsion:
    @pytest.mark.parametrize("holonomy", [0.5, 2.0, 0.3 + 0.4j])
    def test_matches_mapping_torus(self, holonomy):
        X = LaurentMatrixComplex.circle(holonomy)
        action = CohomologyAction([[[holonomy]]])
        for m in (1, 2, -1, 5):
            assert log_determinant_torsion(X, m) == pytest.approx(torsion_k(action, m), abs=1e-10)

    def test_agrees_with_heat_kernel_route(self):
        X = LaurentMatrixComplex.circle(0.5)
        assert log_determinant_torsion(X, 2) == pytest.approx(cover_torsion(X, 2, tolerance=1e-9), abs=1e-7)

    def test_ungapped_rejected(self, circle):
        with pytest.raises(DomainError):
            log_determinant_torsion(circle, 1)

    def test_class_zero_rejected(self):
        with pytest.raises(DomainError):
            log_determinant_torsion(LaurentMatrixComplex.circle(0.5), 0)
