"""End-to-end checks that tie the independent evaluation routes together"""
import itertools

import numpy as np
import pytest
from scipy import special

from core import (
    InvariantKind,
    InvariantValue,
    dual_class_value,
    eta_integral,
    product_combinators,
    torsion_integral,
    vanishing_rules,
)
from finite_cover import ClassValueVector, delocalized_from_twisted, regular_betti0, twisted_from_delocalized
from groups import (
    Automorphism,
    CharacterTable,
    GroupFactory,
    InducedRepData,
    burnside_table,
    cyclic_group,
    symmetric_group,
    trivial_group,
)
from heat_trace import LaurentMatrixComplex, delocalized_betti, heat_trace_coefficients, tensor_product
from hyperbolic import (
    GeodesicClass,
    eta_closed,
    millson_eta_sampler,
    n1_identity,
    power_class,
    random_class,
    recover_length,
    selberg_torsion_series,
    torsion_closed,
)
from mapping_torus import (
    CohomologyAction,
    fourier_torsion_coefficients,
    lefschetz_number,
    torsion_k,
    zeta_rational,
)
from nielsen import EquivariantComplex, nielsen_index, pairing_on_circle, twisted_lefschetz, zeta_rho
from serialization import load_json

FIBER_MATRICES = [np.array([[1]]), np.array([[2, 1], [1, 1]]), np.array([[1]])]
OFF_CIRCLE_MATRICES = [np.array([[2]]), np.array([[3, 1], [1, 1]])]
ROUND_TRIP_GROUPS = ["trivial", "Z2", "Z3", "Z5", "Z8", "Z48", "D3", "D5", "D12", "D24", "S3", "S4", "A4",
                     "Q8", "Z2xZ2", "Z2xS4", "S3xS3", "Z3xQ8", "Z2xA4", "Z4xZ2xZ2"]


def random_off_circle_integer_action(rng, dims=(1, 2, 1)):
    while True:
        mats = []
        for b in dims:
            while True:
                m = rng.integers(-3, 4, size=(b, b))
                if abs(np.linalg.det(m)) > 0.5:
                    break
            mats.append(m)
        action = CohomologyAction(mats)
        if not action.has_unit_circle_spectrum():
            return action


class TestHyperbolicOracles:
    def test_torsion_quadrature_matches_closed_form(self, rng):
        for i in range(20):
            g = random_class(rng, 1 + i % 3)
            value = torsion_closed(g)
            assert abs(torsion_integral(selberg_torsion_series(g)) - value) <= 1e-8 * (1 + abs(value))

    def test_eta_quadrature_matches_closed_form(self, rng):
        for n in (1, 3):
            for _ in range(5):
                g = random_class(rng, n)
                value = eta_closed(g)
                assert eta_integral(millson_eta_sampler(g)) == pytest.approx(value, rel=1e-8, abs=1e-14)
        for n in (2, 4):
            assert eta_closed(random_class(rng, n)) == 0.0

    def test_three_dimensional_identity(self, rng):
        for _ in range(100):
            g = random_class(rng, 1, l_range=(0.3, 3.0))
            lhs, rhs = n1_identity(g)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_length_recovery(self):
        g = GeodesicClass(1, 1, 0.7, (1.0,))
        values = [(r, torsion_closed(power_class(g, r))) for r in range(4, 31)]
        assert recover_length(values, 1).length == pytest.approx(0.7, abs=1e-3)


class TestMappingTorusFourier:
    def test_random_integer_actions_off_circle(self, rng):
        ks = [k for k in range(-8, 9) if k != 0]
        for _ in range(10):
            action = random_off_circle_integer_action(rng)
            coefficients = fourier_torsion_coefficients(action, ks)
            for k in ks:
                assert abs(coefficients[k] - torsion_k(action, k)) <= 1e-8

    @pytest.mark.parametrize("matrices", [
        [[[1]], [], [[1]]],
        [[[1]], [], [[-1]]],
        [[[1]], [[1, 0], [0, -1]], [[1]]],
        [[[-1]], [[2]], [[1]]],
    ])
    def test_unit_circle_spectra(self, matrices):
        action = CohomologyAction(matrices)
        ks = [k for k in range(-8, 9) if k != 0]
        coefficients = fourier_torsion_coefficients(action, ks)
        for k in ks:
            assert abs(coefficients[k] - torsion_k(action, k)) <= 1e-4

    def test_zeta_series_is_exact(self, rng):
        for _ in range(5):
            action = CohomologyAction([rng.integers(-2, 3, size=(b, b)) + 5 * np.eye(b, dtype=int)
                                       for b in (1, 2, 1)])
            logs = zeta_rational(action).log_coefficients(12)
            for k in range(1, 13):
                assert k * logs[k - 1] == int(round(lefschetz_number(action, k).real))


class TestNielsenRoutes:
    @pytest.mark.parametrize("spec", ["Z2", "Z3", "S3"])
    def test_dual_routes_agree(self, spec, rng):
        G = GroupFactory.from_spec(spec)
        for g in G.elements:
            alpha = Automorphism.inner(G, g)
            X = EquivariantComplex.random(G, alpha, rng, degrees=3, contractible=1)
            reps = [InducedRepData.trivial(G, alpha), InducedRepData.regular(G, alpha, 1),
                    InducedRepData.regular(G, alpha, 2)]
            for rep in reps:
                for r in range(1, 7):
                    # twisted_lefschetz raises when the two routes differ
                    assert isinstance(twisted_lefschetz(X, rep, r), int)

    def test_z3_with_outer_twist(self, rng):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        X = EquivariantComplex.random(G, alpha, rng)
        for rep in (InducedRepData.regular(G, alpha, 1), InducedRepData.regular(G, alpha, 2)):
            zeta_rho(X, rep, terms=6)
            for r in range(1, 7):
                twisted_lefschetz(X, rep, r)

    def test_trivial_group_reduction(self):
        F = trivial_group()
        X = EquivariantComplex(F, Automorphism.identity(F), [1, 2, 1], FIBER_MATRICES)
        action = CohomologyAction(FIBER_MATRICES)
        for k in range(1, 7):
            assert nielsen_index(X, k, 0) == int(lefschetz_number(action, k).real)
        zeta = zeta_rho(X, InducedRepData.trivial(F, X.alpha))
        expected = zeta_rational(action)
        assert (zeta.numerator, zeta.denominator) == (expected.numerator, expected.denominator)

    def test_pairing_is_torsion_fourier_series(self):
        F = trivial_group()
        X = EquivariantComplex(F, Automorphism.identity(F), [1, 2], OFF_CIRCLE_MATRICES)
        action = CohomologyAction(OFF_CIRCLE_MATRICES)
        # the class <0> term: mean of ln|1 - w lambda| over the circle is ln max(1, |lambda|)
        zero_mode = sum(2.0 * (-1) ** (p + 1) * np.sum(np.log(np.maximum(1.0, np.abs(action.eigenvalues(p)))))
                        for p in range(2))
        ks = [k for k in range(-80, 81) if k != 0]
        for theta in (0.3, 1.7, -2.4):
            series = zero_mode + sum(np.exp(1j * k * theta) * torsion_k(action, k) for k in ks)
            assert pairing_on_circle(X, theta) == pytest.approx(series.real, abs=1e-8)
            assert abs(series.imag) < 1e-10


class TestCoverBenchmarks:
    @pytest.mark.parametrize("t", [0.5, 5.0, 20.0])
    def test_bessel(self, fixtures_dir, t):
        circle = LaurentMatrixComplex.from_json(load_json(fixtures_dir / "circle.json"))
        values = heat_trace_coefficients(circle, 0, range(6), t)
        for m in range(6):
            assert abs(values[(m,)] - special.ive(m, 2 * t)) <= 1e-10

    @pytest.mark.parametrize("m", [1, 2])
    def test_betti_vanishes(self, m):
        report = delocalized_betti(LaurentMatrixComplex.circle(), 0, m)
        assert abs(report.limit) < 1e-3


class TestFiniteCoverRoundTrip:
    @pytest.mark.parametrize("spec", ROUND_TRIP_GROUPS)
    def test_round_trip(self, spec, rng):
        T = burnside_table(GroupFactory.from_spec(spec))
        values = rng.normal(size=T.num_classes) + 1j * rng.normal(size=T.num_classes)
        back = delocalized_from_twisted(T, twisted_from_delocalized(ClassValueVector(T, values)))
        assert np.max(np.abs(back.values - values)) <= 1e-10

    def test_z2_regular_cover(self, fixtures_dir):
        table = CharacterTable.from_json(load_json(fixtures_dir / "z2_table.json"))
        v = ClassValueVector.from_json(table, load_json(fixtures_dir / "z2_betti0.json"))
        assert v.values.tolist() == regular_betti0(table).values.tolist() == [0.5, 0.5]
        assert twisted_from_delocalized(v).tolist() == [1, 0]


class TestElementaryProperties:
    def test_vanishing_rules(self):
        for d in range(13):
            assert (vanishing_rules(d, "torsion") == 0) == (d % 2 == 0)
            assert (vanishing_rules(d, "signature_eta") == 0) == (d % 4 == 1)

    def test_signature_eta_vanishing_matches_hyperbolic(self, rng):
        for n in (1, 2, 3, 4):
            g = random_class(rng, n)
            if vanishing_rules(g.dimension, "signature_eta") is not None:
                assert eta_closed(g) == 0.0

    def test_product_deltas(self):
        for chi1, chi2, b1, b2 in itertools.product((0, 2, -1), (0, 1, 3), (False, True), (False, True)):
            value = product_combinators(chi1, chi2, 0.25 + 1j, -1.5, b1, b2)
            assert value == pytest.approx(b1 * chi1 * -1.5 + b2 * chi2 * (0.25 + 1j))

    def test_conjugate_duality_on_mapping_torus(self):
        action = CohomologyAction([[[2.0 + 1.0j]], [[0.5 - 0.2j, 0.1], [0.0, 3.0j]]])
        for k in (1, 2, 3):
            v = InvariantValue(InvariantKind.TORSION, k, torsion_k(action, k))
            assert dual_class_value(v, -k).value == pytest.approx(torsion_k(action, -k), abs=1e-12)

    def test_conjugate_duality_on_cover(self):
        X = tensor_product(LaurentMatrixComplex.circle(0.5 + 0.3j), LaurentMatrixComplex.circle())
        values = heat_trace_coefficients(X, 1, [(1, 2), (-1, -2)], 0.6)
        assert values[(-1, -2)] == pytest.approx(values[(1, 2)].conjugate(), abs=1e-12)

    def test_conjugate_duality_on_finite_cover(self, rng):
        G = symmetric_group(3)
        T = burnside_table(G)
        # classes of S3 are closed under inversion, so real values map to real values
        out = twisted_from_delocalized(ClassValueVector(T, rng.normal(size=T.num_classes)))
        assert np.allclose(out.imag, 0.0, atol=1e-12)
