import math

import pytest

from core import (
    EtaSampler,
    HeatTraceSampler,
    InvariantKind,
    InvariantValue,
    TorsionSeries,
    assemble_torsion_series,
    dual_class_value,
    eta_integral,
    eta_product,
    gaussian_envelope,
    gaussian_family_envelope,
    gaussian_kernel,
    gaussian_moment,
    linear_combination,
    product_combinators,
    torsion_integral,
    torsion_quadrature,
    vanishing_rules,
)
from errors import ConvergenceError, DomainError, SchemaError


def zero_samplers(d):
    return [HeatTraceSampler(lambda t: 0.0, p, d) for p in range(d + 1)]


class TestAssemble:
    def test_zero_series(self):
        series = assemble_torsion_series(zero_samplers(3), 0)
        assert series(0.3) == 0
        assert series(7.0) == 0

    def test_single_term_sign(self):
        samplers = zero_samplers(2)
        samplers[1] = HeatTraceSampler(lambda t: math.exp(-t), 1, 2)
        series = assemble_torsion_series(samplers, 0)
        for t in (0.1, 1.0, 4.0):
            assert series(t) == pytest.approx(-math.exp(-t), abs=1e-15)
        assert series.limit_at_infinity == 0

    def test_limit_stored_unchanged(self):
        series = assemble_torsion_series(zero_samplers(1), 2 + 1j)
        assert series.limit_at_infinity == 2 + 1j

    def test_missing_degree(self):
        samplers = zero_samplers(3)[:-1]
        samplers.append(HeatTraceSampler(lambda t: 0.0, 1, 3))
        with pytest.raises(SchemaError):
            assemble_torsion_series(samplers, 0)

    def test_duplicate_degree(self):
        samplers = zero_samplers(2) + [HeatTraceSampler(lambda t: 0.0, 2, 2)]
        with pytest.raises(SchemaError):
            assemble_torsion_series(samplers, 0)

    def test_degree_out_of_range(self):
        with pytest.raises(SchemaError):
            HeatTraceSampler(lambda t: 0.0, 4, 3)


def gaussian_series(weights, l, exponents, limit=0j):
    def value(t):
        return sum(w * gaussian_kernel(t, l, c) for w, c in zip(weights, exponents))
    return TorsionSeries(value=value, limit_at_infinity=limit,
                         envelope=gaussian_family_envelope(weights, l, exponents))


class TestTorsionIntegral:
    def test_zero_series(self):
        series = assemble_torsion_series(zero_samplers(2), 0)
        assert torsion_integral(series) == 0

    def test_unit_gaussian(self):
        series = gaussian_series([1.0], 1.0, [0.0])
        assert torsion_integral(series) == pytest.approx(-1.0, abs=1e-10)

    def test_without_envelope_uses_estimated_tails(self):
        series = TorsionSeries(value=lambda t: gaussian_kernel(t, 1.0, 1.0))
        assert torsion_integral(series, 1e-9).real == pytest.approx(-math.exp(-1.0), abs=1e-8)

    def test_gaussian_family_matches_moments(self, rng):
        for _ in range(5):
            m = int(rng.integers(1, 4))
            cs = rng.uniform(0.0, 5.0, size=m)
            l = float(rng.uniform(0.5, 4.0))
            series = gaussian_series([1.0] * m, l, cs)
            expected = -sum(gaussian_moment(l, c) for c in cs)
            assert torsion_integral(series).real == pytest.approx(expected, abs=1e-9)

    def test_linearity(self, rng):
        l = 1.3
        a = gaussian_series([1.0], l, [0.4])
        b = gaussian_series([1.0], l, [2.2])
        wa, wb = float(rng.normal()), float(rng.normal())
        combo = gaussian_series([wa, wb], l, [0.4, 2.2])
        lhs = torsion_integral(combo)
        rhs = wa * torsion_integral(a) + wb * torsion_integral(b)
        assert abs(lhs - rhs) < 1e-9

    def test_halving_tolerance_does_not_increase_error(self):
        l, c = 1.7, 0.8
        series = gaussian_series([1.0], l, [c])
        exact = -math.exp(-l * c) / l
        previous = None
        for tol in (1e-6, 5e-7, 2.5e-7, 1.25e-7):
            err = abs(torsion_integral(series, tol) - exact)
            if previous is not None:
                assert err <= max(previous, 1e-13)
            previous = err

    def test_limit_subtraction(self):
        # T(t) = (1 - e^-t) L integrates to zero
        L = 0.75
        series = TorsionSeries(value=lambda t: -math.expm1(-t) * L, limit_at_infinity=L)
        assert abs(torsion_integral(series, 1e-9)) < 1e-9

    def test_non_decaying_series_raises(self):
        series = TorsionSeries(value=lambda t: 1.0)
        with pytest.raises(ConvergenceError) as info:
            torsion_integral(series)
        assert info.value.tail_estimate is not None

    def test_report_carries_tails(self):
        res = torsion_quadrature(gaussian_series([1.0], 2.0, [1.0]))
        assert res.total_error < 1e-9
        assert res.window[0] < 0 < res.window[1]


class TestEtaIntegral:
    def test_zero_sampler(self):
        assert eta_integral(EtaSampler(lambda s: 0.0)) == 0

    def test_power_law_sampler(self):
        # (2/sqrt(pi)) int s^-3 e^{-1/4s^2} ds = (2/sqrt(pi)) * 2
        sampler = EtaSampler(lambda s: s ** -3 * math.exp(-1.0 / (4 * s * s)))
        assert eta_integral(sampler, 1e-9).real == pytest.approx(4 / math.sqrt(math.pi), abs=1e-8)

    def test_linearity(self):
        f = EtaSampler(lambda s: math.exp(-s * s))
        g = EtaSampler(lambda s: s * math.exp(-s))
        combo = linear_combination([f, g], [2.0, -3.0])
        lhs = eta_integral(combo, 1e-9)
        rhs = 2.0 * eta_integral(f, 1e-9) - 3.0 * eta_integral(g, 1e-9)
        assert abs(lhs - rhs) < 1e-8


class TestGaussianMoment:
    @pytest.mark.parametrize("l, c, expected", [
        (1.0, 0.0, 1.0),
        (2.0, 1.0, math.exp(-2.0) / 2.0),
    ])
    def test_closed(self, l, c, expected):
        assert gaussian_moment(l, c) == pytest.approx(expected, rel=1e-15)

    def test_quadrature_path(self):
        assert gaussian_moment(1.0, 0.0, method="quadrature") == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("l", [0.0, -1.0])
    def test_domain(self, l):
        with pytest.raises(DomainError):
            gaussian_moment(l, 1.0)

    def test_envelope_bounds_tails(self):
        env = gaussian_envelope(1.0, 1.0, 0.5)
        assert env.small(1e-3) < 1e-100
        assert env.large(1e6) < 1e-100
        assert env.large(1e6) >= 0


class TestProperties:
    @pytest.mark.parametrize("value, expected", [
        (2 / 3, 2 / 3),
        (0.5 + 0j, 0.5),
        (1.5 + 2.5j, 1.5 - 2.5j),
    ])
    def test_dual_class_value(self, value, expected):
        v = InvariantValue(InvariantKind.TORSION, "g", value)
        dual = dual_class_value(v, "g^-1")
        assert dual.value == expected
        assert dual.kind == InvariantKind.TORSION
        assert dual.class_label == "g^-1"

    def test_dual_is_involution(self):
        v = InvariantValue("eta", 3, 0.1 - 0.2j)
        assert dual_class_value(dual_class_value(v)) == v

    def test_product_both_nontrivial(self):
        assert product_combinators(2, 3, 1.0, 2.0, False, False) == 0

    def test_product_first_trivial(self):
        assert product_combinators(2, 7, 9.0, 0.5, True, False) == 1.0

    def test_product_both_trivial(self):
        assert product_combinators(2, 0, 3.0, 5.0, True, True) == 10

    def test_eta_product(self):
        assert eta_product(1.0, 4.0, 0.3, 0.2, True, False) == pytest.approx(0.2)
        assert eta_product(1.0, 4.0, 0.3, 0.2, False, True) == pytest.approx(1.2)
        assert eta_product(1.0, 4.0, 0.3, 0.2, False, False) == 0

    @pytest.mark.parametrize("d, kind, expected", [
        (4, "torsion", 0),
        (2, "torsion", 0),
        (3, "torsion", None),
        (5, "signature_eta", 0),
        (1, "signature_eta", 0),
        (3, "signature_eta", None),
        (7, "signature_eta", None),
    ])
    def test_vanishing_rules(self, d, kind, expected):
        assert vanishing_rules(d, kind) == expected

    def test_vanishing_unknown_kind(self):
        with pytest.raises(ValueError):
            vanishing_rules(3, "betti")
