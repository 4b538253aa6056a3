import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from errors import DomainError, UndefinedPairingError, UnsupportedError, ValidationError
from groups import (
    Automorphism,
    GroupFactory,
    InducedRepData,
    cyclic_group,
    induced_character,
    symmetric_group,
    trivial_group,
    twisted_classes,
)
from mapping_torus import CohomologyAction, circle_torsion, lefschetz_number, torsion_k, zeta_rational
from nielsen import (
    EquivariantComplex,
    alternating_coefficient_sum,
    direct_sum,
    zeta_pairing,
    index_table,
    nielsen_index,
    pairing_on_circle,
    recover_torsion_trivial_group,
    twisted_coefficient_sum,
    twisted_lefschetz,
    validate_complex,
    zeta_rho,
)
from serialization import load_json

E, G_ = 0, 1


@pytest.fixture
def deck_swap(fixtures_dir):
    return EquivariantComplex.from_json(load_json(fixtures_dir / "deck_swap.json"))


@pytest.fixture
def sign_rep(deck_swap):
    return InducedRepData.one_dimensional(deck_swap.group, deck_swap.alpha, 1, [1, -1], 1)


def trivial_group_complex(matrices):
    F = trivial_group()
    return EquivariantComplex(F, Automorphism.identity(F), [len(m) for m in matrices], matrices)


FIBER_MATRICES = [np.array([[1]]), np.array([[2, 1], [1, 1]]), np.array([[1]])]
OFF_CIRCLE_MATRICES = [np.array([[2]]), np.array([[3, 1], [1, 1]])]


class TestEquivariantComplex:
    def test_identity_on_one_orbit_is_valid(self):
        F = cyclic_group(3)
        X = EquivariantComplex(F, Automorphism.identity(F), [1], [np.eye(3, dtype=int)])
        assert validate_complex(X).ok

    def test_deck_swap_is_valid(self, deck_swap):
        assert deck_swap.group == GroupFactory.from_spec("Z2")
        assert validate_complex(deck_swap).ok

    def test_broken_equivariance_is_located(self):
        F = cyclic_group(2)
        X = EquivariantComplex(F, Automorphism.identity(F), [1], [np.array([[1, 0], [0, 0]])])
        report = validate_complex(X)
        assert not report.ok
        assert "degree 0" in report.first_violation
        assert "orbit 0" in report.first_violation

    def test_from_json_rejects_invalid(self):
        doc = {"group": "Z2", "degrees": [{"orbits": 1, "phi_hat": [[1, 0], [0, 0]]}]}
        with pytest.raises(ValidationError):
            EquivariantComplex.from_json(doc)

    def test_coboundary_must_be_chain_map(self):
        F = cyclic_group(2)
        alpha = Automorphism.identity(F)
        X = EquivariantComplex.from_blocks(F, alpha,
                                           [np.array([[[1, 0]]]), np.array([[[0, 1]]])],
                                           [np.array([[[1, 0]]])])
        report = validate_complex(X)
        assert not report.ok
        assert "commute" in report.first_violation

    def test_random_complexes_are_valid(self, rng):
        G = symmetric_group(3)
        for g in G.elements:
            X = EquivariantComplex.random(G, Automorphism.inner(G, g), rng, contractible=2)
            assert validate_complex(X).ok
            assert any(np.any(d != 0) for d in X.diff)

    def test_json_round_trip(self, deck_swap):
        again = EquivariantComplex.from_json(deck_swap.to_json())
        assert np.array_equal(again.phi_hat[0], deck_swap.phi_hat[0])


class TestIndices:
    def test_deck_swap_odd_power(self, deck_swap):
        for k in (1, 3, 5):
            assert twisted_coefficient_sum(deck_swap, 0, G_, k) == 1
            assert twisted_coefficient_sum(deck_swap, 0, E, k) == 0
            assert nielsen_index(deck_swap, k, G_) == 1
            assert nielsen_index(deck_swap, k, E) == 0

    def test_deck_swap_even_power(self, deck_swap):
        assert twisted_coefficient_sum(deck_swap, 0, E, 2) == 1
        assert twisted_coefficient_sum(deck_swap, 0, G_, 2) == 0

    def test_exact_rationals(self, rng):
        G = symmetric_group(3)
        X = EquivariantComplex.random(G, Automorphism.inner(G, 1), rng)
        assert isinstance(twisted_coefficient_sum(X, 0, 0, 2), Fraction)

    def test_trivial_group_gives_lefschetz_numbers(self):
        X = trivial_group_complex(FIBER_MATRICES)
        action = CohomologyAction(FIBER_MATRICES)
        for k in range(1, 7):
            assert nielsen_index(X, k, 0) == lefschetz_number(action, k).real

    @pytest.mark.parametrize("spec", ["Z4", "S3", "D4", "Z2xZ2"])
    def test_class_invariance(self, spec, rng):
        G = GroupFactory.from_spec(spec)
        for g in G.elements:
            alpha = Automorphism.inner(G, g)
            X = EquivariantComplex.random(G, alpha, rng, degrees=2)
            for k in range(0, 4):
                classes = twisted_classes(G, alpha, k)
                for members in classes.classes:
                    sums = {tuple(twisted_coefficient_sum(X, p, f, k) for p in range(X.top_degree + 1))
                            for f in members}
                    assert len(sums) == 1
                    indices = {nielsen_index(X, k, f) for f in members}
                    assert len(indices) == 1

    def test_automorphism_invariance(self, rng):
        G = cyclic_group(5)
        alpha = Automorphism.power_map(G, 2)
        X = EquivariantComplex.random(G, alpha, rng)
        for k in range(1, 4):
            for f in G.elements:
                assert alternating_coefficient_sum(X, alpha(f), k) == alternating_coefficient_sum(X, f, k)

    def test_contractible_pair_cancels(self, deck_swap):
        F, alpha = deck_swap.group, deck_swap.alpha
        base = EquivariantComplex.from_blocks(F, alpha, [np.array([[[0, 1]]]), np.zeros((0, 0, 2))],
                                              [np.zeros((0, 1, 2))])
        pair = EquivariantComplex.from_blocks(F, alpha, [np.array([[[1, 1]]]), np.array([[[1, 1]]])],
                                              [np.array([[[1, 0]]])])
        assert validate_complex(pair).ok
        total = direct_sum(base, pair)
        assert validate_complex(total).ok
        for k in range(1, 5):
            for f in F.elements:
                assert nielsen_index(total, k, f) == nielsen_index(base, k, f)

    def test_index_table(self, deck_swap):
        table = index_table(deck_swap, 1)
        assert table.loc["e", "index"] == 0
        assert table.loc["g", "index"] == 1
        assert table["size"].tolist() == [1, 1]

    def test_negative_power(self, deck_swap):
        with pytest.raises(DomainError):
            nielsen_index(deck_swap, -1, E)


class TestTwistedLefschetz:
    def test_sign_representation(self, deck_swap, sign_rep):
        for r in range(1, 7):
            assert twisted_lefschetz(deck_swap, sign_rep, r) == (-1) ** r

    def test_regular_is_sum_of_irreducibles(self, deck_swap, sign_rep):
        regular = InducedRepData.regular(deck_swap.group, deck_swap.alpha)
        trivial = InducedRepData.trivial(deck_swap.group, deck_swap.alpha)
        for r in range(1, 5):
            assert twisted_lefschetz(deck_swap, regular, r) == \
                twisted_lefschetz(deck_swap, trivial, r) + twisted_lefschetz(deck_swap, sign_rep, r)

    def test_trivial_group_reduction(self):
        X = trivial_group_complex(FIBER_MATRICES)
        rep = InducedRepData.trivial(X.group, X.alpha)
        action = CohomologyAction(FIBER_MATRICES)
        for r in range(1, 5):
            assert twisted_lefschetz(X, rep, r) == lefschetz_number(action, r).real

    def test_trivial_rep_sums_coefficients(self, rng):
        G = symmetric_group(3)
        alpha = Automorphism.inner(G, 2)
        X = EquivariantComplex.random(G, alpha, rng)
        rep = InducedRepData.trivial(G, alpha)
        for r in range(1, 4):
            expected = sum(alternating_coefficient_sum(X, f, r) for f in G.elements)
            assert twisted_lefschetz(X, rep, r) == expected

    def test_routes_agree_on_random_z3(self, rng):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        omega = cmath.exp(2j * math.pi / 3)
        reps = [InducedRepData.regular(G, alpha, 1), InducedRepData.regular(G, alpha, 2),
                InducedRepData.one_dimensional(G, alpha, 2, [1, omega, omega ** 2], 1)]
        for _ in range(5):
            X = EquivariantComplex.random(G, alpha, rng, degrees=3, contractible=1)
            for rep in reps:
                for r in range(1, 4):
                    twisted_lefschetz(X, rep, r)

    def test_character_matches_groups_module(self, deck_swap, sign_rep):
        assert induced_character(sign_rep, G_, 3) == -1

    def test_incompatible_rep(self, deck_swap):
        F = cyclic_group(3)
        rep = InducedRepData.trivial(F, Automorphism.identity(F))
        with pytest.raises(DomainError):
            twisted_lefschetz(deck_swap, rep, 1)

    def test_r_positive(self, deck_swap, sign_rep):
        with pytest.raises(DomainError):
            twisted_lefschetz(deck_swap, sign_rep, 0)


class TestZetaRho:
    def test_sign_representation(self, deck_swap, sign_rep):
        zeta = zeta_rho(deck_swap, sign_rep)
        assert zeta.exact
        assert zeta.numerator == [1]
        assert zeta.denominator == [1, 1]
        assert zeta.evaluate(0.5) == pytest.approx(1 / 1.5)

    def test_trivial_group_reduction(self):
        X = trivial_group_complex(FIBER_MATRICES)
        zeta = zeta_rho(X, InducedRepData.trivial(X.group, X.alpha))
        expected = zeta_rational(CohomologyAction(FIBER_MATRICES))
        assert zeta.numerator == expected.numerator
        assert zeta.denominator == expected.denominator

    def test_period_two(self, rng):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        X = EquivariantComplex.random(G, alpha, rng)
        zeta = zeta_rho(X, InducedRepData.regular(G, alpha, 2))
        logs = zeta.log_coefficients(8)
        assert all(logs[k - 1] == 0 for k in range(1, 9, 2))

    def test_pole_is_reported(self, deck_swap):
        F = deck_swap.group
        X = EquivariantComplex(F, deck_swap.alpha, [1], [np.eye(2, dtype=int)])
        with pytest.raises(UndefinedPairingError) as info:
            zeta_pairing(X, InducedRepData.trivial(F, deck_swap.alpha))
        assert info.value.order == -1


class TestPairing:
    def test_sign_representation(self, deck_swap, sign_rep):
        assert zeta_pairing(deck_swap, sign_rep) == pytest.approx(math.log(0.25))

    def test_circle_pairing_is_circle_torsion(self):
        X = trivial_group_complex(OFF_CIRCLE_MATRICES)
        action = CohomologyAction(OFF_CIRCLE_MATRICES)
        for theta in (0.0, 0.7, 2.5):
            assert pairing_on_circle(X, theta) == pytest.approx(circle_torsion(action, theta), rel=1e-10)

    def test_recover_torsion(self):
        X = trivial_group_complex(OFF_CIRCLE_MATRICES)
        action = CohomologyAction(OFF_CIRCLE_MATRICES)
        recovered = recover_torsion_trivial_group(X, [-3, -1, 1, 2, 4])
        for k, value in recovered.items():
            assert value == pytest.approx(torsion_k(action, k), abs=1e-8)

    def test_recover_needs_trivial_group(self, deck_swap):
        with pytest.raises(UnsupportedError):
            recover_torsion_trivial_group(deck_swap, [1])
