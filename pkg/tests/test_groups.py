import cmath
import math

import numpy as np
import pytest

from errors import SchemaError, UnsupportedError, ValidationError
from groups import (
    Automorphism,
    CharacterTable,
    FiniteGroup,
    GroupFactory,
    InducedRepData,
    burnside_table,
    conjugacy_classes,
    cyclic_group,
    dihedral_group,
    induced_character,
    quaternion_group,
    semidirect_inverse,
    semidirect_multiply,
    symmetric_group,
    twisted_classes,
    verify_character_table,
)

CATALOGUE_TO_48 = (
    [f"Z{n}" for n in range(1, 49)]
    + [f"D{n}" for n in range(2, 25)]
    + ["S3", "S4", "A4", "Q8", "Z2xZ2", "Z2xS3", "Z3xS3", "Z2xA4", "Z2xQ8", "Z2xS4", "Z2xZ2xZ2", "Z4xZ2"]
)


def automorphisms_of(G):
    yield Automorphism.identity(G)
    if G.is_abelian():
        for e in range(2, 6):
            if all(G.power(x, e) != G.identity or x == G.identity for x in G.elements):
                yield Automorphism.power_map(G, e)
    for g in G.elements:
        if g != G.identity:
            yield Automorphism.inner(G, g)


class TestFiniteGroup:
    def test_rejects_non_associative_table(self):
        # Latin square with identity 0 that is not associative
        table = [[0, 1, 2, 3, 4],
                 [1, 0, 3, 4, 2],
                 [2, 4, 0, 1, 3],
                 [3, 2, 4, 0, 1],
                 [4, 3, 1, 2, 0]]
        with pytest.raises(ValidationError):
            FiniteGroup(table)

    def test_rejects_non_latin(self):
        with pytest.raises(ValidationError):
            FiniteGroup([[0, 1], [1, 1]])

    def test_inverse_and_identity(self):
        G = symmetric_group(3)
        for x in G.elements:
            assert G.mul(x, G.inv(x)) == G.identity
        assert G.identity == 0

    def test_json_round_trip(self):
        G = dihedral_group(4)
        H = FiniteGroup.from_json(G.to_json())
        assert H == G
        assert H.labels == G.labels

    def test_json_schema_error(self):
        with pytest.raises(SchemaError) as info:
            FiniteGroup.from_json({"order": 2, "mul_table": [0, 1, 1]})
        assert "mul_table" in info.value.path

    def test_catalogue_orders(self):
        assert GroupFactory.from_spec("S4").order == 24
        assert GroupFactory.from_spec("Q8").order == 8
        assert GroupFactory.from_spec("Z2xS3").order == 12
        assert GroupFactory.create("dihedral", 5).order == 10
        assert not quaternion_group().is_abelian()

    def test_unknown_group(self):
        with pytest.raises(ValueError):
            GroupFactory.create("monster")
        assert "cyclic" in GroupFactory.list_groups()

    def test_automorphism_validation(self):
        G = cyclic_group(4)
        with pytest.raises(ValidationError):
            Automorphism(G, [0, 2, 1, 3])
        assert Automorphism.power_map(G, 3).order == 2


class TestConjugacyClasses:
    def test_z2(self):
        assert conjugacy_classes(cyclic_group(2)) == [[0], [1]]

    def test_s3(self):
        sizes = sorted(len(c) for c in conjugacy_classes(symmetric_group(3)))
        assert sizes == [1, 2, 3]

    def test_z3_singletons(self):
        assert conjugacy_classes(cyclic_group(3)) == [[0], [1], [2]]

    def test_partition(self):
        G = GroupFactory.from_spec("S4")
        classes = conjugacy_classes(G)
        assert sorted(x for c in classes for x in c) == list(range(24))
        assert classes[0] == [G.identity]


class TestTwistedClasses:
    def test_identity_automorphism_is_conjugacy(self):
        for name in ("S3", "Q8", "D4"):
            G = GroupFactory.from_spec(name)
            dec = twisted_classes(G, Automorphism.identity(G), 5)
            assert dec.classes == conjugacy_classes(G)

    def test_z3_squaring_single_class(self):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        dec = twisted_classes(G, alpha, 1)
        assert dec.classes == [[0, 1, 2]]
        assert dec.sizes == [3]
        assert dec.stabilizer_orders == [1]

    def test_z2_k7(self):
        G = cyclic_group(2)
        dec = twisted_classes(G, Automorphism.identity(G), 7)
        assert dec.classes == [[0], [1]]
        assert dec.sizes == [1, 1]
        assert dec.stabilizer_orders == [2, 2]

    def test_k_reduced_by_alpha_order(self):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        assert twisted_classes(G, alpha, 3).classes == twisted_classes(G, alpha, 1).classes
        assert twisted_classes(G, alpha, 2).classes == conjugacy_classes(G)

    @pytest.mark.parametrize("name", CATALOGUE_TO_48)
    def test_orbit_stabilizer(self, name):
        G = GroupFactory.from_spec(name)
        for alpha in list(automorphisms_of(G))[:6]:
            for k in range(3):
                dec = twisted_classes(G, alpha, k)
                assert sum(dec.sizes) == G.order
                for size, stab in zip(dec.sizes, dec.stabilizer_orders):
                    assert size * stab == G.order

    def test_alpha_id_k0_is_conjugacy(self):
        G = GroupFactory.from_spec("A4")
        assert twisted_classes(G, Automorphism.identity(G), 0).classes == conjugacy_classes(G)


class TestCharacterTables:
    def test_z2_valid(self):
        T = CharacterTable([1, 1], [[1, 1], [1, -1]])
        report = verify_character_table(T)
        assert report.ok
        assert report.metrics["condition_number"] == pytest.approx(1.0)

    def test_s3_textbook_valid(self):
        T = CharacterTable([1, 3, 2], [[1, 1, 1], [1, -1, 1], [2, 0, -1]])
        assert verify_character_table(T).ok

    def test_duplicated_row_fails(self):
        T = CharacterTable([1, 1], [[1, 1], [1, 1]])
        report = verify_character_table(T)
        assert not report.ok
        assert "rho0" in report.first_violation and "rho1" in report.first_violation
        with pytest.raises(ValidationError):
            report.raise_for_status()

    def test_non_square(self):
        with pytest.raises(SchemaError):
            verify_character_table(CharacterTable([1, 1, 1], [[1, 1, 1], [1, -1, 1]]))

    def test_burnside_s3(self):
        T = burnside_table(symmetric_group(3))
        assert list(T.class_sizes) == [1, 3, 2]
        np.testing.assert_allclose(T.values, [[1, 1, 1], [1, -1, 1], [2, 0, -1]], atol=1e-10)

    def test_burnside_cyclic_is_roots_of_unity(self):
        T = burnside_table(cyclic_group(5))
        assert np.allclose(np.abs(T.values), 1.0)
        assert np.allclose(T.values[0], 1.0)

    def test_burnside_quaternion_degrees(self):
        T = burnside_table(quaternion_group())
        assert sorted(T.degrees.tolist()) == [1, 1, 1, 1, 2]

    @pytest.mark.parametrize("name", CATALOGUE_TO_48)
    def test_burnside_tables_are_orthogonal(self, name):
        G = GroupFactory.from_spec(name)
        T = burnside_table(G)
        assert T.values.shape[0] == T.values.shape[1] == len(conjugacy_classes(G))
        assert verify_character_table(T).ok
        assert np.sum(T.degrees ** 2) == pytest.approx(G.order)

    def test_burnside_order_limit(self):
        with pytest.raises(UnsupportedError):
            burnside_table(cyclic_group(49))

    def test_json_round_trip(self):
        T = burnside_table(cyclic_group(3))
        S = CharacterTable.from_json(T.to_json())
        np.testing.assert_allclose(S.values, T.values)
        assert S.to_dataframe().shape == (3, 3)


def z3_squaring_reps():
    G = cyclic_group(3)
    alpha = Automorphism.power_map(G, 2)
    w = cmath.exp(2j * math.pi / 3)
    reps = [InducedRepData.trivial(G, alpha, 0.4)]
    for a in range(3):
        chi = [w ** (a * x) for x in range(3)]
        reps.append(InducedRepData.one_dimensional(G, alpha, 2, chi, cmath.exp(0.9j)))
    return G, alpha, reps


class TestInducedCharacter:
    def test_trivial_group_circle(self):
        G = GroupFactory.from_spec("trivial")
        theta = 0.7
        rep = InducedRepData.trivial(G, Automorphism.identity(G), theta)
        for k in range(-3, 4):
            assert induced_character(rep, 0, k) == pytest.approx(cmath.exp(1j * k * theta))

    def test_z2_sign(self):
        G = cyclic_group(2)
        rep = InducedRepData.one_dimensional(G, Automorphism.identity(G), 1, [1, -1], 1.0)
        for k in range(1, 5):
            assert induced_character(rep, 0, k) == 1
            assert induced_character(rep, 1, k) == -1

    def test_j_does_not_divide_k(self):
        _, _, reps = z3_squaring_reps()
        assert induced_character(reps[1], 1, 1) == 0

    def test_period_two_sums_orbit(self):
        G, alpha, reps = z3_squaring_reps()
        rep = reps[2]  # chi_1, j = 2
        w = cmath.exp(2j * math.pi / 3)
        # mu(1) + mu(alpha^-1(1)) = w + w^2 = -1
        assert induced_character(rep, 1, 2) == pytest.approx(-cmath.exp(0.9j))

    def test_rejects_broken_intertwiner(self):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        w = cmath.exp(2j * math.pi / 3)
        with pytest.raises(ValidationError):
            InducedRepData.one_dimensional(G, alpha, 1, [1, w, w * w], 1.0)

    def test_rejects_non_unitary(self):
        G = cyclic_group(2)
        with pytest.raises(ValidationError):
            InducedRepData.one_dimensional(G, Automorphism.identity(G), 1, [1, -1], 2.0)

    @pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "Z4", "Z2xZ2", "D4", "Q8", "A4", "D6"])
    def test_constant_on_twisted_classes(self, name):
        G = GroupFactory.from_spec(name)
        for alpha in list(automorphisms_of(G))[:4]:
            for j in (1, 2):
                rep = InducedRepData.regular(G, alpha, j, phase=0.3)
                for k in range(-2, 5):
                    for f in G.elements:
                        value = induced_character(rep, f, k)
                        ak = alpha.power(k)
                        for g in G.elements:
                            h = G.mul(G.mul(g, f), ak(G.inv(g)))
                            assert induced_character(rep, h, k) == pytest.approx(value, abs=1e-9)

    def test_semidirect_conjugation_is_twisted(self):
        G = symmetric_group(3)
        alpha = Automorphism.inner(G, 3)
        for f in G.elements:
            for g in G.elements:
                for k in range(3):
                    x = semidirect_multiply(alpha, semidirect_multiply(alpha, (g, 0), (f, k)),
                                            semidirect_inverse(alpha, (g, 0)))
                    assert x == (G.mul(G.mul(g, f), alpha.power(k)(G.inv(g))), k)

    def test_semidirect_inverse(self):
        G = cyclic_group(3)
        alpha = Automorphism.power_map(G, 2)
        for f in G.elements:
            for k in range(-2, 3):
                assert semidirect_multiply(alpha, (f, k), semidirect_inverse(alpha, (f, k))) == (0, 0)
