import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from probkin import Frame, SetFunction, SignedMassFunction, mobius_transform, zeta_transform
from probkin.errors import InvariantViolation
from probkin.lattice import naive_mobius, naive_zeta, subsets_of

from conftest import frame_of, random_mass, random_set_function


class TestFrame:
    def test_masks_and_labels(self):
        f = frame_of(3)
        assert f.mask_of("{a,c}") == 0b101
        assert f.mask_of(["b"]) == 0b010
        assert f.subset_str(0b110) == "{b,c}"
        assert f.subset_str(0) == "{}"
        assert f.complement(0b001) == 0b110
        assert f.full == 0b111

    def test_label_validation(self):
        with pytest.raises(InvariantViolation):
            Frame(("a", "a"))
        with pytest.raises(InvariantViolation):
            Frame(())
        with pytest.raises(InvariantViolation):
            Frame(("a", "b c"))
        with pytest.raises(InvariantViolation):
            Frame(tuple(f"x{i}" for i in range(17)))

    def test_unknown_label(self):
        with pytest.raises(InvariantViolation):
            frame_of(2).mask_of("{z}")


class TestMobiusZeta:
    def test_uniform_probability_has_singleton_masses(self):
        f = frame_of(2)
        c = SetFunction(f, (Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1)))
        m = mobius_transform(c)
        assert m.masses == {0b01: Fraction(1, 2), 0b10: Fraction(1, 2)}

    def test_vacuous_mass_is_full_frame(self):
        f = frame_of(3)
        vals = [Fraction(0)] * 8
        vals[7] = Fraction(1)
        m = mobius_transform(SetFunction(f, tuple(vals)))
        assert m.masses == {0b111: Fraction(1)}

    def test_quarter_quarter_example(self):
        f = frame_of(2)
        c = SetFunction(f, (Fraction(0), Fraction(1, 4), Fraction(1, 4), Fraction(1)))
        m = mobius_transform(c)
        assert m.masses == {
            0b01: Fraction(1, 4),
            0b10: Fraction(1, 4),
            0b11: Fraction(1, 2),
        }

    def test_zeta_of_point_mass_is_vacuous(self):
        f = frame_of(3)
        c = zeta_transform(SignedMassFunction(f, {0b111: Fraction(1)}))
        assert all(c[m] == 0 for m in range(7))
        assert c[0b111] == 1

    def test_zeta_two_focal_example(self):
        f = frame_of(3)
        c = zeta_transform(
            SignedMassFunction(f, {0b001: Fraction(1, 2), 0b110: Fraction(1, 2)})
        )
        expected = {
            0b000: 0, 0b001: Fraction(1, 2), 0b010: 0, 0b011: Fraction(1, 2),
            0b100: 0, 0b101: Fraction(1, 2), 0b110: Fraction(1, 2), 0b111: 1,
        }
        assert all(c[m] == v for m, v in expected.items())

    def test_round_trip_randomized(self):
        rng = random.Random(101)
        for trial in range(250):
            f = frame_of(rng.randint(1, 10))
            c = random_set_function(f, rng)
            assert zeta_transform(mobius_transform(c)).values == c.values
            m = random_mass(f, rng, signed=True)
            assert mobius_transform(zeta_transform(m)).masses == m.masses

    def test_fast_equals_naive_exhaustive(self):
        rng = random.Random(55)
        for n in range(1, 7):
            f = frame_of(n)
            c = random_set_function(f, rng)
            assert mobius_transform(c).masses == naive_mobius(c).masses
            m = random_mass(f, rng, signed=True)
            assert zeta_transform(m).values == naive_zeta(m).values

    def test_linearity(self):
        rng = random.Random(7)
        for _ in range(50):
            f = frame_of(rng.randint(1, 6))
            c1 = random_set_function(f, rng)
            c2 = random_set_function(f, rng)
            alpha = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
            beta = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
            combo = c1.scaled(alpha).plus(c2.scaled(beta))
            m1 = mobius_transform(c1)
            m2 = mobius_transform(c2)
            expect = {}
            for mask in f.subsets():
                v = alpha * m1[mask] + beta * m2[mask]
                if v != 0 and mask != 0:
                    expect[mask] = v
            assert mobius_transform(combo).masses == expect

    @given(st.integers(1, 4), st.data())
    def test_round_trip_property(self, n, data):
        f = frame_of(n)
        rationals = st.fractions(
            min_value=Fraction(-3), max_value=Fraction(3), max_denominator=32
        )
        vals = [Fraction(0)] + data.draw(
            st.lists(rationals, min_size=f.size - 1, max_size=f.size - 1)
        )
        c = SetFunction(f, tuple(vals))
        assert zeta_transform(mobius_transform(c)).values == c.values

    def test_nonzero_empty_set_rejected(self):
        f = frame_of(2)
        c = SetFunction(f, (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1)))
        with pytest.raises(InvariantViolation):
            mobius_transform(c)


class TestSignedMassFunction:
    def test_empty_set_mass_forbidden(self):
        f = frame_of(2)
        with pytest.raises(InvariantViolation):
            SignedMassFunction(f, {0: Fraction(1, 2), 0b11: Fraction(1, 2)})

    def test_zero_entries_dropped(self):
        f = frame_of(2)
        m = SignedMassFunction(f, {0b01: Fraction(0), 0b11: Fraction(1)})
        assert m.focal_sets == [0b11]
        assert m[0b01] == 0

    def test_floats_rejected(self):
        f = frame_of(2)
        with pytest.raises(InvariantViolation):
            SignedMassFunction(f, {0b01: 0.5, 0b11: 0.5})


def test_subsets_of_enumerates_the_powerset_of_the_mask():
    assert sorted(subsets_of(0b101)) == [0b000, 0b001, 0b100, 0b101]
