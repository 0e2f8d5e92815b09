import math

import pytest

from slicedfg import (
    Projected1DMeasure,
    SizeLimitError,
    ValidationError,
    fg1d,
    fg1d_bruteforce,
    survival,
)
from slicedfg.rng import Xoshiro256StarStar


def atoms(*values, masses=None):
    return Projected1DMeasure(values, masses)


def random_unit_atoms(rng, max_atoms):
    n = rng.below(max_atoms + 1)
    return atoms(*(0.05 + 3 * rng.random() for _ in range(n)))


class TestProjected1DMeasure:
    def test_rejects_zero_value(self):
        with pytest.raises(ValidationError):
            atoms(0.0)

    def test_rejects_bad_mass(self):
        with pytest.raises(ValidationError):
            Projected1DMeasure([1.0], [0.0])

    def test_empty(self):
        assert atoms().is_empty


class TestSurvival:
    def test_single_atom(self):
        s = survival(atoms(3.0))
        assert s.inverse(0.5) == 3.0
        assert s.inverse(1.0) == 3.0
        assert s.inverse(1.5) == 0.0

    def test_two_atoms(self):
        s = survival(Projected1DMeasure([1.0, 3.0], [1.0, 2.0]))
        # descending sort puts the mass-2 atom at 3 first
        assert s.inverse(1.0) == 3.0
        assert s.inverse(2.0) == 3.0
        assert s.inverse(2.5) == 1.0
        assert s.inverse(3.0) == 1.0
        assert s.inverse(3.5) == 0.0

    def test_empty(self):
        s = survival(atoms())
        assert s.inverse(0.5) == 0.0
        assert s.total_mass == 0.0

    def test_merges_equal_values(self):
        s = survival(Projected1DMeasure([2.0, 2.0, 1.0], [1.0, 1.5, 1.0]))
        assert len(s.values) == 2
        assert s.cum_masses.tolist() == [2.5, 3.5]

    def test_forward_direction(self):
        s = survival(Projected1DMeasure([1.0, 3.0], [1.0, 2.0]))
        assert s(0.5) == 3.0  # all mass at values >= 0.5
        assert s(2.0) == 2.0
        assert s(3.5) == 0.0


class TestFg1d:
    def test_simple_pair(self):
        assert fg1d(atoms(3.0), atoms(1.0), 1) == pytest.approx(2.0, abs=1e-15)

    def test_excess_mass_to_origin(self):
        # one unit 3<->1 costs 2, the excess unit at 3 pays its own value
        a = Projected1DMeasure([3.0], [2.0])
        b = atoms(1.0)
        assert fg1d(a, b, 1) == pytest.approx(5.0, abs=1e-15)

    def test_identical_measures(self):
        rng = Xoshiro256StarStar(10)
        for _ in range(10):
            a = random_unit_atoms(rng, 6)
            for p in (1, 1.5, 2):
                assert fg1d(a, a, p) == 0.0

    def test_against_empty(self):
        assert fg1d(atoms(3.0), atoms(), 2) == pytest.approx(9.0, abs=1e-15)

    def test_empty_identity_general(self):
        rng = Xoshiro256StarStar(11)
        for _ in range(20):
            a = random_unit_atoms(rng, 6)
            for p in (1, 1.5, 2):
                expect = float(sum(a.masses * a.values**p))
                assert fg1d(a, atoms(), p) == pytest.approx(expect, rel=1e-12, abs=1e-15)

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            fg1d(atoms(), atoms(), 0.9)

    def test_symmetry(self):
        rng = Xoshiro256StarStar(12)
        for _ in range(50):
            a = random_unit_atoms(rng, 6)
            b = random_unit_atoms(rng, 6)
            for p in (1, 1.5, 2):
                assert fg1d(a, b, p) == pytest.approx(fg1d(b, a, p), rel=1e-14, abs=1e-15)

    def test_triangle_inequality_rooted(self):
        rng = Xoshiro256StarStar(13)
        for _ in range(100):
            a = random_unit_atoms(rng, 5)
            b = random_unit_atoms(rng, 5)
            c = random_unit_atoms(rng, 5)
            for p in (1, 2):
                dab = fg1d(a, b, p) ** (1 / p)
                dbc = fg1d(b, c, p) ** (1 / p)
                dac = fg1d(a, c, p) ** (1 / p)
                assert dac <= dab + dbc + 1e-9


class TestBruteForce:
    def test_simple_pair(self):
        assert fg1d_bruteforce(atoms(3.0), atoms(1.0), 1) == pytest.approx(2.0)

    def test_both_empty(self):
        for p in (1, 1.5, 2):
            assert fg1d_bruteforce(atoms(), atoms(), p) == 0.0

    def test_two_vs_one(self):
        # match 3<->2 (cost 1) and drop the atom at 1 (cost 1)
        got = fg1d_bruteforce(atoms(3.0, 1.0), atoms(2.0), 1)
        assert got == pytest.approx(2.0, abs=1e-15)

    def test_matches_closed_form(self):
        rng = Xoshiro256StarStar(14)
        for _ in range(200):
            a = random_unit_atoms(rng, 5)
            b = random_unit_atoms(rng, 5)
            for p in (1, 1.5, 2):
                assert fg1d_bruteforce(a, b, p) == pytest.approx(
                    fg1d(a, b, p), abs=1e-12
                )

    def test_integer_masses_split(self):
        a = Projected1DMeasure([3.0], [2.0])
        b = Projected1DMeasure([1.0], [1.0])
        assert fg1d_bruteforce(a, b, 1) == pytest.approx(fg1d(a, b, 1), abs=1e-12)

    def test_common_unit_masses(self):
        a = Projected1DMeasure([3.0], [1.0])
        b = Projected1DMeasure([2.0, 1.0], [0.5, 0.5])
        assert fg1d_bruteforce(a, b, 2) == pytest.approx(fg1d(a, b, 2), abs=1e-12)

    def test_refuses_large_instances(self):
        big = atoms(*(1.0 + i for i in range(9)))
        with pytest.raises(SizeLimitError):
            fg1d_bruteforce(big, atoms(1.0), 1)

    def test_refuses_incommensurable_masses(self):
        a = Projected1DMeasure([1.0, 2.0], [1.0, math.sqrt(2)])
        with pytest.raises(ValidationError):
            fg1d_bruteforce(a, atoms(1.0), 1)
