import math

import numpy as np
import pytest

from slicedfg import (
    EMPTY,
    PersistenceMeasure,
    PlanePoint,
    ValidationError,
    load_measure,
    normalize,
    pers,
    pers_infty,
    save_measure,
)
from slicedfg.measures import pers_pow
from slicedfg.rng import Xoshiro256StarStar

SQRT2 = math.sqrt(2.0)


def random_measure(rng, max_points=20, scale=1.0):
    n = rng.below(max_points + 1)
    pts = []
    for _ in range(n):
        b = scale * (2 * rng.random() - 1)
        d = b + scale * (0.05 + rng.random())
        pts.append((b, d))
    masses = [0.1 + 3 * rng.random() for _ in range(n)]
    return PersistenceMeasure(pts, masses)


class TestPlanePoint:
    def test_gap(self):
        assert PlanePoint(0.0, 2.0).gap == pytest.approx(SQRT2)

    def test_rejects_degenerate(self):
        with pytest.raises(ValidationError):
            PlanePoint(1.0, 1.0)
        with pytest.raises(ValidationError):
            PlanePoint(2.0, 1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValidationError):
            PlanePoint(0.0, math.inf)
        with pytest.raises(ValidationError):
            PlanePoint(math.nan, 1.0)


class TestConstruction:
    def test_empty(self):
        assert EMPTY.is_empty
        assert len(EMPTY) == 0

    def test_mass_defaults(self):
        m = PersistenceMeasure([(0, 1), (1, 3)])
        assert np.array_equal(m.masses, [1.0, 1.0])

    def test_rejects_bad_points(self):
        with pytest.raises(ValidationError):
            PersistenceMeasure([(1, 1)])
        with pytest.raises(ValidationError):
            PersistenceMeasure([(0, 1)], [0.0])
        with pytest.raises(ValidationError):
            PersistenceMeasure([(0, 1)], [-2.0])
        with pytest.raises(ValidationError):
            PersistenceMeasure([(0, math.inf)])

    def test_duplicates_kept(self):
        m = PersistenceMeasure([(0, 1), (0, 1)], [1.0, 2.0])
        assert len(m) == 2
        assert pers_pow(m, 1) == pytest.approx(3.0 / SQRT2)

    def test_immutable(self):
        m = PersistenceMeasure([(0, 1)])
        with pytest.raises(AttributeError):
            m.births = np.zeros(1)
        with pytest.raises(ValueError):
            m.births[0] = 5.0

    def test_from_pairs(self):
        m = PersistenceMeasure.from_pairs([(0, 1), (0, 2, 2.5)])
        assert np.array_equal(m.masses, [1.0, 2.5])


class TestPers:
    def test_empty_is_zero(self):
        assert pers(EMPTY, 1) == 0.0

    def test_single_point_p2(self):
        # d((0,2), diagonal) = sqrt(2), so pers_2^2 = 2
        m = PersistenceMeasure([(0, 2)])
        assert pers(m, 2) ** 2 == pytest.approx(2.0, rel=1e-12)
        assert pers(m, 2) == pytest.approx(SQRT2, rel=1e-12)

    def test_two_points_p1(self):
        m = PersistenceMeasure([(0, 1), (0, 3)])
        assert pers(m, 1) == pytest.approx(2 * SQRT2, rel=1e-12)

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            pers(EMPTY, 0.5)

    def test_mass_scaling_homogeneity(self):
        rng = Xoshiro256StarStar(1)
        for _ in range(20):
            m = random_measure(rng)
            if m.is_empty:
                continue
            c = 0.5 + 2 * rng.random()
            for p in (1, 1.5, 2):
                assert pers_pow(m.scaled(c), p) == pytest.approx(
                    c * pers_pow(m, p), rel=1e-12
                )

    def test_disjoint_union_additivity(self):
        rng = Xoshiro256StarStar(2)
        for _ in range(20):
            m1 = random_measure(rng)
            m2 = random_measure(rng)
            union = PersistenceMeasure(
                np.concatenate(
                    [
                        np.column_stack([m1.births, m1.deaths]),
                        np.column_stack([m2.births, m2.deaths]),
                    ]
                ),
                np.concatenate([m1.masses, m2.masses]),
            )
            for p in (1, 2):
                assert pers_pow(union, p) == pytest.approx(
                    pers_pow(m1, p) + pers_pow(m2, p), rel=1e-12
                )


class TestPersInfty:
    def test_empty(self):
        assert pers_infty(EMPTY) == 0.0

    def test_max_gap(self):
        m = PersistenceMeasure([(0, 2), (1, 2)], [1.0, 5.0])
        assert pers_infty(m) == pytest.approx(SQRT2, rel=1e-12)

    def test_symmetric_point(self):
        m = PersistenceMeasure([(-3, 3)])
        assert pers_infty(m) == pytest.approx(3 * SQRT2, rel=1e-12)


class TestNormalize:
    def test_gap_two(self):
        # gap of (0, 2*sqrt(2)) is 2, so the unit mass becomes 1/2
        m = normalize(PersistenceMeasure([(0, 2 * SQRT2)]))
        assert m.masses[0] == pytest.approx(0.5, rel=1e-12)

    def test_empty(self):
        assert normalize(EMPTY).is_empty

    def test_small_gap(self):
        m = normalize(PersistenceMeasure([(0, 1)], [3.0]))
        assert m.masses[0] == pytest.approx(3 * SQRT2, rel=1e-12)

    def test_double_normalize(self):
        m = PersistenceMeasure([(0, 1), (2, 5)], [2.0, 3.0])
        twice = normalize(normalize(m))
        assert np.allclose(twice.masses, m.masses / m.gaps**2, rtol=1e-12)

    def test_power_shift_contract(self):
        rng = Xoshiro256StarStar(3)
        for _ in range(20):
            m = random_measure(rng)
            if m.is_empty:
                continue
            for p in (1, 1.5, 2):
                assert pers_pow(normalize(m), p + 1) == pytest.approx(
                    pers_pow(m, p), rel=1e-12
                )


class TestFileIO:
    def test_round_trip(self, tmp_path):
        m = PersistenceMeasure([(0.1, 1.0 / 3.0), (-2.25, 7.5)], [1.0, 2.5e-3])
        path = tmp_path / "m.csv"
        save_measure(m, path)
        assert load_measure(path) == m

    def test_round_trip_random(self, tmp_path):
        rng = Xoshiro256StarStar(4)
        for i in range(10):
            m = random_measure(rng, scale=10.0)
            path = tmp_path / f"m{i}.csv"
            save_measure(m, path)
            assert load_measure(path) == m

    def test_mass_default_and_comments(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("# header\n\n0.0,1.0\n0.0,1.0,2.5\n 1e-1 , 2e0 \n")
        m = load_measure(path)
        assert len(m) == 3
        assert np.array_equal(m.masses, [1.0, 2.5, 1.0])
        assert m.births[2] == 0.1

    def test_degenerate_point_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,1.0\n1.0,1.0\n")
        with pytest.raises(ValidationError, match=r":2:.*strictly less"):
            load_measure(path)

    def test_malformed_line_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,1.0\nnot-a-number,2\n")
        with pytest.raises(ValidationError, match=":2:"):
            load_measure(path)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0\n")
        with pytest.raises(ValidationError, match=":1:"):
            load_measure(path)

    def test_rejects_essential_class(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,inf\n")
        with pytest.raises(ValidationError, match="finite"):
            load_measure(path)

    def test_rejects_bad_mass(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,1.0,0.0\n")
        with pytest.raises(ValidationError, match="mass"):
            load_measure(path)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_measure(tmp_path / "x.bin", format="binary")
