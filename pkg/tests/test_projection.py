import math

import pytest
from scipy.integrate import quad

from slicedfg import (
    PersistenceMeasure,
    PlanePoint,
    events,
    fg1d,
    normalize,
    project_cont,
    project_measure,
    project_orth,
)
from slicedfg.projection import event_times, tent_crossings
from slicedfg.rng import Xoshiro256StarStar

SQRT2 = math.sqrt(2.0)


class TestProjectOrth:
    def test_inside_window(self):
        assert project_orth(PlanePoint(0, 2), 1.0) == pytest.approx(SQRT2)

    def test_outside_window(self):
        assert project_orth(PlanePoint(0, 2), 3.0) == 0.0

    def test_boundary_is_active(self):
        # the window is closed: t = birth still projects onto the geodesic
        assert project_orth(PlanePoint(0, 2), 0.0) == pytest.approx(SQRT2)
        assert project_orth(PlanePoint(0, 2), 2.0) == pytest.approx(SQRT2)


class TestProjectCont:
    def test_peak_at_midpoint(self):
        assert project_cont(PlanePoint(0, 2), 1.0) == pytest.approx(SQRT2)

    def test_vanishes_at_entry(self):
        assert project_cont(PlanePoint(0, 2), 0.0) == 0.0

    def test_halfway_up(self):
        assert project_cont(PlanePoint(0, 2), 0.5) == pytest.approx(SQRT2 * 0.5)

    def test_zero_outside(self):
        rng = Xoshiro256StarStar(5)
        for _ in range(50):
            z = PlanePoint(rng.random(), 1.0 + rng.random())
            t = z.death + rng.random() if rng.random() < 0.5 else z.birth - rng.random()
            assert project_cont(z, t) == 0.0
            assert project_orth(z, t) == 0.0

    def test_lipschitz(self):
        rng = Xoshiro256StarStar(6)
        for _ in range(200):
            z = PlanePoint(2 * rng.random() - 1, 1.0 + 2 * rng.random())
            t1 = 4 * rng.random() - 2
            t2 = 4 * rng.random() - 2
            lhs = abs(project_cont(z, t1) - project_cont(z, t2))
            assert lhs <= SQRT2 * abs(t1 - t2) + 1e-12


class TestProjectionIntegrals:
    @pytest.mark.parametrize("p", [1, 1.5, 2])
    def test_orth_integral(self, p):
        z = PlanePoint(-0.3, 1.7)
        val, _ = quad(lambda t: project_orth(z, t) ** p, z.birth, z.death)
        assert val == pytest.approx(SQRT2 * z.gap ** (p + 1), rel=1e-8)

    @pytest.mark.parametrize("p", [1, 1.5, 2])
    def test_cont_integral(self, p):
        z = PlanePoint(-0.3, 1.7)
        val, _ = quad(
            lambda t: project_cont(z, t) ** p, z.birth, z.death, points=[z.midpoint]
        )
        assert val == pytest.approx(SQRT2 * z.gap ** (p + 1) / (p + 1), rel=1e-8)


class TestEvents:
    def test_orth_single_point(self):
        ev = events(PersistenceMeasure([(0, 2)]), PersistenceMeasure(), "orth")
        assert ev.times == [0.0, 2.0]

    def test_orth_union(self):
        ev = events(PersistenceMeasure([(0, 2)]), PersistenceMeasure([(1, 3)]), "orth")
        assert ev.times == [0.0, 1.0, 2.0, 3.0]

    def test_cont_includes_midpoints_and_crossings(self):
        # tents of (0,2) and (0,4) coincide on [0,1] and diverge after;
        # the isolated crossing solver reports t = 1, which is also the first
        # tent's peak, and both midpoints 1 and 2 are events
        a = PersistenceMeasure([(0, 2)])
        b = PersistenceMeasure([(0, 4)])
        ev = events(a, b, "cont")
        assert ev.times == [0.0, 1.0, 2.0, 4.0]
        by_time = {e.time: e for e in ev}
        assert ((0, 0), (1, 0)) in by_time[1.0].crossings
        assert (0, 0) in by_time[1.0].peaks
        assert (1, 0) in by_time[2.0].peaks

    def test_every_point_contributes(self):
        rng = Xoshiro256StarStar(7)
        a = PersistenceMeasure([(rng.random(), 1 + rng.random()) for _ in range(5)])
        b = PersistenceMeasure([(rng.random(), 1 + rng.random()) for _ in range(5)])
        orth_times = set(events(a, b, "orth").times)
        for m in (a, b):
            for b_, d_ in zip(m.births, m.deaths):
                assert b_ in orth_times and d_ in orth_times
        cont_times = set(events(a, b, "cont").times)
        for m in (a, b):
            for mid in m.midpoints:
                assert any(abs(t - mid) < 1e-9 for t in cont_times)

    def test_empty_inputs(self):
        assert len(events(PersistenceMeasure(), PersistenceMeasure(), "cont")) == 0

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            events(PersistenceMeasure(), PersistenceMeasure(), "diag")


class TestTentCrossings:
    def test_at_most_two(self):
        rng = Xoshiro256StarStar(8)
        for _ in range(100):
            a = PlanePoint(rng.random(), 1 + rng.random())
            b = PlanePoint(rng.random(), 1 + rng.random())
            ts = tent_crossings(a, b)
            assert len(ts) <= 2
            for t in ts:
                assert project_cont(a, t) == pytest.approx(project_cont(b, t), abs=1e-12)

    def test_parallel_edges_no_isolated_crossing(self):
        # shared birth: the rising edges coincide on [0,1] (no isolated
        # event); only the falling-a / rising-b meeting at t=1 is reported
        a = PlanePoint(0, 2)
        b = PlanePoint(0, 3)
        assert tent_crossings(a, b) == [1.0]


class TestPiecewiseConstancy:
    def test_orth_cost_constant_between_events(self):
        rng = Xoshiro256StarStar(9)
        a = PersistenceMeasure([(rng.random(), 1 + rng.random()) for _ in range(6)])
        b = PersistenceMeasure([(rng.random(), 1 + rng.random()) for _ in range(6)])
        na, nb = normalize(a), normalize(b)
        times = event_times(a, b, "orth")
        for t0, t1 in zip(times, times[1:]):
            u = t0 + 0.25 * (t1 - t0)
            v = t0 + 0.75 * (t1 - t0)
            cu = fg1d(project_measure(na, u), project_measure(nb, u), 2)
            cv = fg1d(project_measure(na, v), project_measure(nb, v), 2)
            assert cu == pytest.approx(cv, rel=1e-12, abs=1e-15)


class TestProjectMeasure:
    def test_drops_diagonal_mass(self):
        m = PersistenceMeasure([(0, 2), (5, 6)])
        proj = project_measure(m, 1.0, "orth")
        assert len(proj) == 1
        assert proj.values[0] == pytest.approx(SQRT2)

    def test_cont_values(self):
        m = PersistenceMeasure([(0, 2)], [3.0])
        proj = project_measure(m, 0.5, "cont")
        assert proj.values[0] == pytest.approx(SQRT2 * 0.5)
        assert proj.masses[0] == 3.0
