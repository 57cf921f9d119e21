"""EDF machinery and process-distance tests against brute-force oracles."""

import numpy as np
import pytest
from scipy import stats

from residboot.distributions import Normal
from residboot.empirical import (
    Edf,
    ProcessDistance,
    SmoothedEdf,
    _merge_core,
    _merge_core_py,
    batch_edf_distances,
    batch_sign_flip_distances,
    cm_distance,
    ks_distance,
    ls_stat,
    mad_stat,
)
from residboot.kernels import GAUSSIAN


class TestEdf:
    def test_eval_counts(self):
        e = Edf([-1.0, 0.0, 2.0])
        assert e(0.0) == pytest.approx(2.0 / 3.0, abs=0)
        assert e(-1.5) == 0.0
        assert e(2.0) == 1.0
        assert e(1.99) == pytest.approx(2.0 / 3.0, abs=0)

    def test_ties_stack(self):
        e = Edf([1.0, 1.0, 2.0, 2.0])
        assert e(1.0) == 0.5
        assert e.left(1.0) == 0.0

    def test_quantile_order_statistics(self):
        e = Edf([3.0, 1.0, 2.0])
        assert e.quantile(1.0) == 3.0
        for u in (1e-9, 0.1, 1.0 / 3.0):
            assert e.quantile(u) == 1.0
        assert e.quantile(0.34) == 2.0

    def test_quantile_domain(self):
        e = Edf([1.0])
        for bad in (0.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                e.quantile(bad)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Edf([])

    def test_monotone_on_grid(self):
        e = Edf(np.random.default_rng(0).normal(size=37))
        grid = np.linspace(-4.0, 4.0, 10**4)
        assert np.all(np.diff(e(grid)) >= 0.0)

    def test_inverse_transform_equals_resampling(self):
        # chi-square goodness of fit over the atoms, 1e5 draws
        atoms = np.random.default_rng(1).normal(size=10)
        e = Edf(atoms)
        draws = e.sample(np.random.default_rng(2), 10**5)
        counts = np.array([(draws == a).sum() for a in sorted(atoms)])
        assert counts.sum() == 10**5
        assert stats.chisquare(counts).pvalue > 1e-3


class TestSmoothedEdf:
    def test_single_atom_symmetry(self):
        f = SmoothedEdf([0.0], GAUSSIAN, 1.0)
        assert f(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_converges_to_edf_as_s_vanishes(self):
        rng = np.random.default_rng(3)
        sample = rng.normal(size=60)
        e = Edf(sample)
        grid = rng.normal(size=200) * 1.5  # continuity points, off the atoms a.s.
        sups = []
        for s in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
            f = SmoothedEdf(sample, GAUSSIAN, s)
            sups.append(np.max(np.abs(f(grid) - e(grid))))
        assert all(a >= b for a, b in zip(sups, sups[1:]))
        assert sups[-1] < 1e-8

    def test_quantile_round_trip(self):
        f = SmoothedEdf(np.random.default_rng(4).normal(size=25), GAUSSIAN, 0.3)
        ys = np.linspace(-1.5, 1.5, 11)
        back = f.quantile(f(ys))
        assert np.max(np.abs(back - ys)) < 1e-8

    def test_quantile_domain(self):
        f = SmoothedEdf([0.0], GAUSSIAN, 1.0)
        for bad in (0.0, 1.0):
            with pytest.raises(ValueError):
                f.quantile(bad)

    def test_monotone_limits(self):
        f = SmoothedEdf(np.random.default_rng(5).normal(size=40), GAUSSIAN, 0.2)
        grid = np.linspace(-8.0, 8.0, 10**4)
        vals = f(grid)
        assert np.all(np.diff(vals) >= 0.0)
        assert vals[0] < 1e-8 and vals[-1] > 1 - 1e-8

    def test_pdf_is_cdf_derivative(self):
        f = SmoothedEdf(np.random.default_rng(6).normal(size=30), GAUSSIAN, 0.4)
        ys = np.linspace(-2.0, 2.0, 9)
        eps = 1e-6
        numeric = (f(ys + eps) - f(ys - eps)) / (2 * eps)
        assert np.max(np.abs(numeric - f.pdf(ys))) < 1e-6

    def test_tabulate_accuracy(self):
        sample = np.random.default_rng(7).normal(size=80) * 0.25
        f = SmoothedEdf(sample, GAUSSIAN, 0.5 * 80 ** (-0.25))
        tab = f.tabulate()
        queries = np.random.default_rng(8).normal(size=500) * 0.4
        assert np.max(np.abs(tab(queries) - f(queries))) < 1e-8

    def test_smoothing_gap_vanishes_with_bandwidth(self):
        # sup_y |F_s - F_0| decreases through s in {0.5, 0.1, 0.01}
        sample = np.random.default_rng(9).normal(size=200) * 0.25
        e = Edf(sample)
        sups = [ks_distance(e, SmoothedEdf(sample, GAUSSIAN, s)) for s in (0.5, 0.1, 0.01)]
        assert sups[0] > sups[1] > sups[2]


class TestKsDistance:
    def test_identical(self):
        e = Edf([1.0, 2.0, 5.0])
        assert ks_distance(e, e) == 0.0

    def test_sign_flip_disjoint_supports(self):
        assert ks_distance(Edf([1.0, 2.0]), Edf([-2.0, -1.0])) == 1.0

    def test_symmetric_sample(self):
        e = Edf([-1.0, 1.0])
        assert ks_distance(e, Edf([-1.0, 1.0])) == 0.0

    def test_scaling_flag(self):
        a, b = Edf([1.0, 2.0]), Edf([-2.0, -1.0])
        assert ks_distance(a, b, scale_sqrt_n=True) == pytest.approx(np.sqrt(2.0), abs=1e-15)

    def test_exact_equals_brute_force_grid(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            a, b = Edf(rng.normal(size=25)), Edf(rng.normal(size=25))
            exact = ks_distance(a, b)
            grid = np.linspace(-6.0, 6.0, 10**6)
            scanned = np.max(np.abs(a(grid) - b(grid)))
            assert exact >= scanned - 1e-15
            assert exact - scanned < 1e-9

    def test_step_vs_smooth_both_sides(self):
        rng = np.random.default_rng(11)
        sample = rng.normal(size=30)
        e, f = Edf(sample), SmoothedEdf(sample, GAUSSIAN, 0.3)
        exact = ks_distance(e, f)
        grid = np.linspace(-6.0, 6.0, 10**6)
        scanned = np.max(np.abs(e(grid) - f(grid)))
        assert exact >= scanned - 1e-12
        # grid undershoot is bounded by the smooth CDF's slope times the spacing
        spacing = grid[1] - grid[0]
        max_slope = np.max(f.pdf(np.linspace(-4.0, 4.0, 401)))
        assert exact - scanned <= max_slope * spacing

    def test_smooth_vs_smooth_grid(self):
        rng = np.random.default_rng(12)
        f = SmoothedEdf(rng.normal(size=30), GAUSSIAN, 0.2)
        g = SmoothedEdf(rng.normal(size=30) + 0.5, GAUSSIAN, 0.2)
        val = ks_distance(f, g)
        grid = np.linspace(-8.0, 8.0, 10**5)
        assert val == pytest.approx(np.max(np.abs(f(grid) - g(grid))), abs=1e-4)

    def test_needs_structure(self):
        with pytest.raises(TypeError):
            ks_distance(lambda y: y, lambda y: y)


class TestCmDistance:
    def test_identical(self):
        e = Edf([0.0, 1.0])
        assert cm_distance(e, e, weight=e) == 0.0

    def test_hand_enumerated_example(self):
        a, b = Edf([1.0, 2.0]), Edf([-2.0, -1.0])
        val = cm_distance(a, b, weight=a, scale_n=True)
        assert val == pytest.approx(0.25, abs=1e-15)

    def test_translation_invariance(self):
        rng = np.random.default_rng(13)
        x, y = rng.normal(size=12), rng.normal(size=12)
        v1 = cm_distance(Edf(x), Edf(y), weight=Edf(y), scale_n=True)
        v2 = cm_distance(Edf(x + 7.0), Edf(y + 7.0), weight=Edf(y + 7.0), scale_n=True)
        assert v1 == pytest.approx(v2, abs=1e-12)

    def test_against_monte_carlo_integral(self):
        rng = np.random.default_rng(14)
        a, b = Edf(rng.normal(size=20)), Edf(rng.normal(size=20))
        exact = cm_distance(a, b, weight=b)
        draws = b.sample(np.random.default_rng(15), 10**6)
        sq = (a(draws) - b(draws)) ** 2
        mc, se = sq.mean(), sq.std(ddof=1) / 1e3
        assert abs(exact - mc) < 4 * se

    def test_weight_must_be_step(self):
        e = Edf([0.0, 1.0])
        with pytest.raises(TypeError):
            cm_distance(e, e, weight=SmoothedEdf([0.0], GAUSSIAN, 1.0))


class TestLsMad:
    def test_zero_when_equal(self):
        e = Edf([0.0, 1.0, 2.0])
        assert ls_stat(e, e, [0.0, 1.5]) == 0.0
        assert mad_stat(e, e, [0.0, 1.5]) == 0.0

    def test_two_point_example(self):
        fhat = lambda pts: np.array([0.3, 0.8])
        fref = lambda pts: np.array([0.2, 0.5])
        assert ls_stat(fhat, fref, [5.0, 6.0]) == pytest.approx(0.10, abs=1e-15)
        assert mad_stat(fhat, fref, [5.0, 6.0]) == pytest.approx(0.4, abs=1e-15)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(16)
        e = Edf(rng.normal(size=15))
        f = Normal(0.0, 1.0).cdf
        pts = rng.normal(size=15)
        perm = rng.permutation(pts)
        assert ls_stat(e, f, pts) == pytest.approx(ls_stat(e, f, perm), abs=1e-14)

    def test_empty_points_rejected(self):
        e = Edf([0.0])
        with pytest.raises(ValueError):
            ls_stat(e, e, [])
        with pytest.raises(ValueError):
            mad_stat(e, e, [])

    def test_even_median_midpoint(self):
        fhat = lambda pts: np.array([0.0, 0.1, 0.2, 0.6])
        fref = lambda pts: np.zeros(4)
        assert mad_stat(fhat, fref, [1.0, 2.0, 3.0, 4.0]) == pytest.approx(4 * 0.15, abs=1e-15)


class TestBatchDistances:
    def test_matches_object_api(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            n = int(rng.integers(2, 50))
            a, b = rng.normal(size=n), rng.normal(size=n)
            sup, cm = batch_edf_distances(a[None], b[None], weight_on="b")
            A, B = Edf(a), Edf(b)
            assert sup[0] == pytest.approx(ks_distance(A, B), abs=1e-12)
            assert cm[0] == pytest.approx(cm_distance(A, B, weight=B, scale_n=True), abs=1e-12)
            sup_a, cm_a = batch_edf_distances(a[None], b[None], weight_on="a")
            assert sup_a[0] == sup[0]
            assert cm_a[0] == pytest.approx(cm_distance(A, B, weight=A, scale_n=True), abs=1e-12)

    def test_exact_under_ties(self):
        a = np.array([0.0, 1.0, 1.0, 2.0])
        b = np.array([1.0, 1.0, 3.0, 3.0])
        sup, cm = batch_edf_distances(a[None], b[None], weight_on="b")
        A, B = Edf(a), Edf(b)
        assert sup[0] == pytest.approx(ks_distance(A, B), abs=1e-15)
        assert cm[0] == pytest.approx(cm_distance(A, B, weight=B, scale_n=True), abs=1e-15)

    def test_sign_flip_shortcut(self):
        rng = np.random.default_rng(18)
        res = rng.normal(size=(8, 31))
        s1, c1 = batch_sign_flip_distances(res)
        s2, c2 = batch_edf_distances(res, -res, weight_on="a")
        assert np.allclose(s1, s2, atol=1e-15)
        assert np.allclose(c1, c2, atol=1e-15)

    def test_numba_core_equals_python_core(self):
        rng = np.random.default_rng(19)
        sa = np.sort(rng.normal(size=(6, 17)), axis=1)
        sb = np.sort(rng.normal(size=(6, 17)), axis=1)
        for got, want in zip(_merge_core(sa, sb), _merge_core_py(sa, sb)):
            assert np.allclose(got, want, atol=1e-15)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            batch_edf_distances(np.zeros((2, 3)), np.zeros((2, 4)))


class TestProcessDistance:
    def test_fields(self):
        d = ProcessDistance("ks", 0.3, scaled=True)
        assert d.kind == "ks" and d.scaled

    def test_nonnegative(self):
        with pytest.raises(ValueError):
            ProcessDistance("cm", -0.1)
