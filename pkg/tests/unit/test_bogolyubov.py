"""Unit tests for shifting sets, almost-periodicity, spectral subspaces and the pipeline."""

from fractions import Fraction

import numpy as np
import pytest

from src.bogolyubov import (
    brz_pipeline,
    croot_sisask_trial,
    freiman_reduced_pipeline,
    gentle_shift_set,
    lemma_thespace_check,
    max_subspace_in,
    quasi_pfr,
    shift_closure_check,
    shift_counts,
    shift_statistics,
    shift_statistics_fourier,
    walk_counts,
)
from src.bogolyubov.shifting import difference_counts
from src.errors import BudgetExceededError, EmptySetError
from src.fourier import indicator
from src.fpn import FpSet, Subspace
from src.setops import difference_set, iterated
from src.utils.rng import make_rng


def _random_set(ctx, rng, density=0.4) -> FpSet:
    A = FpSet(ctx, rng.random(ctx.order) < density)
    return A if not A.is_empty() else FpSet.from_indices(ctx, [0])


@pytest.mark.unit
class TestShiftStatistics:
    """Tests for Q(x) = E_{a,b} 1_{A-A}(a - b - x)."""

    def test_difference_counts_sum(self, corner):
        r = difference_counts(corner)
        assert r.sum() == 9
        assert r[0] == 3

    def test_subspace_is_its_own_gentle_set(self, plane):
        A = plane.enumerate()
        assert gentle_shift_set(A, 0.9) == A
        assert gentle_shift_set(A, 1) == A

    def test_coset_gentle_set_is_the_subspace(self, plane):
        assert gentle_shift_set(plane.enumerate().translate(4), 0.99) == plane.enumerate()

    def test_zero_is_always_gentle(self, f3_3, rng):
        """Q(0) = 1 since a - b is always in A - A."""
        A = _random_set(f3_3, rng)
        assert shift_statistics(A)[0] == pytest.approx(1.0)
        assert gentle_shift_set(A, 1).contains(0)

    def test_exact_threshold_comparison(self, corner):
        counts = shift_counts(corner)
        thr = Fraction(int(counts[4]), 9)
        X = gentle_shift_set(corner, thr)
        assert X.contains(4)

    def test_fourier_cross_check(self, f3_3, rng):
        A = _random_set(f3_3, rng)
        assert np.allclose(shift_statistics(A), shift_statistics_fourier(A))

    def test_fft_path_matches_direct(self, f3_3, rng, monkeypatch):
        import src.bogolyubov.shifting as shifting

        A = _random_set(f3_3, rng)
        direct = shift_counts(A)
        tiny = shifting.settings.model_copy(update={"pair_budget": 1})
        monkeypatch.setattr(shifting, "settings", tiny)
        assert np.array_equal(shift_counts(A), direct)

    def test_bad_threshold(self, corner):
        with pytest.raises(ValueError):
            gentle_shift_set(corner, 1.5)

    def test_empty(self, f2_3):
        with pytest.raises(EmptySetError):
            shift_counts(FpSet.empty(f2_3))


@pytest.mark.unit
class TestShiftClosure:
    """Tests for min over tX of Q."""

    def test_subspace_holds_for_every_t(self, plane):
        A = plane.enumerate()
        report = shift_closure_check(A, A, 3, 0.9)
        assert report.per_t_min == {1: 1, 2: 1, 3: 1}
        assert report.held_up_to == 3
        assert report.contains_zero

    def test_outside_shift_breaks_closure(self, plane):
        A = plane.enumerate()
        X = FpSet.from_indices(A.ctx, [0, 4])
        report = shift_closure_check(A, X, 2, 0.9)
        assert report.per_t_min[1] == 0
        assert report.held_up_to == 0
        assert report.held == {1: False, 2: False}

    def test_default_threshold(self, plane):
        report = shift_closure_check(plane.enumerate(), plane.enumerate(), 1)
        assert report.threshold == Fraction("0.9")

    def test_bad_arguments(self, plane, f2_3):
        with pytest.raises(ValueError):
            shift_closure_check(plane.enumerate(), plane.enumerate(), 0)
        with pytest.raises(EmptySetError):
            shift_closure_check(plane.enumerate(), FpSet.empty(f2_3), 1)


@pytest.mark.unit
class TestCrootSisask:
    """Tests for sampled almost-periods of rho_A * f."""

    def test_subspace_is_exactly_periodic(self, plane, rng):
        A = plane.enumerate()
        f = indicator(difference_set(A, A))
        report = croot_sisask_trial(A, f, q=2.0, eps=0.25, trials=5, rng=rng)
        assert report.ell == 32
        assert report.success_fraction == 1.0
        assert max(report.deviations) == pytest.approx(0.0)
        assert report.shift_set == A
        assert report.verified

    def test_reproducible(self, f3_2):
        A = FpSet.from_indices(f3_2, [0, 1, 4, 5])
        f = indicator(difference_set(A, A))
        first = croot_sisask_trial(A, f, 2.0, 0.5, 10, make_rng(7))
        second = croot_sisask_trial(A, f, 2.0, 0.5, 10, make_rng(7))
        assert first.deviations == second.deviations
        assert first.shift_set == second.shift_set

    def test_shift_set_contains_zero(self, f3_3, rng):
        A = _random_set(f3_3, rng)
        f = indicator(difference_set(A, A))
        report = croot_sisask_trial(A, f, 2.0, 0.5, 8, rng)
        assert report.shift_set.contains(0)
        assert 0 <= report.success_fraction <= 1

    def test_rejects_unbounded_f(self, corner, rng):
        from src.fourier import constant

        with pytest.raises(ValueError):
            croot_sisask_trial(corner, constant(corner.ctx, 2.0), 2.0, 0.5, 3, rng)

    def test_rejects_bad_parameters(self, corner, rng):
        f = indicator(corner)
        with pytest.raises(ValueError):
            croot_sisask_trial(corner, f, 0.5, 0.5, 3, rng)
        with pytest.raises(ValueError):
            croot_sisask_trial(corner, f, 2.0, 0.5, 0, rng)

    def test_sample_budget(self, corner, rng):
        """l = 8 samples over 3 trials do not fit a budget of 20."""
        f = indicator(corner)
        with pytest.raises(BudgetExceededError):
            croot_sisask_trial(corner, f, 2.0, 0.5, 3, rng, budget=20)
        assert croot_sisask_trial(corner, f, 2.0, 0.5, 3, rng, budget=24).ell == 8


@pytest.mark.unit
class TestSpectralSubspace:
    """Tests for the V-shift comparison and the brute-force oracle."""

    def test_walk_counts(self, corner):
        mu = walk_counts(corner, 2)
        assert mu.sum() == 9
        # 0 = 0 + 0 = e1 + e1 = e2 + e2
        assert mu[0] == 3

    def test_subspace_case_is_tight(self, plane):
        A = plane.enumerate()
        report = lemma_thespace_check(A, A, 1)
        assert report.dim_V == 2
        assert report.first == 1
        assert report.shifted == 1
        assert report.bound == Fraction(8, 2 * 4)
        assert report.holds

    @pytest.mark.parametrize("t", [1, 2, 3])
    def test_random_sets(self, f3_2, rng, t):
        for _ in range(5):
            A, X = _random_set(f3_2, rng), _random_set(f3_2, rng)
            report = lemma_thespace_check(A, X, t)
            assert report.holds
            assert report.fourier_residual < 1e-9

    def test_max_subspace_in(self, f2_3, plane):
        S = plane.enumerate() | FpSet.from_indices(f2_3, [4])
        assert max_subspace_in(S) == plane

    def test_max_subspace_of_zero(self, f2_3):
        assert max_subspace_in(FpSet.from_indices(f2_3, [0])).dim == 0

    def test_max_subspace_needs_zero(self, corner):
        with pytest.raises(ValueError):
            max_subspace_in(corner.translate(4))

    def test_max_subspace_budget(self, f2_3, plane):
        """Seven planes in F_2^3 exceed a budget of 6."""
        S = plane.enumerate() | FpSet.from_indices(f2_3, [4])
        with pytest.raises(BudgetExceededError):
            max_subspace_in(S, budget=6)
        assert max_subspace_in(S, budget=7) == plane


@pytest.mark.unit
class TestPipeline:
    """Tests for subspaces found inside 2A - 2A."""

    def test_coset_recovers_its_subspace(self, plane):
        result = brz_pipeline(plane.enumerate().translate(4))
        assert result.V == plane
        assert result.method == "pipeline"
        assert result.size_ratio == 1
        assert result.K == 1
        assert result.attempts[0].contained

    def test_result_always_contained(self, f3_3, rng):
        for _ in range(5):
            A = _random_set(f3_3, rng, 0.5)
            result = brz_pipeline(A)
            S = iterated(A, 2, 2)
            assert S.mask[result.V.element_indices()].all()
            assert result.method in ("pipeline", "brute_force")

    def test_oracle_bounds_pipeline(self, f2_4, rng):
        """No route can return a subspace larger than the brute-force maximum."""
        for _ in range(5):
            A = _random_set(f2_4, rng, 0.3)
            best = max_subspace_in(iterated(A, 2, 2))
            assert brz_pipeline(A).V.dim <= best.dim

    def test_empty(self, f2_3):
        with pytest.raises(EmptySetError):
            brz_pipeline(FpSet.empty(f2_3))

    def test_quasi_pfr_on_coset(self, plane):
        A = plane.enumerate().translate(4)
        result = quasi_pfr(A)
        assert result.B == A
        assert result.R == 1
        assert result.g == 4
        assert result.piece_ratio == 1
        assert result.packing_holds

    def test_quasi_pfr_piece_lies_in_one_coset(self, f3_3, rng):
        A = _random_set(f3_3, rng, 0.5)
        result = quasi_pfr(A)
        assert result.B <= A
        assert result.sumset_size == result.R * result.V.size
        reps = result.V.reduce(f3_3.digits[result.B.indices()])
        assert len({tuple(r) for r in reps.tolist()}) == 1

    def test_freiman_lift(self, plane):
        A = plane.enumerate().translate(4)
        result = freiman_reduced_pipeline(A, order=4)
        assert result.method == "freiman_lift"
        assert result.V == plane

    def test_freiman_lift_needs_order_four(self, plane):
        with pytest.raises(ValueError):
            freiman_reduced_pipeline(plane.enumerate(), order=3)

    def test_freiman_lift_respects_budget(self, plane):
        """The kernel scan over planes of F_2^3 is bounded by the budget."""
        with pytest.raises(BudgetExceededError):
            freiman_reduced_pipeline(plane.enumerate().translate(4), order=4, budget=6)

    def test_lifted_subspace_is_contained(self, f2_3):
        A = FpSet.from_indices(f2_3, [0, 1, 2, 7])
        result = freiman_reduced_pipeline(A, order=4)
        S = iterated(A, 2, 2)
        assert S.mask[result.V.element_indices()].all()
        assert isinstance(result.V, Subspace)
