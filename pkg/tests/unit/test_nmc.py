"""Unit tests for the split-state code, tampering laws and the family-distance LP."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.errors import BudgetExceededError, ContextMismatchError, DimensionMismatchError
from src.fpn import GroupCtx
from src.nmc import (
    BOTTOM,
    SAME,
    AffineEvasiveSet,
    Codeword,
    JointDist,
    affine_profile,
    build_family,
    decode,
    decode_indices,
    distance_to,
    encode,
    encode_many,
    family_distance,
    joint_dist,
    lift_coordinatewise,
    nm_metric,
    q_from_D,
    search_affine_evasive,
    solve_lp,
    tamper_experiment,
    total_variation,
)
from src.nmc.codec import _solution_count, _solve
from src.nmc.tampering import TamperPair, affine_table, constant, permutation


def _naive_profile(p: int, S) -> int:
    S = set(S)
    return max(
        len(S & {(a * s + b) % p for s in S})
        for a in range(p)
        for b in range(p)
        if (a, b) != (1, 0)
    )


@pytest.mark.unit
class TestAffineEvasive:
    """Tests for alphabet profiles and the alphabet search."""

    def test_profile_and_witness(self):
        profile, witness = affine_profile(5, (0, 1))
        # x -> 4x + 1 swaps 0 and 1
        assert profile == 2
        assert witness == (4, 1)

    @pytest.mark.parametrize("p,k", [(5, 2), (7, 3), (11, 4)])
    def test_profile_matches_naive(self, p, k):
        for S in itertools.islice(itertools.combinations(range(p), k), 40):
            assert affine_profile(p, S)[0] == _naive_profile(p, S)

    @pytest.mark.parametrize("p,k", [(7, 3), (11, 3), (13, 4)])
    def test_exhaustive_is_optimal(self, p, k):
        found = search_affine_evasive(p, k)
        best = min(_naive_profile(p, S) for S in itertools.combinations(range(p), k))
        assert found.profile == best
        assert found.size == k

    def test_exhaustive_tie_break_is_lexicographic(self):
        # every 2-set in F_3 has profile 2
        assert search_affine_evasive(3, 2).S == (0, 1)

    def test_greedy_never_beats_exhaustive(self, rng):
        exhaustive = search_affine_evasive(13, 4)
        greedy = search_affine_evasive(13, 4, "greedy", rng)
        assert greedy.size == 4
        assert greedy.profile >= exhaustive.profile
        assert affine_profile(13, greedy.S) == (greedy.profile, greedy.witness)

    def test_from_symbols_sorts(self):
        S = AffineEvasiveSet.from_symbols(7, [5, 1, 8])
        assert S.S == (1, 5)
        assert S.message_of(5) == 1
        assert S.message_of(2) is None
        assert S.message_table().tolist() == [-1, 0, -1, -1, -1, 1, -1]

    def test_bad_arguments(self, rng):
        with pytest.raises(ValueError):
            search_affine_evasive(4, 2)
        with pytest.raises(ValueError):
            search_affine_evasive(5, 0)
        with pytest.raises(ValueError):
            search_affine_evasive(5, 2, "greedy")
        with pytest.raises(ValueError):
            search_affine_evasive(5, 2, "annealing", rng)
        with pytest.raises(BudgetExceededError):
            search_affine_evasive(13, 6, budget=100)


@pytest.mark.unit
class TestCodec:
    """Tests for encode and decode."""

    @pytest.fixture
    def alphabet(self):
        return search_affine_evasive(5, 3)

    @pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 1)])
    def test_solver_is_a_bijection(self, p, n):
        """Draws 0..W-1 hit every (L, R) with <L, R> = s exactly once."""
        ctx = GroupCtx(p, n)
        for s in range(p):
            W = _solution_count(ctx, s)
            L, R = _solve(ctx, s, np.arange(W))
            assert np.all((L * R).sum(axis=1) % p == s)
            pairs = set(zip(ctx.encode(L).tolist(), ctx.encode(R).tolist()))
            assert len(pairs) == W
            expected = sum(
                1 for a in range(ctx.order) for b in range(ctx.order) if ctx.inner_indices(a, b) == s
            )
            assert W == expected

    def test_round_trip(self, alphabet, rng):
        ctx = GroupCtx(5, 2)
        for m in range(alphabet.size):
            for _ in range(10):
                assert decode(encode(m, alphabet, ctx, rng), alphabet) == m

    def test_encode_many(self, alphabet, rng):
        ctx = GroupCtx(5, 2)
        L, R = encode_many(2, alphabet, ctx, rng, 500)
        assert np.all(decode_indices(ctx, alphabet, L, R) == 2)

    def test_encode_is_uniform_on_the_fiber(self, rng):
        """Counts over the two solutions of LR = 1 in F_3 stay within 3 standard errors."""
        ctx = GroupCtx(3, 1)
        S = AffineEvasiveSet.from_symbols(3, [0, 1])
        draws = 100_000
        L, R = encode_many(1, S, ctx, rng, draws)
        pairs, counts = np.unique(L * ctx.order + R, return_counts=True)
        assert pairs.tolist() == [1 * 3 + 1, 2 * 3 + 2]
        mean = draws / 2
        std = np.sqrt(draws * 0.5 * 0.5)
        assert np.all(np.abs(counts - mean) < 3 * std)

    def test_encode_covers_the_zero_fiber(self, rng):
        """The five solutions of <L, R> = 0 in F_3^1 are all drawn, roughly equally."""
        ctx = GroupCtx(3, 1)
        S = AffineEvasiveSet.from_symbols(3, [0, 1])
        draws = 50_000
        L, R = encode_many(0, S, ctx, rng, draws)
        pairs, counts = np.unique(L * ctx.order + R, return_counts=True)
        assert pairs.tolist() == [0, 1, 2, 3, 6]
        mean = draws / 5
        std = np.sqrt(draws * 0.2 * 0.8)
        assert np.all(np.abs(counts - mean) < 5 * std)

    def test_bottom(self, alphabet):
        ctx = GroupCtx(5, 2)
        missing = next(s for s in range(5) if s not in alphabet.S)
        c = Codeword(ctx.vec((missing, 0)), ctx.vec((1, 0)))
        assert decode(c, alphabet) == BOTTOM

    def test_context_checks(self, alphabet, rng):
        with pytest.raises(ContextMismatchError):
            encode(0, alphabet, GroupCtx(3, 2), rng)
        with pytest.raises(ContextMismatchError):
            Codeword(GroupCtx(5, 1).zero(), GroupCtx(5, 2).zero())

    def test_message_out_of_range(self, alphabet, rng):
        with pytest.raises(ValueError):
            encode(3, alphabet, GroupCtx(5, 1), rng)


@pytest.mark.unit
class TestTampering:
    """Tests for tampering tables and families."""

    def test_affine_table(self, f3_2):
        table = affine_table(f3_2, np.eye(2, dtype=int), [1, 0])
        assert table[0] == f3_2.vec((1, 0)).index

    def test_lift_coordinatewise(self, f3_2):
        table = lift_coordinatewise(f3_2, [0, 2, 1])
        assert table[f3_2.vec((1, 2)).index] == f3_2.vec((2, 1)).index

    def test_permutation(self, f2_3):
        pair = permutation(f2_3, [1, 0, 2], [0, 1, 2])
        assert pair.f[f2_3.vec((1, 0, 0)).index] == f2_3.vec((0, 1, 0)).index
        with pytest.raises(ValueError):
            permutation(f2_3, [0, 0, 1], [0, 1, 2])

    def test_table_validation(self, f2_3):
        with pytest.raises(DimensionMismatchError):
            TamperPair(f2_3, np.zeros(7, dtype=int), np.zeros(8, dtype=int))
        with pytest.raises(ValueError):
            TamperPair(f2_3, np.full(8, 8), np.zeros(8, dtype=int))

    @pytest.mark.parametrize("family", ["affine", "permutation", "random", "lifted"])
    def test_families_need_rng(self, f2_3, family, rng):
        with pytest.raises(ValueError):
            build_family(f2_3, family)
        assert build_family(f2_3, family, rng).f.shape == (8,)

    def test_unknown_family(self, f2_3, rng):
        with pytest.raises(ValueError):
            build_family(f2_3, "swap", rng)


@pytest.mark.unit
class TestDistributions:
    """Tests for the exact tampering laws."""

    @pytest.mark.parametrize("p,n", [(2, 1), (2, 3), (3, 2), (5, 1)])
    def test_identity_marginal(self, p, n):
        """P(0) = (p + p^n - 1)/p^(n+1); every s != 0 has (p^n - 1)/p^(n+1)."""
        ctx = GroupCtx(p, n)
        P = joint_dist(build_family(ctx, "identity"), ctx)
        marginal = P.marginal_first()
        assert marginal[0] == Fraction(p + p**n - 1, p ** (n + 1))
        assert all(m == Fraction(p**n - 1, p ** (n + 1)) for m in marginal[1:])
        # identity keeps the inner product
        assert all(P.pmf(s, y) == 0 for s in range(p) for y in range(p) if s != y)

    def test_joint_dist_validation(self):
        with pytest.raises(ValueError):
            JointDist(2, np.array([[1, 0], [0, 1]]), 3)
        with pytest.raises(ValueError):
            JointDist(2, np.array([[1, 0, 0], [0, 1, 0]]), 2)

    def test_from_fractions(self):
        P = JointDist.from_fractions(2, [[Fraction(1, 3), 0], [Fraction(1, 6), Fraction(1, 2)]])
        assert P.denominator == 6
        assert P.pmf(1, 0) == Fraction(1, 6)

    def test_identity_experiment(self, f3_2):
        S = search_affine_evasive(3, 2)
        experiment = tamper_experiment(build_family(f3_2, "identity"), S, f3_2)
        assert experiment.distributions == [{0: 1}, {1: 1}]
        assert nm_metric(build_family(f3_2, "identity"), S, f3_2).value == 0

    def test_constant_onto_a_message_scores_one(self):
        ctx = GroupCtx(3, 1)
        S = search_affine_evasive(3, 2)
        assert S.S == (0, 1)
        # <1, 1> = 1 decodes to message 1
        metric = nm_metric(constant(ctx, 1, 1), S, ctx)
        assert metric.value == 1
        assert metric.pair == (0, 1)

    def test_constant_onto_bottom(self):
        ctx = GroupCtx(3, 1)
        S = search_affine_evasive(3, 2)
        # <2, 1> = 2 is outside S
        experiment = tamper_experiment(constant(ctx, 2, 1), S, ctx)
        assert experiment.distributions == [{BOTTOM: 1}, {BOTTOM: 1}]
        assert nm_metric(constant(ctx, 2, 1), S, ctx).value == 0

    def test_total_variation(self):
        P = {0: Fraction(1, 2), SAME: Fraction(1, 2)}
        Q = {0: Fraction(1, 4), BOTTOM: Fraction(3, 4)}
        assert total_variation(P, Q) == Fraction(3, 4)

    def test_pair_budget(self, f2_3, monkeypatch):
        import src.nmc.distributions as distributions

        tiny = distributions.settings.model_copy(update={"pair_budget": 10})
        monkeypatch.setattr(distributions, "settings", tiny)
        with pytest.raises(BudgetExceededError):
            joint_dist(build_family(f2_3, "identity"), f2_3)

    def test_context_mismatch(self, f2_3, f3_2):
        with pytest.raises(ContextMismatchError):
            joint_dist(build_family(f2_3, "identity"), f3_2)


@pytest.mark.unit
class TestSimplex:
    """Tests for the exact two-phase simplex."""

    def test_optimal_with_duals(self):
        one, two = Fraction(1), Fraction(2)
        sol = solve_lp([one, one], [[one, two]], [two])
        assert sol.status == "optimal"
        assert sol.x == [0, 1]
        assert sol.value == 1
        assert sol.duals == [Fraction(1, 2)]

    def test_infeasible(self):
        one = Fraction(1)
        assert solve_lp([one, one], [[one, one]], [Fraction(-1)]).status == "infeasible"

    def test_unbounded(self):
        one = Fraction(1)
        assert solve_lp([-one, Fraction(0)], [[one, -one]], [Fraction(0)]).status == "unbounded"


@pytest.mark.unit
class TestFamilyDistance:
    """Tests for the distance to the (u, au + b) family."""

    def test_identity_base_case(self):
        ctx = GroupCtx(2, 1)
        result = family_distance(joint_dist(build_family(ctx, "identity"), ctx))
        assert result.distance == Fraction(1, 4)
        assert result.certificate.method == "exact"

    @pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
    def test_constant_tampering(self, p, n):
        """Constant tampering sits at (p - 1)/p^(n+1) from the family."""
        ctx = GroupCtx(p, n)
        P = joint_dist(build_family(ctx, "constant"), ctx)
        assert family_distance(P).distance == Fraction(p - 1, p ** (n + 1))

    def test_member_of_family_has_distance_zero(self):
        weights = [[Fraction(0)] * 3 for _ in range(3)]
        for u in range(3):
            weights[u][(2 * u + 1) % 3] = Fraction(1, 3)
        result = family_distance(JointDist.from_fractions(3, weights))
        assert result.distance == 0
        assert (2, 1) in result.support()

    def test_certificate(self, f3_2, rng):
        P = joint_dist(build_family(f3_2, "random", rng), f3_2)
        result = family_distance(P, "exact")
        cert = result.certificate
        assert cert.dual_feasible
        assert cert.gap == 0
        assert cert.primal == result.distance
        assert sum(sum(row) for row in result.D) == 1
        assert distance_to(P, result.D) == result.distance

    def test_highs_agrees_with_exact(self, f3_2, rng):
        for _ in range(3):
            P = joint_dist(build_family(f3_2, "affine", rng), f3_2)
            exact = family_distance(P, "exact")
            highs = family_distance(P, "highs")
            assert highs.distance == pytest.approx(float(exact.distance), abs=1e-7)
            assert highs.certificate.dual_feasible

    def test_q_from_uniform_D(self):
        D = [[Fraction(1, 9)] * 3 for _ in range(3)]
        assert q_from_D(3, D) == [[Fraction(1, 9)] * 3 for _ in range(3)]

    def test_unknown_method(self, f2_3):
        P = joint_dist(build_family(f2_3, "identity"), f2_3)
        with pytest.raises(ValueError):
            family_distance(P, "ellipsoid")
