"""Exact distributions of the tampering experiment.

All weights are integer counts over a common denominator, so every
probability here is an exact rational.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError, ContextMismatchError
from src.fpn.group import GroupCtx
from src.nmc.evasive import AffineEvasiveSet
from src.nmc.tampering import TamperPair

logger = logging.getLogger(__name__)

# Outcome code for "decoded to the message that was encoded"
SAME = -2

# Left halves processed per block
L_BLOCK = 256


@dataclass(frozen=True, eq=False)
class JointDist:
    """pmf(s, y) = counts[s, y] / denominator over F_p x F_p."""

    p: int
    counts: np.ndarray
    denominator: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.shape != (self.p, self.p):
            raise ValueError(f"counts must have shape ({self.p}, {self.p}), got {counts.shape}")
        if counts.min() < 0:
            raise ValueError("counts must be non-negative")
        if int(counts.sum()) != self.denominator:
            raise ValueError(f"counts sum to {int(counts.sum())}, expected {self.denominator}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_fractions(cls, p: int, weights) -> "JointDist":
        """From a p x p table of rationals summing to 1."""
        w = [[Fraction(v) for v in row] for row in weights]
        denominator = lcm(*(v.denominator for row in w for v in row))
        counts = [[int(v * denominator) for v in row] for row in w]
        return cls(p, np.array(counts, dtype=np.int64), denominator)

    def pmf(self, s: int, y: int) -> Fraction:
        return Fraction(int(self.counts[s, y]), self.denominator)

    def weights(self) -> list[list[Fraction]]:
        return [[self.pmf(s, y) for y in range(self.p)] for s in range(self.p)]

    def as_float(self) -> np.ndarray:
        return self.counts / self.denominator

    def marginal_first(self) -> list[Fraction]:
        return [Fraction(int(v), self.denominator) for v in self.counts.sum(axis=1)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointDist):
            return NotImplemented
        return self.p == other.p and self.weights() == other.weights()


def _check_pair_budget(ctx: GroupCtx) -> None:
    pairs = ctx.order**2
    if pairs > settings.pair_budget:
        raise BudgetExceededError(f"(L, R) pairs in {ctx}", pairs, settings.pair_budget)


def joint_counts(fp: TamperPair) -> np.ndarray:
    """counts[s, y] = #{(L, R) : <L, R> = s, <f(L), g(R)> = y}."""
    ctx = fp.ctx
    _check_pair_budget(ctx)
    p = ctx.p
    digits = ctx.digits
    g_digits = digits[fp.g]
    counts = np.zeros(p * p, dtype=np.int64)
    for start in range(0, ctx.order, L_BLOCK):
        Ls = np.arange(start, min(start + L_BLOCK, ctx.order))
        s = (digits[Ls] @ digits.T) % p
        y = (digits[fp.f[Ls]] @ g_digits.T) % p
        counts += np.bincount((s * p + y).ravel(), minlength=p * p)
    return counts.reshape(p, p)


def joint_dist(fp: TamperPair, ctx: GroupCtx) -> JointDist:
    """Exact law of (<L, R>, <f(L), g(R)>) for uniform (L, R)."""
    if fp.ctx != ctx:
        raise ContextMismatchError(f"{fp.ctx} vs {ctx}")
    return JointDist(ctx.p, joint_counts(fp), ctx.order**2)


@dataclass(frozen=True)
class TamperExperiment:
    """For each message m, the law of decode(f(L), g(R)) given encode(m).

    Attributes:
        distributions: distributions[m] maps outcome (message index or BOTTOM)
            to its exact probability; zero-probability outcomes are omitted
    """

    S: AffineEvasiveSet
    distributions: list[dict[int, Fraction]]


def _outcomes(counts_row: np.ndarray, S: AffineEvasiveSet) -> dict[int, Fraction]:
    table = S.message_table()
    total = int(counts_row.sum())
    dist: dict[int, int] = {}
    for y in range(S.p):
        c = int(counts_row[y])
        if c:
            dist[int(table[y])] = dist.get(int(table[y]), 0) + c
    return {o: Fraction(c, total) for o, c in sorted(dist.items())}


def tamper_experiment(fp: TamperPair, S: AffineEvasiveSet, ctx: GroupCtx) -> TamperExperiment:
    """Condition the joint law on <L, R> = S[m] for every message m.

    Encoding m is uniform on the fiber {<L, R> = S[m]}, so conditioning the
    uniform joint law on its first coordinate gives the experiment exactly.
    """
    if S.p != ctx.p:
        raise ContextMismatchError(f"alphabet over F_{S.p} used with {ctx}")
    counts = joint_dist(fp, ctx).counts
    return TamperExperiment(S=S, distributions=[_outcomes(counts[s], S) for s in S.S])


@dataclass(frozen=True)
class NmMetric:
    """max over m != m' of TV(D_m, D_m') after relabelling m, m' as SAME."""

    value: Fraction
    pair: tuple[int, int] | None


def _with_same(dist: dict[int, Fraction], m: int) -> dict[int, Fraction]:
    return {(SAME if o == m else o): w for o, w in dist.items()}


def total_variation(P: dict[int, Fraction], Q: dict[int, Fraction]) -> Fraction:
    keys = set(P) | set(Q)
    return sum((abs(P.get(k, Fraction(0)) - Q.get(k, Fraction(0))) for k in keys), Fraction(0)) / 2


def nm_metric(fp: TamperPair, S: AffineEvasiveSet, ctx: GroupCtx) -> NmMetric:
    """Pairwise non-malleability distance; ties keep the first pair in lexicographic order.

    Constant tampering onto a codeword that decodes to a message m0 scores 1,
    since m0 maps to SAME in its own experiment but not in the others.
    """
    experiment = tamper_experiment(fp, S, ctx)
    best = NmMetric(Fraction(0), None)
    k = len(S.S)
    for m in range(k):
        Dm = _with_same(experiment.distributions[m], m)
        for m2 in range(m + 1, k):
            d = total_variation(Dm, _with_same(experiment.distributions[m2], m2))
            if best.pair is None or d > best.value:
                best = NmMetric(d, (m, m2))
    return best
