"""Affine-evasive message alphabets S ⊆ F_p found by search.

The profile of S is max |S ∩ (aS + b)| over all affine maps (a, b) != (1, 0).
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.errors import BudgetExceededError
from src.fpn.group import is_prime

logger = logging.getLogger(__name__)


def affine_profile(p: int, S: tuple[int, ...]) -> tuple[int, tuple[int, int]]:
    """Exact profile of S and the first (a, b) in lexicographic order attaining it."""
    mask = np.zeros(p, dtype=bool)
    mask[list(S)] = True
    elems = np.array(S, dtype=np.int64)
    a = np.arange(p)[:, None, None]
    b = np.arange(p)[None, :, None]
    hits = mask[(a * elems[None, None, :] + b) % p].sum(axis=2)
    # a = 0 collapses S to the single point {b}
    hits[0, :] = mask.astype(np.int64)
    hits[1, 0] = -1
    flat = int(np.argmax(hits))
    return int(hits.flat[flat]), divmod(flat, p)


@dataclass(frozen=True)
class AffineEvasiveSet:
    """An ordered alphabet S ⊆ F_p; message m is encoded through the symbol S[m].

    Attributes:
        p: Field size
        S: Symbols in increasing order
        profile: max over (a, b) != (1, 0) of |S ∩ (aS + b)|
        witness: An affine map attaining the profile
    """

    p: int
    S: tuple[int, ...]
    profile: int
    witness: tuple[int, int]

    @classmethod
    def from_symbols(cls, p: int, symbols) -> "AffineEvasiveSet":
        S = tuple(sorted({int(s) % p for s in symbols}))
        if not S:
            raise ValueError("alphabet must be nonempty")
        profile, witness = affine_profile(p, S)
        return cls(p=p, S=S, profile=profile, witness=witness)

    @property
    def size(self) -> int:
        return len(self.S)

    def symbol(self, m: int) -> int:
        if not 0 <= m < len(self.S):
            raise ValueError(f"message index {m} out of range [0, {len(self.S)})")
        return self.S[m]

    def message_table(self) -> np.ndarray:
        """table[s] = message index of symbol s, or -1 when s is not in S."""
        table = np.full(self.p, -1, dtype=np.int64)
        table[list(self.S)] = np.arange(len(self.S))
        return table

    def message_of(self, s: int) -> int | None:
        try:
            return self.S.index(s % self.p)
        except ValueError:
            return None


def _greedy(p: int, k: int, rng: np.random.Generator) -> tuple[int, ...]:
    chosen = [int(rng.integers(p))]
    while len(chosen) < k:
        best = None
        for x in range(p):
            if x in chosen:
                continue
            profile, _ = affine_profile(p, tuple(sorted(chosen + [x])))
            if best is None or profile < best[0]:
                best = (profile, x)
        chosen.append(best[1])

    current = tuple(sorted(chosen))
    current_profile, _ = affine_profile(p, current)
    improved = True
    while improved:
        improved = False
        for out, into in itertools.product(current, range(p)):
            if into in current:
                continue
            candidate = tuple(sorted(set(current) - {out} | {into}))
            profile, _ = affine_profile(p, candidate)
            if profile < current_profile:
                current, current_profile, improved = candidate, profile, True
                break
    return current


def search_affine_evasive(
    p: int,
    target_size: int,
    mode: str = "exhaustive",
    rng: np.random.Generator | None = None,
    budget: int | None = None,
) -> AffineEvasiveSet:
    """Find a size-target_size alphabet with small profile.

    exhaustive: global optimum, ties broken lexicographically.
    greedy: seeded start, greedy growth, then first-improvement swaps.

    Raises:
        ValueError: If p is not prime, target_size is out of range, or greedy has no rng
        BudgetExceededError: If C(p, target_size) exceeds the budget in exhaustive mode
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if not 1 <= target_size <= p:
        raise ValueError(f"target_size must be in [1, {p}], got {target_size}")

    if mode == "exhaustive":
        budget = settings.enumeration_budget if budget is None else budget
        count = math.comb(p, target_size)
        if count > budget:
            raise BudgetExceededError(f"alphabets of size {target_size} in F_{p}", count, budget)
        best = None
        for S in itertools.combinations(range(p), target_size):
            profile, witness = affine_profile(p, S)
            if best is None or profile < best.profile:
                best = AffineEvasiveSet(p=p, S=S, profile=profile, witness=witness)
        return best

    if mode == "greedy":
        if rng is None:
            raise ValueError("greedy search needs an rng")
        return AffineEvasiveSet.from_symbols(p, _greedy(p, target_size, rng))

    raise ValueError(f"unknown search mode {mode!r}")
