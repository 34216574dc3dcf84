"""Guess-and-check decoding: error-pattern schedules and the query loop.

An error pattern is a tuple of bit positions to flip, strictly increasing.
Two schedules are provided: the hard-decision order (Hamming weight
ascending, then lexicographic) and the ORBGRAND "1-line" order (logistic
weight ascending, where the logistic weight of a pattern is the sum of the
reliability ranks of its flipped bits, rank 1 = least reliable).

The generic `grand_decode` works against any membership predicate.  For CRC
codebooks, `hard_grand_decode` and `orbgrand_decode` run the same candidate
order through precomputed syndrome tables, which turns each codebook query
into a few integer XORs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .crc import CrcCode

__all__ = [
    "ReliabilityRanking",
    "DecodeResult",
    "hard_pattern_stream",
    "rank_by_reliability",
    "orb_pattern_stream",
    "grand_decode",
    "hard_grand_decode",
    "orbgrand_decode",
]


@dataclass(frozen=True)
class ReliabilityRanking:
    """Bit positions sorted by ascending |LLR|; order[r-1] is the position of rank r."""

    order: np.ndarray
    magnitudes: np.ndarray

    def __len__(self) -> int:
        return len(self.order)


@dataclass
class DecodeResult:
    codeword: np.ndarray
    error_pattern: tuple[int, ...]
    queries: int
    abandoned: bool


def hard_pattern_stream(n: int, max_weight: int) -> Iterator[tuple[int, ...]]:
    """All flip patterns of weight 0..max_weight, weight ascending then lexicographic."""
    if not 0 <= max_weight <= n:
        raise ValueError(f"max_weight must be in [0, {n}], got {max_weight}")
    yield ()
    for weight in range(1, max_weight + 1):
        yield from itertools.combinations(range(n), weight)


def rank_by_reliability(llrs: np.ndarray) -> ReliabilityRanking:
    """Rank bit positions by |LLR| ascending; ties go to the lower position."""
    llrs = np.asarray(llrs, dtype=float)
    if np.isnan(llrs).any():
        raise ValueError("llrs contain NaN")
    magnitudes = np.abs(llrs)
    order = np.argsort(magnitudes, kind="stable")
    return ReliabilityRanking(order=order, magnitudes=magnitudes[order])


def _distinct_partitions(total: int, k: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """Partitions of `total` into k distinct parts in [lo, hi], ascending parts,
    emitted in lexicographic order of the part tuple."""
    if k == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    for first in range(lo, hi - k + 2):
        rem = total - first
        # remaining k-1 parts are distinct values in (first, hi]
        min_rem = (k - 1) * first + k * (k - 1) // 2
        if rem < min_rem:
            break
        max_rem = (k - 1) * hi - (k - 2) * (k - 1) // 2
        if rem > max_rem:
            continue
        for rest in _distinct_partitions(rem, k - 1, first + 1, hi):
            yield (first,) + rest


def _orb_rank_sets(n: int, max_logistic_weight: int, max_hamming_weight: int) -> Iterator[tuple[int, ...]]:
    """Rank subsets {r1<..<rk} <= n with sum r_i ascending; within one sum,
    fewer elements first, then lexicographic by rank tuple."""
    yield ()
    size_cap = min(n, max_hamming_weight)
    for lw in range(1, max_logistic_weight + 1):
        max_k = min(size_cap, (math.isqrt(8 * lw + 1) - 1) // 2)
        for k in range(1, max_k + 1):
            if lw > k * (2 * n - k + 1) // 2:
                continue
            yield from _distinct_partitions(lw, k, 1, n)


def orb_pattern_stream(
    ranking: ReliabilityRanking,
    max_logistic_weight: int | None = None,
    max_hamming_weight: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Flip patterns in ascending logistic-weight order, mapped to bit positions."""
    n = len(ranking)
    if max_logistic_weight is None:
        max_logistic_weight = n * (n + 1) // 2
    if max_hamming_weight is None:
        max_hamming_weight = n
    if max_logistic_weight < 0 or max_hamming_weight < 0:
        raise ValueError("budgets must be nonnegative")
    order = ranking.order
    for ranks in _orb_rank_sets(n, max_logistic_weight, max_hamming_weight):
        yield tuple(sorted(int(order[r - 1]) for r in ranks))


def grand_decode(
    hard_word: np.ndarray,
    membership: Callable[[np.ndarray], bool],
    patterns: Iterable[tuple[int, ...]],
    query_budget: int | None = None,
) -> DecodeResult:
    """Test hard_word ^ pattern against `membership` in schedule order.

    Returns the first hit with abandoned=False; if the schedule runs out or
    the query budget is reached first, returns the input word unchanged with
    abandoned=True.  `queries` counts membership evaluations.
    """
    word = np.asarray(hard_word, dtype=np.uint8)
    if query_budget is not None and query_budget < 1:
        raise ValueError(f"query_budget must be >= 1, got {query_budget}")
    budget = math.inf if query_budget is None else query_budget
    queries = 0
    for pattern in patterns:
        queries += 1
        if pattern:
            candidate = word.copy()
            candidate[list(pattern)] ^= 1
        else:
            candidate = word
        if membership(candidate):
            return DecodeResult(candidate.copy(), tuple(pattern), queries, False)
        if queries >= budget:
            break
    return DecodeResult(word.copy(), (), queries, True)


def _apply_pattern(word: np.ndarray, pattern: tuple[int, ...]) -> np.ndarray:
    codeword = word.copy()
    if pattern:
        codeword[list(pattern)] ^= 1
    return codeword


def hard_grand_decode(
    word: np.ndarray,
    code: CrcCode,
    max_weight: int = 4,
    query_budget: int | None = None,
) -> DecodeResult:
    """Hard-decision guess-and-check against a CRC codebook via syndromes.

    Candidate order is identical to `hard_pattern_stream`; a candidate is a
    codeword iff the XOR of its flipped positions' syndromes equals the
    syndrome of `word`.
    """
    word = np.asarray(word, dtype=np.uint8)
    target = code.syndrome(word)
    table = code.position_syndromes
    budget = math.inf if query_budget is None else query_budget
    queries = 0
    for pattern in hard_pattern_stream(len(word), max_weight):
        queries += 1
        acc = 0
        for j in pattern:
            acc ^= table[j]
        if acc == target:
            return DecodeResult(_apply_pattern(word, pattern), pattern, queries, False)
        if queries >= budget:
            break
    return DecodeResult(word.copy(), (), queries, True)


def orbgrand_decode(
    word: np.ndarray,
    llrs: np.ndarray,
    code: CrcCode,
    max_logistic_weight: int | None = None,
    query_budget: int | None = 1_000_000,
    max_hamming_weight: int | None = None,
) -> DecodeResult:
    """ORBGRAND (1-line) against a CRC codebook via syndromes.

    Same candidate order as `orb_pattern_stream(rank_by_reliability(llrs))`.
    """
    word = np.asarray(word, dtype=np.uint8)
    n = len(word)
    ranking = rank_by_reliability(llrs)
    if len(ranking) != n:
        raise ValueError(f"llrs length {len(ranking)} does not match word length {n}")
    if max_logistic_weight is None:
        max_logistic_weight = n * (n + 1) // 2
    if max_hamming_weight is None:
        max_hamming_weight = n
    target = code.syndrome(word)
    table = code.position_syndromes
    order = ranking.order
    by_rank = [table[int(p)] for p in order]
    budget = math.inf if query_budget is None else query_budget
    queries = 0
    for ranks in _orb_rank_sets(n, max_logistic_weight, max_hamming_weight):
        queries += 1
        acc = 0
        for r in ranks:
            acc ^= by_rank[r - 1]
        if acc == target:
            pattern = tuple(sorted(int(order[r - 1]) for r in ranks))
            return DecodeResult(_apply_pattern(word, pattern), pattern, queries, False)
        if queries >= budget:
            break
    return DecodeResult(word.copy(), (), queries, True)
