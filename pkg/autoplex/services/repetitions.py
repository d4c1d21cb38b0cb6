"""
Repetitions in words: power occurrences, critical exponents and the A_N^lower bound.

A_N^lower(w) = max(1, ceil((|w| + 1 - G) / 2)) where G is the largest gain
m + sum(extent_i - 2 * period_i) of a family of m pairwise disjoint maximal
runs of exponent at least 2, read left to right, such that for every prefix of
the family the exponents are the only nonnegative integer traversal counts
y_i with sum(y_i * period_i) = sum(extent_i).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from autoplex.core.errors import DomainError
from autoplex.models.words import Word, constant

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PowerOccurrence:
    """w[start:start+extent] has period `period` and extent >= 2 * period."""

    start: int
    period: int
    extent: int

    @property
    def end(self) -> int:
        return self.start + self.extent

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.extent, self.period)

    @property
    def gain(self) -> int:
        return 1 + self.extent - 2 * self.period


PowerFamily = Sequence[PowerOccurrence]


def _matches(w: Word, p: int) -> np.ndarray:
    a = w.as_array()
    return a[p:] == a[:-p]


def _runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Maximal [a, b) index ranges where mask is True."""
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def find_power_candidates(w: Word) -> List[PowerOccurrence]:
    """Every (start, period, extent) with extent >= 2 * period and the periodicity holding throughout."""
    n = len(w)
    found: List[PowerOccurrence] = []
    for p in range(1, n // 2 + 1):
        for a, b in _runs(_matches(w, p)):
            # positions a..b+p-1 have period p
            for s in range(a, b - p + 1):
                for extent in range(2 * p, b + p - s + 1):
                    found.append(PowerOccurrence(s, p, extent))
    found.sort()
    return found


def maximal_runs(w: Word) -> List[PowerOccurrence]:
    """One occurrence per maximal run of each period, kept when its exponent is at least 2."""
    found = []
    for p in range(1, len(w) // 2 + 1):
        for a, b in _runs(_matches(w, p)):
            if b - a >= p:
                found.append(PowerOccurrence(a, p, b - a + p))
    found.sort()
    return found


def critical_exponent(w: Word) -> Fraction:
    """Largest extent/period over all factors of w (0 for |w| <= 1)."""
    n = len(w)
    if n <= 1:
        return Fraction(0)
    best = Fraction(1)
    for p in range(1, n):
        if Fraction(n, p) <= best:
            break
        runs = _runs(_matches(w, p))
        if not runs:
            continue
        longest = max(b - a for a, b in runs)
        best = max(best, Fraction(longest + p, p))
    return best


def critical_exponent_of_prefixes(w: Word) -> List[Fraction]:
    """Critical exponent of every prefix w[:L], L = 0..|w|, in one pass per period."""
    n = len(w)
    num = np.zeros(n + 1, dtype=np.int64)
    den = np.ones(n + 1, dtype=np.int64)
    num[2:] = 1
    lengths = np.arange(n + 1, dtype=np.int64)
    for p in range(1, n):
        # exponent at period p never exceeds L/p
        if not np.any(lengths[2:] * den[2:] > num[2:] * p):
            break
        eq = _matches(w, p)
        idx = np.arange(eq.size)
        last_break = np.maximum.accumulate(np.where(~eq, idx, -1))
        longest = np.maximum.accumulate(idx - last_break)
        # prefix length L sees comparisons 0..L-1-p
        cand_num = np.zeros(n + 1, dtype=np.int64)
        cand_num[p + 1 :] = longest + p
        better = cand_num * den > num * p
        num = np.where(better, cand_num, num)
        den = np.where(better, p, den)
    return [Fraction(int(a), int(b)) for a, b in zip(num, den)]


# ==================== Uniqueness condition ====================


@lru_cache(maxsize=200_000)
def _solution_count(periods: Tuple[int, ...], total: int) -> int:
    """Nonnegative integer solutions of sum(y_i * periods_i) = total, saturating at 2."""
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for p in periods:
        rows = -(-(total + 1) // p)
        padded = np.zeros(rows * p, dtype=np.int64)
        padded[: total + 1] = counts
        # sum over y >= 0 of counts[s - p*y]
        acc = np.cumsum(padded.reshape(rows, p), axis=0)
        counts = np.minimum(acc.reshape(-1)[: total + 1], 2)
    return int(counts[total])


def satisfies_uniqueness(family: PowerFamily) -> bool:
    """True iff the exponents are the only nonnegative integer y with sum(y_i * period_i) = sum(extent_i).

    A fractional exponent cannot be a traversal count, so a family holding one
    passes only when the equation has no integer solution at all.
    """
    periods = tuple(sorted(o.period for o in family))
    total = sum(o.extent for o in family)
    expected = 1 if all(o.extent % o.period == 0 for o in family) else 0
    return _solution_count(periods, total) == expected


def family_gain(family: PowerFamily) -> int:
    return len(family) + sum(o.extent - 2 * o.period for o in family)


def is_disjoint(family: PowerFamily) -> bool:
    ordered = sorted(family)
    return all(a.end <= b.start for a, b in zip(ordered, ordered[1:]))


def is_strongly_disjoint(family: PowerFamily) -> bool:
    ordered = sorted(family)
    return all(a.end < b.start for a, b in zip(ordered, ordered[1:]))


def family_is_valid(family: PowerFamily) -> bool:
    """Disjoint, and every left-to-right prefix of the family passes the uniqueness condition."""
    ordered = sorted(family)
    return is_disjoint(ordered) and all(satisfies_uniqueness(ordered[: i + 1]) for i in range(len(ordered)))


def _bound_from_gain(n: int, gain: int) -> int:
    return max(1, -(-(n + 1 - gain) // 2))


# ==================== A_N^lower ====================


def an_lower_family(w: Word) -> Tuple[int, List[PowerOccurrence]]:
    """A_N^lower(w) together with one family attaining it, by branch and bound.

    Families grow left to right over the maximal runs of w, so every node of the
    search is a prefix that has to pass the uniqueness condition itself. The
    optimistic bound at a position is the best total gain of disjoint runs
    starting there or later, ignoring uniqueness.
    """
    n = len(w)
    candidates = maximal_runs(w)
    if not candidates:
        return _bound_from_gain(n, 0), []

    # ub[i]: weighted interval scheduling over runs starting at >= i
    ub = [0] * (n + 1)
    by_start: List[List[PowerOccurrence]] = [[] for _ in range(n + 1)]
    for c in candidates:
        by_start[c.start].append(c)
    for i in range(n - 1, -1, -1):
        ub[i] = ub[i + 1]
        for c in by_start[i]:
            ub[i] = max(ub[i], c.gain + ub[c.end])

    # most promising first; the optimistic value of a child bounds its whole subtree
    ranked = sorted(candidates, key=lambda c: (-(c.gain + ub[c.end]), c))
    best_gain = 0
    best_family: List[PowerOccurrence] = []
    nodes = 0

    def descend(next_start: int, family: List[PowerOccurrence], gain: int) -> None:
        nonlocal best_gain, best_family, nodes
        nodes += 1
        if gain > best_gain:
            best_gain, best_family = gain, list(family)
        if gain + ub[next_start] <= best_gain:
            return
        for c in ranked:
            if gain + c.gain + ub[c.end] <= best_gain:
                break
            if c.start < next_start:
                continue
            family.append(c)
            if satisfies_uniqueness(family):
                descend(c.end, family, gain + c.gain)
            family.pop()

    descend(0, [], 0)
    value = _bound_from_gain(n, best_gain)
    logger.debug(f"an_lower |w|={n}: {len(candidates)} runs, {nodes} nodes, gain {best_gain} -> {value}")
    return value, sorted(best_family)


def an_lower(w: Word) -> int:
    return an_lower_family(w)[0]


def an_lower_exhaustive(w: Word) -> int:
    """Same value as an_lower, by plain enumeration of every valid family."""
    candidates = maximal_runs(w)
    best = 0

    def extend(index: int, next_start: int, family: List[PowerOccurrence]) -> None:
        nonlocal best
        best = max(best, family_gain(family))
        for j in range(index, len(candidates)):
            c = candidates[j]
            if c.start < next_start:
                continue
            family.append(c)
            if satisfies_uniqueness(family):
                extend(j + 1, c.end, family)
            family.pop()

    extend(0, 0, [])
    return _bound_from_gain(len(w), best)


# ==================== Closed-form bounds ====================


def sept6_bound(n: int, gamma: float) -> float:
    """(n + 1 - sqrt(2n)) / gamma: A_N lower bound for words of critical exponent at most gamma."""
    if n < 0:
        raise DomainError(f"length must be >= 0, got {n}")
    if gamma < 2:
        raise DomainError(f"gamma must be >= 2, got {gamma}")
    return (n + 1 - math.sqrt(2 * n)) / gamma


def may4_bound(n: int, m: int, gamma: float) -> float:
    """(n + 1 - m) / gamma, given a valid family of m powers and critical exponent at most gamma."""
    if n < 0 or m < 0:
        raise DomainError(f"length and family size must be >= 0, got n={n}, m={m}")
    if gamma < 2:
        raise DomainError(f"gamma must be >= 2, got {gamma}")
    return (n + 1 - m) / gamma


RATE_KINDS = ("fibonacci", "tribonacci", "kbonacci_generic")


def rate_lower(kind: str) -> float:
    """Lower A_N-rate of the infinite Fibonacci / Tribonacci word, or the bound for every k-bonacci word."""
    if kind == "fibonacci":
        return 2 / (5 + math.sqrt(5))
    if kind == "tribonacci":
        return constant("trib_lower_rate").value
    if kind == "kbonacci_generic":
        return 0.25
    raise DomainError(f"unknown rate kind {kind!r}; expected one of {RATE_KINDS}")
