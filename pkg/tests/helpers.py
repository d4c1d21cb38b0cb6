"""Small enumeration helpers and naive oracles used across the tests."""

from fractions import Fraction
from itertools import product
from typing import Iterator, List, Tuple

from autoplex.models.words import Word


def binary_words(length: int) -> Iterator[Word]:
    for bits in product((0, 1), repeat=length):
        yield Word(bits, 2)


def words_up_to(max_length: int) -> Iterator[Word]:
    for n in range(max_length + 1):
        yield from binary_words(n)


def canonical_sequences(length: int) -> Iterator[Tuple[int, ...]]:
    """All restricted-growth sequences s_0 = 0, ..., s_{length-1} in lexicographic order."""

    def grow(prefix: List[int], highest: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for s in range(highest + 2):
            prefix.append(s)
            yield from grow(prefix, max(highest, s))
            prefix.pop()

    yield from grow([0], 0)


def naive_powers(w: Word) -> set:
    """(start, period, extent) triples by direct comparison."""
    found = set()
    n = len(w)
    for start in range(n):
        for p in range(1, n):
            for extent in range(2 * p, n - start + 1):
                if all(w[i] == w[i + p] for i in range(start, start + extent - p)):
                    found.add((start, p, extent))
    return found


def naive_critical_exponent(w: Word) -> Fraction:
    """Max extent/period over every factor and every period, by direct comparison."""
    n = len(w)
    if n <= 1:
        return Fraction(0)
    best = Fraction(1)
    for start in range(n):
        for p in range(1, n - start):
            extent = p
            while start + extent < n and w[start + extent] == w[start + extent - p]:
                extent += 1
            best = max(best, Fraction(extent, p))
    return best
