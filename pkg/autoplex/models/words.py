"""
Words over small alphabets, k-bonacci words and the algebraic constants around them.

Symbols are small integers; text I/O renders them as '0', '1', '2', ...
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from autoplex.core.config import MAX_ALPHABET, ROOT_TOL
from autoplex.core.errors import BracketError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Word:
    """A finite word over the alphabet {0..k-1}."""

    symbols: Tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"alphabet size must be >= 1, got {self.k}")
        for s in self.symbols:
            if not 0 <= s < self.k:
                raise DomainError(f"symbol {s} outside alphabet of size {self.k}")

    @classmethod
    def from_string(cls, text: str, k: Optional[int] = None) -> "Word":
        """Parse '0102...' into a word. The alphabet defaults to the largest digit seen plus one."""
        if any(ch not in "0123456789" for ch in text):
            raise DomainError(f"words are strings of decimal digits, got {text!r}")
        symbols = tuple(int(ch) for ch in text)
        if k is None:
            k = max(symbols, default=0) + 1
        return cls(symbols, k)

    def __str__(self) -> str:
        return "".join(str(s) for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.symbols[index], self.k)
        return self.symbols[index]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.symbols + other.symbols, max(self.k, other.k))

    def reversed(self) -> "Word":
        return Word(self.symbols[::-1], self.k)

    def permuted(self, mapping: Sequence[int]) -> "Word":
        """Rename symbol i to mapping[i]."""
        return Word(tuple(mapping[s] for s in self.symbols), self.k)

    def is_prefix_of(self, other: "Word") -> bool:
        return other.symbols[: len(self.symbols)] == self.symbols

    def as_array(self) -> np.ndarray:
        return np.asarray(self.symbols, dtype=np.int8)


def concat(words: Iterable[Word], k: int) -> Word:
    symbols: List[int] = []
    for w in words:
        symbols.extend(w.symbols)
    return Word(tuple(symbols), k)


def _check_k(k: int) -> None:
    if k < 2:
        raise DomainError(f"k-bonacci needs k >= 2, got {k}")
    if k > MAX_ALPHABET:
        raise DomainError(f"k-bonacci words are supported for k <= {MAX_ALPHABET}, got {k}")


@lru_cache(maxsize=None)
def _kbonacci_numbers(k: int, n: int) -> Tuple[int, ...]:
    values = [0] * (k - 1) + [1]
    while len(values) <= n:
        values.append(sum(values[-k:]))
    return tuple(values[: n + 1])


def kbonacci_number(k: int, n: int) -> int:
    """Length of the n-th k-bonacci word: 0 up to n = k-2, 1 at n = k-1, then the sum of the previous k."""
    _check_k(k)
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    return _kbonacci_numbers(k, n)[n]


def apply_morphism(k: int, w: Word) -> Word:
    """Image of w under a_i -> a_0 a_{i+1} (i <= k-2), a_{k-1} -> a_0."""
    out: List[int] = []
    for s in w.symbols:
        if s >= k:
            raise DomainError(f"symbol {s} outside alphabet of size {k}")
        if s == k - 1:
            out.append(0)
        else:
            out.append(0)
            out.append(s + 1)
    return Word(tuple(out), k)


@lru_cache(maxsize=256)
def kbonacci_word(k: int, n: int) -> Word:
    """The n-th k-bonacci word W_n, built by iterating the morphism from W_{k-1} = a_{k-1}."""
    _check_k(k)
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    if n <= k - 2:
        return Word((), k)
    w = Word((k - 1,), k)
    for _ in range(n - (k - 1)):
        w = apply_morphism(k, w)
    return w


def infinite_prefix(k: int, length: int) -> Word:
    """First `length` symbols of the fixed point of the k-bonacci morphism starting with 0."""
    _check_k(k)
    if length < 0:
        raise DomainError(f"length must be >= 0, got {length}")
    w = Word((0,), k)
    while len(w) < length:
        w = apply_morphism(k, w)
    return w[:length]


def fibonacci_word(n: int) -> Word:
    return kbonacci_word(2, n)


def tribonacci_word(n: int) -> Word:
    return kbonacci_word(3, n)


# ==================== Algebraic constants ====================


def refine_root(poly: Sequence[int], bracket: Tuple[float, float], tol: float = ROOT_TOL) -> float:
    """Bisect the unique root of `poly` (coefficients, highest degree first) inside `bracket`.

    Raises:
        BracketError: if poly does not change sign on the bracket endpoints
    """
    lo, hi = bracket
    coeffs = np.asarray(poly, dtype=float)
    f_lo, f_hi = np.polyval(coeffs, lo), np.polyval(coeffs, hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if f_lo * f_hi > 0:
        raise BracketError(f"polynomial {list(poly)} has no sign change on [{lo}, {hi}]")
    return float(bisect(lambda x: np.polyval(coeffs, x), lo, hi, xtol=tol, maxiter=500))


@dataclass(frozen=True)
class Constant:
    name: str
    value: float
    defining_polynomial: Tuple[int, ...]
    bracket: Tuple[float, float]

    def residual(self) -> float:
        return float(abs(np.polyval(np.asarray(self.defining_polynomial, dtype=float), self.value)))


_DEFINITIONS: Dict[str, Tuple[Tuple[int, ...], Tuple[float, float]]] = {
    # phi^2 = phi + 1
    "phi": ((1, -1, -1), (1.0, 2.0)),
    # xi^3 = xi^2 + xi + 1
    "xi": ((1, -1, -1, -1), (1.0, 2.0)),
    # theta^3 + theta^2 + theta = 1, theta = 1/xi
    "theta": ((1, 1, 1, -1), (0.0, 1.0)),
    # critical exponent of the infinite Tribonacci word
    "trib_critical_exponent": ((2, -12, 22, -13), (3.0, 4.0)),
    # lower A_N-rate of the infinite Tribonacci word
    "trib_lower_rate": ((13, -22, 12, -2), (0.0, 1.0)),
}


@lru_cache(maxsize=None)
def constant(name: str) -> Constant:
    """Look up one of phi, xi, theta, trib_critical_exponent, trib_lower_rate."""
    try:
        poly, bracket = _DEFINITIONS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; expected one of {sorted(_DEFINITIONS)}") from None
    value = refine_root(poly, bracket)
    logger.debug(f"Constant {name} = {value!r}")
    return Constant(name, value, poly, bracket)


def constant_names() -> List[str]:
    return list(_DEFINITIONS)
