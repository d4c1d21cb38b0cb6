"""
Candidate witness automata.

An Nfa here is the transition structure of an A_N / A- witness: no epsilon moves,
start state 0, and (for induced witnesses) a single accept state.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterator, List, Sequence, Tuple

import numpy as np

from autoplex.core.config import DEFAULT_CAP
from autoplex.core.errors import DomainError
from autoplex.models.words import Word

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]  # (from_state, symbol, to_state)

_STATE_DIGITS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def state_label(state: int) -> str:
    """q_0..q_9, q_A..q_Z, then q_36, q_37, ..."""
    if state < len(_STATE_DIGITS):
        return f"q_{_STATE_DIGITS[state]}"
    return f"q_{state}"


@dataclass(frozen=True)
class Nfa:
    q: int
    k: int
    edges: FrozenSet[Edge]
    accept: FrozenSet[int]
    start: int = 0

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"an automaton needs at least one state, got q={self.q}")
        if not self.accept:
            raise DomainError("accept set must be nonempty")
        for s, a, t in self.edges:
            if not (0 <= s < self.q and 0 <= t < self.q):
                raise DomainError(f"edge ({s}, {a}, {t}) references a state outside 0..{self.q - 1}")
            if not 0 <= a < self.k:
                raise DomainError(f"edge ({s}, {a}, {t}) uses a symbol outside the alphabet of size {self.k}")
        if not all(0 <= s < self.q for s in self.accept) or not 0 <= self.start < self.q:
            raise DomainError("start/accept states must lie in 0..q-1")

    @cached_property
    def _adjacency(self) -> np.ndarray:
        m = np.zeros((self.q, self.q), dtype=np.int64)
        for s, _, t in self.edges:
            m[s, t] += 1
        return m

    @cached_property
    def _by_symbol(self) -> List[np.ndarray]:
        mats = [np.zeros((self.q, self.q), dtype=np.int64) for _ in range(self.k)]
        for s, a, t in self.edges:
            mats[a][s, t] = 1
        return mats

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)


# ==================== State sequences ====================


@dataclass(frozen=True)
class StateSequence:
    """The states s_0..s_n visited by a witness's unique accepting path while reading `word`."""

    states: Tuple[int, ...]
    word: Word = field(compare=True)

    def __post_init__(self):
        if len(self.states) != len(self.word) + 1:
            raise DomainError(f"state sequence has {len(self.states)} entries for a word of length {len(self.word)}")
        if self.states[0] != 0:
            raise DomainError("state sequences start at state 0")
        highest = 0
        for s in self.states[1:]:
            if s > highest + 1 or s < 0:
                raise DomainError(f"state sequence {list(self.states)} is not in restricted-growth form")
            highest = max(highest, s)

    @property
    def state_count(self) -> int:
        return max(self.states) + 1


def induce_from_sequence(seq: StateSequence) -> Nfa:
    """The automaton whose edges are exactly the steps of the sequence; accept = {s_n}."""
    edges = frozenset((seq.states[i], seq.word[i], seq.states[i + 1]) for i in range(len(seq.word)))
    return Nfa(q=seq.state_count, k=seq.word.k, edges=edges, accept=frozenset({seq.states[-1]}))


# ==================== Walk counting ====================


def count_accepting_walks(a: Nfa, n: int, cap: int = DEFAULT_CAP) -> int:
    """Number of length-n walks from start to an accept state over all labels, saturating at `cap`."""
    if n < 0:
        raise DomainError(f"walk length must be >= 0, got {n}")
    if cap < 2:
        raise DomainError(f"cap must be >= 2, got {cap}")
    vec = np.zeros(a.q, dtype=np.int64)
    vec[a.start] = 1
    for _ in range(n):
        vec = np.minimum(vec @ a._adjacency, cap)
    return int(min(cap, vec[sorted(a.accept)].sum()))


def count_accepting_walks_backward(a: Nfa, n: int, cap: int = DEFAULT_CAP) -> int:
    """Same count as count_accepting_walks, computed from the accept side."""
    vec = np.zeros(a.q, dtype=np.int64)
    vec[sorted(a.accept)] = 1
    for _ in range(n):
        vec = np.minimum(a._adjacency @ vec, cap)
    return int(min(cap, vec[a.start]))


def spells_word(a: Nfa, w: Word, cap: int = DEFAULT_CAP) -> int:
    """Number of accepting walks labeled exactly w, saturating at `cap`."""
    vec = np.zeros(a.q, dtype=np.int64)
    vec[a.start] = 1
    for symbol in w.symbols:
        if symbol >= a.k:
            return 0
        vec = np.minimum(vec @ a._by_symbol[symbol], cap)
    return int(min(cap, vec[sorted(a.accept)].sum()))


def is_unique_witness(a: Nfa, w: Word) -> bool:
    """True iff a accepts w and has exactly one accepting walk of length |w|."""
    return spells_word(a, w) >= 1 and count_accepting_walks(a, len(w), 2) == 1


def is_deterministic_partial(a: Nfa) -> bool:
    """No two edges leave the same state on the same symbol."""
    seen = set()
    for s, sym, _ in a.edges:
        if (s, sym) in seen:
            return False
        seen.add((s, sym))
    return True


def reverse(a: Nfa) -> Nfa:
    """Reverse every edge and swap start with the single accept state.

    States 0 and the old accept state are swapped so that the result starts at 0 again.
    """
    if len(a.accept) != 1:
        raise DomainError("reversal needs exactly one accept state")
    (final,) = a.accept

    def swap(s: int) -> int:
        if s == a.start:
            return final
        if s == final:
            return a.start
        return s

    edges = frozenset((swap(t), sym, swap(s)) for s, sym, t in a.edges)
    return Nfa(q=a.q, k=a.k, edges=edges, accept=frozenset({swap(a.start)}), start=a.start)


# ==================== Serialization ====================


def _dot_lines(a: Nfa) -> Iterator[str]:
    yield "digraph {\n"
    yield "  rankdir=LR;\n"
    yield "  node [shape=circle];\n"
    yield '  __start [shape=point, label=""];\n'
    yield f"  __start -> {state_label(a.start)};\n"
    for s in sorted(a.accept):
        yield f"  {state_label(s)} [shape=doublecircle];\n"
    for s, sym, t in a.sorted_edges():
        yield f'  {state_label(s)} -> {state_label(t)} [label="{sym}"];\n'
    yield "}\n"


def to_dot(a: Nfa) -> str:
    """Graphviz DOT text: start marked by an arrow from a point node, accept states doubly circled."""
    return "".join(_dot_lines(a))


def to_text(a: Nfa) -> str:
    """Line format: `q k start`, one `from symbol to` per edge, then `accept: ...`."""
    lines = [f"{a.q} {a.k} {a.start}"]
    lines.extend(f"{s} {sym} {t}" for s, sym, t in a.sorted_edges())
    lines.append("accept: " + " ".join(str(s) for s in sorted(a.accept)))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Nfa:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    try:
        q, k, start = (int(x) for x in lines[0].split())
        if not lines[-1].startswith("accept:"):
            raise ValueError("missing accept line")
        accept = frozenset(int(x) for x in lines[-1][len("accept:"):].split())
        edges = frozenset(tuple(int(x) for x in line.split()) for line in lines[1:-1])
    except (ValueError, IndexError) as e:
        raise DomainError(f"malformed automaton text: {e}") from e
    if any(len(edge) != 3 for edge in edges):
        raise DomainError("malformed automaton text: edges need three fields")
    return Nfa(q=q, k=k, edges=edges, accept=accept, start=start)


def path_automaton(w: Word) -> Nfa:
    """The (|w|+1)-state path spelling w."""
    return induce_from_sequence(StateSequence(tuple(range(len(w) + 1)), w))


def sequence_from_labels(labels: Sequence[str], w: Word) -> StateSequence:
    """Build a sequence from digit-letter state names ('0'..'9', 'A'..)."""
    return StateSequence(tuple(_STATE_DIGITS.index(x) for x in labels), w)
