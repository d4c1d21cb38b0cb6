"""
Exact A_N and A- by enumerating canonical state sequences.

A witness may be restricted to the edges of its unique accepting path, so it
suffices to enumerate restricted-growth sequences s_0 = 0, s_1, ..., s_n with
exactly q distinct states and accept state s_n. A prefix is abandoned once the
automaton it induces has two walks of some length i from 0 to s_i; adding
edges only adds walks, so no completion could be a witness.

The tree is cut at a fixed prefix depth into independent work items which
are explored in lexicographic order (optionally in parallel through joblib).
The first hit in that order is the lexicographically least witness, whatever
the number of workers.
"""

import logging
import time
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from autoplex.core.errors import BudgetExceeded, CheckpointError, DomainError
from autoplex.core.logging_setup import search_context
from autoplex.core.schemas import ComplexityRecord, SearchConfig
from autoplex.models.automata import StateSequence, induce_from_sequence, is_deterministic_partial, is_unique_witness
from autoplex.models.words import Word
from autoplex.services.repetitions import an_lower
from autoplex.utils.checkpoint import Checkpoint, checkpoint_load, checkpoint_save, word_digest

logger = logging.getLogger(__name__)

Prefix = Tuple[int, ...]

# How often (in DFS nodes) the deadline is looked at
_CLOCK_EVERY = 4096


class _SequenceSearch:
    """Depth-first enumeration of canonical sequences with exactly q states."""

    def __init__(self, w: Word, q: int, deterministic: bool, prune: bool = True, deadline: Optional[float] = None):
        self.word = w
        self.symbols = w.symbols
        self.n = len(w)
        self.q = q
        self.deterministic = deterministic
        self.prune = prune
        self.deadline = deadline
        self.nodes = 0

        self.states: List[int] = [0]
        self.highest: List[int] = [0]
        self._edge_refs = {}
        self._out = {}
        self._matrix = np.zeros((q, q), dtype=np.int64)
        start = np.zeros(q, dtype=np.int64)
        start[0] = 1
        self._walks: List[np.ndarray] = [start]
        self._frames: List[Tuple[Tuple[int, int, int], Optional[List[np.ndarray]]]] = []

    # ---- incremental edge bookkeeping ----

    def _add_edge(self, edge: Tuple[int, int, int]) -> bool:
        refs = self._edge_refs.get(edge, 0)
        self._edge_refs[edge] = refs + 1
        if refs == 0:
            s, a, t = edge
            self._matrix[s, t] += 1
            self._out[(s, a)] = t
        return refs == 0

    def _remove_edge(self, edge: Tuple[int, int, int]) -> None:
        refs = self._edge_refs[edge] - 1
        if refs:
            self._edge_refs[edge] = refs
            return
        del self._edge_refs[edge]
        s, a, t = edge
        self._matrix[s, t] -= 1
        if self._out.get((s, a)) == t:
            del self._out[(s, a)]

    def _recompute_walks(self) -> Optional[List[np.ndarray]]:
        vec = self._walks[0]
        walks = [vec]
        for state in self.states[1:]:
            vec = np.minimum(vec @ self._matrix, 2)
            if vec[state] >= 2:
                return None
            walks.append(vec)
        return walks

    def push(self, t: int) -> bool:
        """Extend the sequence by state t; False (and no change) if the extension is pruned."""
        i = len(self.states) - 1
        s = self.states[-1]
        a = self.symbols[i]
        if self.deterministic and self.prune and self._out.get((s, a), t) != t:
            return False
        edge = (s, a, t)
        is_new = self._add_edge(edge)
        self.states.append(t)
        self.highest.append(max(self.highest[-1], t))
        if not self.prune:
            self._frames.append((edge, None))
            return True
        if is_new:
            self._frames.append((edge, self._walks))
            walks = self._recompute_walks()
            if walks is None:
                self.pop()
                return False
            self._walks = walks
            return True
        self._frames.append((edge, None))
        vec = np.minimum(self._walks[-1] @ self._matrix, 2)
        self._walks.append(vec)
        if vec[t] >= 2:
            self.pop()
            return False
        return True

    def pop(self) -> None:
        edge, saved = self._frames.pop()
        self.states.pop()
        self.highest.pop()
        if self.prune:
            if saved is not None:
                self._walks = saved
            else:
                self._walks.pop()
        self._remove_edge(edge)

    # ---- enumeration ----

    def _extensions(self) -> range:
        used = self.highest[-1] + 1
        remaining = self.n - len(self.states)
        top = min(used, self.q - 1)
        # every state still unused must fit into the remaining steps
        if self.q - used > remaining + 1:
            return range(0)
        if self.q - used == remaining + 1:
            return range(used, used + 1) if used <= top else range(0)
        return range(0, top + 1)

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CLOCK_EVERY == 0 and time.time() > self.deadline:
            raise BudgetExceeded(f"time budget exhausted after {self.nodes} nodes at q={self.q}")

    def _leaf_ok(self) -> bool:
        if self.highest[-1] + 1 != self.q:
            return False
        a = induce_from_sequence(StateSequence(tuple(self.states), self.word))
        if self.deterministic and not is_deterministic_partial(a):
            return False
        return is_unique_witness(a, self.word)

    def dfs(self) -> Optional[Prefix]:
        self._tick()
        if len(self.states) == self.n + 1:
            return tuple(self.states) if self._leaf_ok() else None
        for t in self._extensions():
            if self.push(t):
                found = self.dfs()
                self.pop()
                if found is not None:
                    return found
        return None

    def prefixes(self, depth: int) -> Iterator[Prefix]:
        """Viable prefixes s_0..s_depth in lexicographic order."""
        if len(self.states) == depth + 1:
            yield tuple(self.states)
            return
        for t in self._extensions():
            if self.push(t):
                yield from self.prefixes(depth)
                self.pop()

    def replay(self, prefix: Sequence[int]) -> bool:
        if not prefix or prefix[0] != 0:
            return False
        for depth, t in enumerate(prefix[1:]):
            if t not in self._extensions() or not self.push(t):
                for _ in range(depth):
                    self.pop()
                return False
        return True


def build_frontier(w: Word, q: int, deterministic: bool, depth: int, prune: bool = True) -> List[Prefix]:
    """Work items: the viable canonical prefixes of length min(depth, |w|) + 1."""
    search = _SequenceSearch(w, q, deterministic, prune)
    return list(search.prefixes(min(depth, len(w))))


def explore_prefix(
    w: Word, q: int, deterministic: bool, prefix: Prefix, prune: bool = True, deadline: Optional[float] = None
) -> Optional[Prefix]:
    """Least witness sequence extending `prefix`, or None."""
    search = _SequenceSearch(w, q, deterministic, prune, deadline)
    if not search.replay(prefix):
        return None
    return search.dfs()


def _check_q(w: Word, q: int) -> None:
    if not 1 <= q <= len(w) + 1:
        raise DomainError(f"q must lie in [1, {len(w) + 1}] for a word of length {len(w)}, got {q}")


def search_fixed_q(
    w: Word,
    q: int,
    deterministic: bool,
    *,
    split_depth: int = 4,
    threads: int = 1,
    prune: bool = True,
    deadline: Optional[float] = None,
    frontier: Optional[List[Prefix]] = None,
    on_progress: Optional[Callable[[List[Prefix]], None]] = None,
) -> Optional[StateSequence]:
    """Lexicographically least canonical q-state witness sequence for w, or None.

    Args:
        frontier: resume from these work items instead of building the full frontier
        on_progress: called with the still unexplored work items after each batch

    Raises:
        BudgetExceeded: the deadline passed before the search finished
    """
    _check_q(w, q)
    if frontier is None:
        frontier = build_frontier(w, q, deterministic, split_depth, prune)
    remaining = list(frontier)
    logger.info(f"q={q} ({'A-' if deterministic else 'A_N'}): {len(remaining)} work items")

    batch_size = 1 if threads == 1 else 4 * threads
    while remaining:
        batch = remaining[:batch_size]
        if threads == 1:
            hits = [explore_prefix(w, q, deterministic, batch[0], prune, deadline)]
        else:
            hits = Parallel(n_jobs=threads)(
                delayed(explore_prefix)(w, q, deterministic, prefix, prune, deadline) for prefix in batch
            )
        remaining = remaining[batch_size:]
        found = next((hit for hit in hits if hit is not None), None)
        if found is not None:
            return StateSequence(found, w)
        if on_progress is not None:
            on_progress(remaining)
    return None


# ==================== Exact complexities ====================


def _resume_point(w: Word, cfg: SearchConfig, mode: str) -> Optional[Checkpoint]:
    if not cfg.checkpoint_path:
        return None
    try:
        cp = checkpoint_load(cfg.checkpoint_path)
    except CheckpointError as e:
        logger.warning(f"Ignoring checkpoint: {e}; starting clean")
        return None
    if not cp.matches(word_digest(str(w)), mode):
        logger.warning(f"Checkpoint {cfg.checkpoint_path} belongs to another search; starting clean")
        return None
    logger.info(f"Resuming from checkpoint at q={cp.q} with {len(cp.frontier)} work items")
    return cp


def _exact(w: Word, cfg: SearchConfig, mode: str) -> ComplexityRecord:
    started = time.perf_counter()
    n = len(w)
    deterministic = mode == "AMINUS"
    top = cfg.q_max if cfg.q_max is not None else n + 1
    if top > n + 1:
        raise DomainError(f"q_max must be <= |w|+1 = {n + 1}, got {top}")
    if cfg.q_min > top:
        raise DomainError(f"q_min {cfg.q_min} exceeds q_max {top}")
    deadline = time.time() + cfg.time_budget if cfg.time_budget else None
    digest = word_digest(str(w))

    q = max(cfg.q_min, an_lower(w))
    frontier: Optional[List[Prefix]] = None
    cp = _resume_point(w, cfg, mode)
    if cp is not None:
        if cp.finished:
            return _record(w, mode, StateSequence(cp.result, w), started, "checkpoint")
        if cp.q >= q:
            q, frontier = cp.q, cp.frontier

    def save(q_now: int, items: List[Prefix], result: Optional[Prefix] = None) -> None:
        if cfg.checkpoint_path:
            checkpoint_save(cfg.checkpoint_path, Checkpoint(digest, q_now, mode, list(items), result))

    while q <= top:
        q_now = q
        if frontier is None:
            frontier = build_frontier(w, q, deterministic, cfg.parallel_split_depth, cfg.prune)
        save(q, frontier)
        try:
            seq = search_fixed_q(
                w,
                q,
                deterministic,
                split_depth=cfg.parallel_split_depth,
                threads=cfg.threads,
                prune=cfg.prune,
                deadline=deadline,
                frontier=frontier,
                on_progress=lambda items: save(q_now, items),
            )
        except BudgetExceeded:
            logger.warning(f"Budget exhausted for |w|={n}: value in [{q}, {n + 1}]")
            return _incomplete(w, mode, q, n + 1, started)
        if seq is not None:
            save(q, [], seq.states)
            return _record(w, mode, seq, started, "exact-search")
        frontier = None
        q += 1
    # q_max below A_N^lower leaves the loop unentered
    return _incomplete(w, mode, min(q, n + 1), n + 1, started)


def _record(w: Word, mode: str, seq: StateSequence, started: float, method: str) -> ComplexityRecord:
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"{mode}({w}) = {seq.state_count} in {elapsed:.1f} ms")
    return ComplexityRecord(
        word=str(w),
        length=len(w),
        measure=mode,
        value=seq.state_count,
        witness=list(seq.states),
        elapsed_ms=elapsed,
        method=method,
    )


def _incomplete(w: Word, mode: str, lower: int, upper: int, started: float) -> ComplexityRecord:
    return ComplexityRecord(
        word=str(w),
        length=len(w),
        measure=mode,
        value=lower,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        method="exact-search",
        complete=False,
        lower=lower,
        upper=upper,
    )


def an_exact(w: Word, cfg: Optional[SearchConfig] = None) -> ComplexityRecord:
    """A_N(w): least q admitting a unique-path witness, searched upward from A_N^lower(w)."""
    with search_context("AN", word_digest(str(w))):
        return _exact(w, cfg or SearchConfig(), "AN")


def aminus_exact(w: Word, cfg: Optional[SearchConfig] = None) -> ComplexityRecord:
    """A-(w): as an_exact, restricted to deterministic partial witnesses."""
    cfg = (cfg or SearchConfig()).model_copy(update={"deterministic": True})
    with search_context("AMINUS", word_digest(str(w))):
        return _exact(w, cfg, "AMINUS")
