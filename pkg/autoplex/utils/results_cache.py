"""
Results Cache
Append-only JSONL store of computed complexities, keyed by word digest and measure.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from pydantic import ValidationError

from autoplex.core.config import TOOL_VERSION
from autoplex.core.errors import CacheInconsistency
from autoplex.core.schemas import CacheEntry, ComplexityRecord
from autoplex.utils.checkpoint import word_digest

logger = logging.getLogger(__name__)


class ResultsCache:
    """
    One JSON object per line. Entries are never rewritten; a recomputation that
    disagrees with a stored value is an error.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._entries: Dict[Tuple[str, str], CacheEntry] = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path) as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    entry = CacheEntry.model_validate_json(line)
                except ValidationError as e:
                    logger.warning(f"Skipping unreadable cache line {lineno} in {self.path}: {e.error_count()} errors")
                    continue
                self._entries[(entry.digest, entry.measure)] = entry
        logger.debug(f"Loaded {len(self._entries)} cache entries from {self.path}")

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, word: str, measure: str) -> Optional[CacheEntry]:
        return self._entries.get((word_digest(word), measure))

    def check(self, record: ComplexityRecord) -> None:
        """
        Raises:
            CacheInconsistency: if the cache holds a different value for this word and measure
        """
        cached = self.lookup(record.word, record.measure)
        if cached is not None and record.complete and cached.value != record.value:
            raise CacheInconsistency(
                f"{record.measure}({record.word}) computed as {record.value} but cached as {cached.value} "
                f"(tool version {cached.tool_version})"
            )

    def store(self, record: ComplexityRecord) -> CacheEntry:
        """Append a complete record unless an identical entry is already present."""
        self.check(record)
        existing = self.lookup(record.word, record.measure)
        if existing is not None:
            return existing
        entry = CacheEntry(
            digest=word_digest(record.word),
            word=record.word,
            measure=record.measure,
            value=record.value,
            witness=record.witness,
            family=record.family,
            tool_version=TOOL_VERSION,
            timestamp=datetime.now().isoformat(),
        )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as f:
            f.write(entry.model_dump_json() + "\n")
        self._entries[(entry.digest, entry.measure)] = entry
        logger.info(f"Cached {record.measure}({record.word[:16]}{'...' if record.length > 16 else ''}) = {record.value}")
        return entry

    def as_record(self, entry: CacheEntry) -> ComplexityRecord:
        return ComplexityRecord(
            word=entry.word,
            length=len(entry.word),
            measure=entry.measure,
            value=entry.value,
            witness=entry.witness,
            family=entry.family,
            method="cache",
        )
