"""
Search checkpoints.

Line format:
    <digest> <q> <mode>
    result: <s_0 s_1 ...>        (only once a witness has been found)
    <prefix states>              (one unexplored canonical prefix per line)

Every q below the header's q has already been exhausted. Writes go through a
temporary file and an atomic rename so an interrupted write never leaves a torn file.
"""

import hashlib
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from autoplex.core.errors import CheckpointError

logger = logging.getLogger(__name__)

Prefix = Tuple[int, ...]

MODES = ("AN", "AMINUS")


def word_digest(word: str) -> str:
    return hashlib.sha256(word.encode("ascii")).hexdigest()


@dataclass
class Checkpoint:
    digest: str
    q: int
    mode: str
    frontier: List[Prefix] = field(default_factory=list)
    result: Optional[Prefix] = None

    @property
    def finished(self) -> bool:
        return self.result is not None

    def matches(self, digest: str, mode: str) -> bool:
        return self.digest == digest and self.mode == mode


def _format(cp: Checkpoint) -> str:
    lines = [f"{cp.digest} {cp.q} {cp.mode}"]
    if cp.result is not None:
        lines.append("result: " + " ".join(map(str, cp.result)))
    lines.extend(" ".join(map(str, prefix)) for prefix in cp.frontier)
    return "\n".join(lines) + "\n"


def checkpoint_save(path: Union[str, Path], cp: Checkpoint) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(_format(cp))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Checkpoint saved to {path}: q={cp.q}, {len(cp.frontier)} prefixes left")


def checkpoint_load(path: Union[str, Path]) -> Checkpoint:
    """
    Raises:
        CheckpointError: if the file is missing, truncated or malformed
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    if not lines:
        raise CheckpointError(f"checkpoint {path} is empty")

    header = lines[0].split()
    if len(header) != 3 or header[2] not in MODES or len(header[0]) != 64:
        raise CheckpointError(f"checkpoint {path} has a malformed header: {lines[0]!r}")
    try:
        q = int(header[1])
        result = None
        frontier: List[Prefix] = []
        for line in lines[1:]:
            if line.startswith("result:"):
                result = tuple(int(x) for x in line[len("result:") :].split())
            elif line.strip():
                frontier.append(tuple(int(x) for x in line.split()))
    except ValueError as e:
        raise CheckpointError(f"checkpoint {path} is corrupt: {e}") from e

    if q < 1 or any(not prefix or prefix[0] != 0 for prefix in frontier):
        raise CheckpointError(f"checkpoint {path} holds an invalid state count or prefix")
    return Checkpoint(digest=header[0], q=q, mode=header[2], frontier=frontier, result=result)
