"""
Logging for the command line: stderr plus a rotating file under the log dir.

Every record carries a `search` field naming the exact search it came from
(measure and word digest), so progress, budget and checkpoint messages of
several runs can be told apart in the shared log file.
"""

import contextlib
import contextvars
import logging
import logging.handlers
from pathlib import Path
from typing import Iterator

LOG_FILE = "autoplex.log"
NO_SEARCH = "-"

_active_search: contextvars.ContextVar[str] = contextvars.ContextVar("active_search", default=NO_SEARCH)


def search_tag(measure: str, digest: str) -> str:
    return f"{measure}:{digest[:8]}"


@contextlib.contextmanager
def search_context(measure: str, digest: str) -> Iterator[str]:
    """Tag log records emitted inside the block with the given search."""
    token = _active_search.set(search_tag(measure, digest))
    try:
        yield _active_search.get()
    finally:
        _active_search.reset(token)


class SearchContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.search = _active_search.get()
        return True


def configure_logging(log_dir: str = "logs", log_level: int = logging.INFO) -> Path:
    """Route the root logger to stderr and `log_dir`/autoplex.log; returns the log file.

    stdout is left alone so command output stays machine-readable.
    """
    log_path = Path(log_dir)
    log_path.mkdir(parents=True, exist_ok=True)
    log_file = log_path / LOG_FILE

    root = logging.getLogger()
    for h in list(root.handlers):
        root.removeHandler(h)

    formatter = logging.Formatter(
        "%(asctime)s %(levelname)-8s [%(name)s] {%(search)s} %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    context = SearchContextFilter()

    console = logging.StreamHandler()
    # 5 MB per file, five generations
    rotating = logging.handlers.RotatingFileHandler(str(log_file), maxBytes=5_000_000, backupCount=5)
    for handler in (console, rotating):
        handler.setLevel(log_level)
        handler.setFormatter(formatter)
        handler.addFilter(context)
        root.addHandler(handler)
    root.setLevel(log_level)

    root.debug(f"Logging to {log_file}")
    return log_file
