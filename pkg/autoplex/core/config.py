# config.py
"""Central configuration for autoplex.

Environment variables (optionally from a .env file) override the defaults.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from autoplex import __version__

logger = logging.getLogger(__name__)

# Get project root (3 levels up from this file: autoplex/core/config.py -> project root)
PROJECT_ROOT = Path(__file__).parent.parent.parent

TOOL_VERSION = __version__

# Walk counts saturate here; only "exactly one" versus "more" matters
DEFAULT_CAP = 2

# Bisection tolerance for algebraic constants
ROOT_TOL = 1e-12

# Largest alphabet rendered with single decimal digits
MAX_ALPHABET = 9


class AutoplexConfig:
    """Runtime configuration read from the environment."""

    def __init__(self):
        load_dotenv()

        self.cache_path: Optional[str] = os.getenv("AUTOPLEX_CACHE") or None
        self.log_dir = os.getenv("AUTOPLEX_LOG_DIR", "logs")
        self.log_level = os.getenv("AUTOPLEX_LOG_LEVEL", "INFO").upper()
        self.threads = int(os.getenv("AUTOPLEX_THREADS", "1"))
        self.split_depth = int(os.getenv("AUTOPLEX_SPLIT_DEPTH", "4"))

        if self.threads < 1:
            raise ValueError(f"AUTOPLEX_THREADS must be >= 1, got {self.threads}")
        if self.split_depth < 0:
            raise ValueError(f"AUTOPLEX_SPLIT_DEPTH must be >= 0, got {self.split_depth}")

    def log_config(self):
        """Log the current configuration."""
        logger.debug(f"Cache: {self.cache_path or 'disabled'}")
        logger.debug(f"Threads: {self.threads}, split depth: {self.split_depth}")
        logger.debug(f"Log dir: {self.log_dir} (level {self.log_level})")

    def resolve_cache_path(self, cli_value: Optional[str]) -> Optional[str]:
        """AUTOPLEX_CACHE wins over the command-line value."""
        return self.cache_path or cli_value

    def get_log_level(self) -> int:
        return getattr(logging, self.log_level, logging.INFO)


def load_config() -> AutoplexConfig:
    """Read the configuration afresh (environment may change between CLI invocations)."""
    return AutoplexConfig()
