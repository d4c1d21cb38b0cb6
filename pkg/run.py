#!/usr/bin/env python3
"""
Main entry point for autoplex.
Run this file with the same arguments as the `autoplex` command.
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from autoplex.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
