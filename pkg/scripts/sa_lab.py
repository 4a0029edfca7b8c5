#!/usr/bin/env python3
"""sa-lab CLI Script.

Runs scenario ensembles, xi phase scans, Lyapunov certification and the
inequality oracles. See ``sa_lab.py --help``.
"""

import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
