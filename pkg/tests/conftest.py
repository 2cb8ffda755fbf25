"""Make the sibling helper modules (fixtures, oracles) importable as plain
modules from any test file."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
