import sys
from pathlib import Path

# make the straight-line reference importable from test modules
sys.path.insert(0, str(Path(__file__).parent))
