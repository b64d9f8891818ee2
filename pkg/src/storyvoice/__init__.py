"""Story graphs to personality-styled monologic and dialogic tellings."""

from pathlib import Path

__version__ = "0.1.0"

DATA_DIR = Path(__file__).parent / "data"
