# waveshape/utils/config.py
import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

# Runtime settings
LOG_LEVEL = os.getenv("WAVESHAPE_LOG_LEVEL", "WARNING").upper()
_THREADS_RAW = os.getenv("WAVESHAPE_THREADS", "0")

# Set up directories
BASE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
DATA_DIR = os.getenv("WAVESHAPE_DATA_DIR", os.path.join(BASE_DIR, "data"))
PLAYSPORT_CSV = os.path.join(DATA_DIR, "playsport.csv")

# Grouping search
MAX_EXHAUSTIVE_INPUTS = 10

# Baseline (LMS) defaults
DEFAULT_LEARNING_RATE = 0.05
DEFAULT_EPOCHS = 500
DEFAULT_INIT_SCALE = 0.5

# Experiment defaults
DEFAULT_SEED = 1
DEFAULT_HOLDOUT = 0.25
DEFAULT_TRIALS = 100


def thread_count(raw: Optional[str] = None) -> int:
    """
    Resolve the number of worker threads for partition scoring.

    Args:
        raw: Override for the WAVESHAPE_THREADS value (mainly for tests)

    Returns:
        Worker count, at least 1. 0 or unset means one per CPU.
    """
    value = _THREADS_RAW if raw is None else raw
    try:
        threads = int(value or 0)
    except ValueError:
        logger.warning("Ignoring invalid WAVESHAPE_THREADS=%r", value)
        threads = 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr; stdout is reserved for reports."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level or LOG_LEVEL)
