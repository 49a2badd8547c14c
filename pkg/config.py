"""
Bitreg ISA Configuration
"""
import os

# Logging
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# Execution
RUN_STEP_LIMIT = 1_000_000     # steps before a PGLB run is declared diverged

# Shortest program search
SEARCH_MAX_LLOC = 6            # instructions
SEARCH_JOBS = 1                # worker processes
SEARCH_MAX_WITNESSES = 1       # witnesses kept per shard (None keeps all)

# Unfolding
UNFOLD_EXTRA_COPIES = 0        # copies added on top of the measured minimum

# Random generation
DEFAULT_SEED = 20191

# Output
DEFAULT_FORMAT = "human"       # human | tsv | msgpack
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests", "golden")
