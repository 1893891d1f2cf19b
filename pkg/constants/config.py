"""
Configuration module for the Seifert embedding toolkit.
Centralizes all configuration settings and constants.

Every value can be overridden through environment variables or a .env file.
Command-line flags take precedence over these defaults.
"""

import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# ==============================================================================
# SEARCH BOUNDS - TRADE EXHAUSTIVENESS AGAINST RUNTIME
# ==============================================================================

# Largest group order the brute-force pairing oracles will enumerate
ORACLE_BOUND = int(os.getenv("ORACLE_BOUND", "256"))

# Entry bound for conjugating matrices in the torus-bundle search
CONJ_BOUND = int(os.getenv("CONJ_BOUND", "20"))

# Largest number of cone points for exhaustive set-partition enumeration
PARTITION_CAP = int(os.getenv("PARTITION_CAP", "12"))

# Bound on the integers p, r searched for the k=2e shape criterion
SHAPE_SEARCH_BOUND = int(os.getenv("SHAPE_SEARCH_BOUND", "60"))

# Residues of beta tried per slot when completing a realization by search
REALIZATION_SEARCH_RESIDUE = int(os.getenv("REALIZATION_SEARCH_RESIDUE", "8"))

# Most candidate data verified before a realization gives up
REALIZATION_SEARCH_LIMIT = int(os.getenv("REALIZATION_SEARCH_LIMIT", "4000"))

# ==============================================================================
# EXECUTION
# ==============================================================================

# Thread pool size for batch evaluation
MAX_WORKERS = int(os.getenv("MAX_WORKERS", "8"))

# Root log level applied by the command line entry point
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# ==============================================================================
# OUTPUT
# ==============================================================================

# Version tag written into every JSON report (see docs/schema.md)
SCHEMA_VERSION = os.getenv("SCHEMA_VERSION", "1.0")

# Verdict category filter: "topological", "smooth" or "both"
CATEGORY_OPTIONS = ["topological", "smooth", "both"]
DEFAULT_CATEGORY = os.getenv("DEFAULT_CATEGORY", "both")

# Exit codes of the command line tool
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNKNOWN_BOUND = 2
