"""
Configuration Profiles for Different Workloads

Copy one of these profiles into a .env file (or export the variables) to
tune the search bounds without touching constants/config.py.
"""

# ==============================================================================
# PROFILE 1: FAST CI RUN
# ==============================================================================

# ORACLE_BOUND=64
# CONJ_BOUND=8
# PARTITION_CAP=8
# SHAPE_SEARCH_BOUND=30
# REALIZATION_SEARCH_LIMIT=500
# MAX_WORKERS=2
# LOG_LEVEL=WARNING

# ==============================================================================
# PROFILE 2: EXHAUSTIVE ORACLE CROSS-CHECKS
# ==============================================================================

# ORACLE_BOUND=4096
# REALIZATION_SEARCH_RESIDUE=16
# REALIZATION_SEARCH_LIMIT=20000
# LOG_LEVEL=INFO

# ==============================================================================
# PROFILE 3: WIDE TORUS-BUNDLE CONJUGACY SEARCH
# ==============================================================================

# CONJ_BOUND=60
# MAX_WORKERS=16

# ==============================================================================
# PROFILE 4: LARGE SEIFERT DATA (MANY CONE POINTS)
# ==============================================================================

# PARTITION_CAP=14
# SHAPE_SEARCH_BOUND=120
# LOG_LEVEL=DEBUG

# ==============================================================================
# HOW TO USE
# ==============================================================================

# 1. Pick the profile closest to your workload
# 2. Copy its lines (without the leading "# ") into .env at the repository root
# 3. Run the tool: python app.py verdict --batch manifolds.txt --out verdicts.csv
# 4. Flags such as --oracle-bound and --conj-bound still override .env per run

# ==============================================================================
# NOTES
# ==============================================================================

# - Above ORACLE_BOUND the 2-adic isomorphism test may answer Unknown (exit code 2)
# - Partition enumeration grows like the Bell numbers; PARTITION_CAP above 14 is slow
# - A verdict that hits CONJ_BOUND or SHAPE_SEARCH_BOUND is reported as limited_by_bound
