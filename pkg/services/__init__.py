"""Domain services: manifolds, linking pairings, verdicts, realization and reports."""
