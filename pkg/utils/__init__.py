"""Exact-arithmetic utilities, the input grammar and the error hierarchy."""
