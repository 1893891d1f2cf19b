"""Configuration constants for the toolkit."""
