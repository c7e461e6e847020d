"""Cohesive presheaf toposes over finite sites."""

__version__ = "0.1.0"
