"""Deterministic figure rendering for robustbayes CSV artifacts."""

__version__ = "0.1.0"

from .render import KINDS, render

__all__ = ["KINDS", "render"]
