"""Meander combinatorics and exactly certified adapted pairs for the
two-block parabolics of sl(n)."""

from . import rootlab, meander, slicebuild, verify

__all__ = ["rootlab", "meander", "slicebuild", "verify"]
__version__ = "0.1.0"
