"""
Command-line interface: run, compare, oracle-lqr and check.
"""

from .cli import main

__all__ = ["main"]
