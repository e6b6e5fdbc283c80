"""Exact analysis of diagonal gates acting on CSS and stabilizer codes."""

from . import channel, conditions, css, f2, gates, gencoef, msd, oracle, stab

__all__ = [
    "channel", "conditions", "css", "f2", "gates", "gencoef", "msd",
    "oracle", "stab",
]

__version__ = "0.1.0"
