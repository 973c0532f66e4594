"""
Max-plus statistical leverage scores: exact scores, max-plus approximations,
leverage-sampled least squares and Puiseux-series asymptotics.
"""

__version__ = "0.1.0"
