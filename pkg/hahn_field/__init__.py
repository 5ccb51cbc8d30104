"""
hahnfield main package.

Hahn-series fields over value chains, their asymptotic couples and
derivations, and the computation of differential ranks.
"""

__version__ = "0.1.0"
__author__ = "The hahnfield Team"
