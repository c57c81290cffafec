"""
cuspforge

Exact computation of cuspidal divisor class groups and delta-bar
determinants for Drinfeld modular curves X_0(p^r).
"""

__version__ = "1.0.0"
