"""
cocart - derived functors of finite categories via localized correspondences.

Builds the cocartesian fibration of a functor, localizes it at a marking,
decides cocartesianness and extracts derived functors and adjunctions.
"""

__version__ = "0.1.0"
