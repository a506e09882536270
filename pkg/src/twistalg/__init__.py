"""Finite-scale computations with group 2-cocycles, central extensions,
torsor bundles and twisted group algebras.

Everything cohomological is exact (roots-of-unity exponents, Smith normal
form over the integers); numerical linear algebra is used only to find
matrix block decompositions of finite-dimensional *-algebras, and is always
cross-checked against an exact block count.
"""

__version__ = "0.1.0"
