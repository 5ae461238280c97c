"""Eisenstein-Kronecker engine for CM elliptic curves.

Three computation paths over one flagship configuration
(E: y^2 = 4x^3 - 4x over Q(i), p = 13, pi = 3+2i):

* a multiprecision complex-analytic engine for the Eisenstein-Kronecker-Lerch
  series and the Kronecker theta function,
* an exact engine over Q(sqrt(-D)) for Laurent expansions at torsion points,
* a p-adic engine realizing the Coleman-function analogues on residue discs,
  up to the specialization of the polylogarithm sheaf and its Ext class.

The three paths cross-validate each other at torsion points.
"""

__version__ = "0.1.0"
