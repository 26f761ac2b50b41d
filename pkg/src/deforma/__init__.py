"""deforma: exact-arithmetic deformation-theoretic calculus.

Rational (tolerance-zero) linear algebra over graded vector spaces,
differential graded Lie algebras, Maurer-Cartan and gauge theory over
Artin coefficient rings, arity-truncated convolution algebras, Cartan
homotopies and the transports, homotopy limits and period maps they induce.
"""

__version__ = "0.1.0"
