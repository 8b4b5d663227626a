"""Exact computer algebra for twisted Drinfeld doubles.

Builds the modular category of a finite group's double, equips it with the
autoequivalence coming from a finite-order group automorphism, and computes
the resulting crossed S-matrices, fusion-type algebras and Shintani descent
data -- all in exact cyclotomic arithmetic.
"""

__version__ = "0.1.0"
