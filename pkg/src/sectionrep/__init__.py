"""Bounded unitary representation calculus for section algebras, desk scale.

Subpackages cover root data and Weyl combinatorics (:mod:`rootdata`),
exact highest-weight matrix constructions with operator norms
(:mod:`irrep`), evaluation representations and inducibility classification
(:mod:`evalrep`), infinite tensor product and factor-type criteria
(:mod:`uhf`), the boundary growth condition (:mod:`boundary`), and
multiplicative character factorization (:mod:`charfactor`).  A JSON-speaking
command line lives in :mod:`cli`.
"""

__version__ = "0.1.0"

DEFAULT_SEED = 20260809
