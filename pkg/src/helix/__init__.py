"""Desk-scale computations for a flopped curve: affine roots restricted to
a rank-2 lattice, central-charge phases, quiver-module Ext calculus,
mutation words and the spread-reduction procedure."""

__version__ = "0.1.0"
