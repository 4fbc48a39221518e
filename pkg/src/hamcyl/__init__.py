"""Counting contractible Hamiltonian cycles on thick grid cylinders.

Two column codings (exterior and interior trees) turn the count into walks
on finite digraphs; a backtracking enumerator checks both on small grids,
and the resulting series are fitted with exact rational generating functions.
"""

__version__ = "0.1.0"

from .columns import EXT, INT, ColumnDigraph
from .transfer_engine import ORACLE, digraph, h_contractible, phi, series

__all__ = ["EXT", "INT", "ORACLE", "ColumnDigraph", "digraph", "h_contractible", "phi", "series",
           "__version__"]
