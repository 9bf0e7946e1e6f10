"""Executable constructions around isotypic but non-isomorphic structures:
lexicographic orders and their distances, Ehrenfeucht-Fraisse games,
distance-profile types, Archimedean classes of lexicographic groups and
truncated Hahn-series valued fields."""

from .orders import (INF, INT, NAT, RAT, Fin, Int, Lex, Nat, OrderExpr, Rat,
                     compare, dist, enumerate_order, interval_size, is_dense, is_discrete)

__version__ = "0.1.0"
