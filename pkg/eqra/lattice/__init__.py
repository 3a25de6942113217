"""Equivalence-relation lattices of closed relation families."""
