"""eqra - equivalence lattices of relation-algebra closures.

Computes relation-algebra closures of finite sets of binary relations,
extracts their lattices of equivalence relations, evaluates first-order and
primitive positive formulas over finite structures, and emits re-checkable
certificates for every construction.
"""

__version__ = "0.1.0"
