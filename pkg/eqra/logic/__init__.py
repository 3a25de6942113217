"""First-order formulas, relation-algebra terms and primitive positive queries."""
