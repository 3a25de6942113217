"""Finite algebras and their congruences."""
