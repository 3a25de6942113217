"""Utility modules for eqra."""
