"""Integration tests for eqra: the command line and end-to-end verification runs."""
