"""Certificates and the verification suites that produce them."""
