"""Configuration management for eqra."""
