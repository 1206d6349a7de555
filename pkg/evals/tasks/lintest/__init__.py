"""Linearity-test experiments."""
