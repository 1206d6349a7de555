"""Spectral experiments."""
