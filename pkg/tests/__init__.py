"""Tests package for additive-lab."""
