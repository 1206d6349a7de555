"""Experiment tasks.

This package contains one runner module per experiment family:
- additive/: sumsets, Plunnecke, shift sets, almost-periodicity, Bogolyubov-Ruzsa
- spectral/: Chang's bound on large spectra
- nmc/: tampering distances and affine-evasive sets
- lintest/: linearity test acceptance and soundness
"""
