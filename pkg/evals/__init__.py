"""Experiment infrastructure for the additive-combinatorics lab.

This package provides the experiment runner organized by experiment family:
- tasks/additive/: sumsets, Plunnecke, shift sets, almost-periodicity, Bogolyubov-Ruzsa
- tasks/spectral/: Chang's bound
- tasks/nmc/: tampering distances and affine-evasive sets
- tasks/lintest/: linearity testing

Use the harness to run experiments:
    python -m evals.harness brz-verify --p 2 --n 4 --instances 200 --seed 7
    python -m evals.harness --list
"""
