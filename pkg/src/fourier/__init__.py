"""Fourier analysis on F_p^n."""

from src.fourier.chang import ChangReport, chang_check
from src.fourier.density import (
    DensityFn,
    constant,
    convolve,
    density,
    fn_inner,
    indicator,
    lq_norm,
)
from src.fourier.transform import SpectrumTable, invert, spectrum, transform

__all__ = [
    "ChangReport",
    "DensityFn",
    "SpectrumTable",
    "chang_check",
    "constant",
    "convolve",
    "density",
    "fn_inner",
    "indicator",
    "invert",
    "lq_norm",
    "spectrum",
    "transform",
]
