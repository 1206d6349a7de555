"""The Fourier transform on F_p^n and large spectra.

    h^(u) = E_x h(x) w^{<u,x>},   w = exp(2 pi i / p)
    h(x)  = sum_u h^(u) w^{-<u,x>}

so that the transform of a set X (through rho_X) is X^(u) = E_{x in X} w^{<u,x>}.
"""

import logging
from typing import Literal

import numpy as np

from src.config import settings
from src.errors import ContextMismatchError, DimensionMismatchError, EmptySetError
from src.fourier.density import DIRECT_BLOCK, DensityFn, density
from src.fpn.group import GroupCtx
from src.fpn.sets import FpSet

logger = logging.getLogger(__name__)


class SpectrumTable:
    """Complex Fourier coefficients indexed by frequency u."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: GroupCtx, coeffs: np.ndarray):
        coeffs = np.array(coeffs, dtype=np.complex128, copy=True)
        if coeffs.shape != (ctx.order,):
            raise DimensionMismatchError(
                f"spectrum table must have shape ({ctx.order},), got {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        self.ctx = ctx
        self.coeffs = coeffs

    def __getitem__(self, u: int) -> complex:
        return complex(self.coeffs[u])

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coeffs)

    def reflect(self) -> "SpectrumTable":
        """The table u -> h^(-u)."""
        return SpectrumTable(self.ctx, self.coeffs[self.ctx.neg_table])

    def __mul__(self, other: "SpectrumTable") -> "SpectrumTable":
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
        return SpectrumTable(self.ctx, self.coeffs * other.coeffs)

    def __repr__(self) -> str:
        return f"SpectrumTable({self.ctx}, coeff(0)={self.coeffs[0]:.6g})"


def character_block(ctx: GroupCtx, us: np.ndarray, sign: int = 1) -> np.ndarray:
    """Matrix w^{sign <u,x>} for the frequencies us against every x."""
    xs = np.arange(ctx.order)
    phases = ctx.inner_indices(us[:, None], xs[None, :])
    return np.exp(sign * 2j * np.pi * phases / ctx.p)


def _transform_direct(h: DensityFn) -> np.ndarray:
    ctx = h.ctx
    out = np.empty(ctx.order, dtype=np.complex128)
    for start in range(0, ctx.order, DIRECT_BLOCK):
        us = np.arange(start, min(start + DIRECT_BLOCK, ctx.order))
        out[us] = character_block(ctx, us) @ h.values / ctx.order
    return out


def _transform_fast(h: DensityFn) -> np.ndarray:
    ctx = h.ctx
    return np.fft.ifftn(h.values.reshape((ctx.p,) * ctx.n)).ravel()


def transform(
    h: DensityFn | FpSet, method: Literal["fast", "direct"] | None = None
) -> SpectrumTable:
    """Full table of Fourier coefficients of a function, or of a set X via rho_X.

    Raises:
        EmptySetError: If given the empty set
    """
    if isinstance(h, FpSet):
        h = density(h)
    method = method or settings.transform_method
    if method == "direct":
        coeffs = _transform_direct(h)
    else:
        coeffs = _transform_fast(h)
    return SpectrumTable(h.ctx, coeffs)


def invert(S: SpectrumTable) -> DensityFn:
    """h(x) = sum_u h^(u) w^{-<u,x>}; the imaginary residue is dropped."""
    ctx = S.ctx
    values = np.fft.fftn(S.coeffs.reshape((ctx.p,) * ctx.n)).ravel()
    residue = float(np.abs(values.imag).max())
    if residue > settings.fourier_tolerance * max(1.0, float(np.abs(values).max())):
        logger.debug(f"inverse transform has imaginary residue {residue:.3g}")
    return DensityFn(ctx, values.real)


def spectrum(X: FpSet, gamma: float) -> FpSet:
    """Spec_gamma(X) = {u : |X^(u)| >= gamma}, with a small tolerance on the threshold."""
    if X.is_empty():
        raise EmptySetError("spectrum of the empty set")
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    mags = transform(X).magnitudes()
    return FpSet(X.ctx, mags >= gamma - settings.spectrum_tolerance)
