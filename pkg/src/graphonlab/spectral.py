"""Kernel operators on L^2(mu): eigendecomposition and spectral truncation.

The operator ``(Wf)(x) = sum_y W(x, y) f(y) mu(y)`` is similar to the
symmetric matrix ``D^1/2 K D^1/2`` with ``D = diag(mu)``; eigenvectors are
stored in those conjugated coordinates.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .core import Graphon, GraphonError, Kernel, SignedKernel, make_graphon

TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("rank,eigenvalue\n")
        for i, lam in enumerate(self.eigenvalues.tolist()):
            buf.write(f"{i},{lam!r}\n")
        return buf.getvalue()

    def hs_norm_sq(self) -> float:
        return math.fsum((self.eigenvalues**2).tolist())

    def retained(self, r: float) -> np.ndarray:
        """Mask of eigenvalues kept by truncation at ``r``; ties within 1e-12 are kept."""
        return np.abs(self.eigenvalues) >= r - TIE_TOL

    def ties(self, r: float) -> np.ndarray:
        return self.eigenvalues[np.abs(np.abs(self.eigenvalues) - r) <= TIE_TOL]


def conjugated_matrix(g: Graphon) -> np.ndarray:
    s = np.sqrt(g.weights)
    m = s[:, None] * g.K * s[None, :]
    return (m + m.T) / 2


def eigendecompose(g: Graphon) -> Spectrum:
    if not np.all(np.isfinite(g.K)):
        raise GraphonError("kernel has non-finite entries")
    lam, vec = np.linalg.eigh(conjugated_matrix(g))
    order = np.lexsort((-lam, -np.abs(lam)))
    return Spectrum(lam[order], vec[:, order])


def weighted_frobenius_sq(g: Graphon) -> float:
    """``sum_ij K_ij^2 mu_i mu_j``, the squared Hilbert-Schmidt norm."""
    w = g.weights
    return float(np.einsum("i,ij,j->", w, g.K**2, w))


def truncate(g: Graphon, r: float, spectrum: Spectrum | None = None, clip: bool = False) -> Graphon:
    """Keep the eigenspaces with ``|lambda| >= r``.

    The result is stored as a signed kernel.  ``clip=True`` additionally
    clamps entries to [0, 1] and returns an ordinary kernel; clipping breaks
    the spectral identities, so it is off by default.
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    if np.any(g.weights == 0):
        raise GraphonError("zero-weight points must be removed before truncation")
    decomp = spectrum if spectrum is not None else eigendecompose(g)
    keep = decomp.retained(r)
    v = decomp.eigenvectors[:, keep]
    m = (v * decomp.eigenvalues[keep]) @ v.T
    inv_s = 1.0 / np.sqrt(g.weights)
    k = inv_s[:, None] * m * inv_s[None, :]
    k = (k + k.T) / 2
    if clip:
        return make_graphon(g.grid, Kernel(np.clip(k, 0.0, 1.0)))
    return make_graphon(g.grid, SignedKernel(k))


def truncation_error(g: Graphon, r: float, spectrum: Spectrum | None = None) -> float:
    """Hilbert-Schmidt norm of ``g - [g]_r``."""
    if r <= 0:
        raise ValueError("r must be > 0")
    if np.any(g.weights == 0):
        raise GraphonError("zero-weight points must be removed before truncation")
    decomp = spectrum if spectrum is not None else eigendecompose(g)
    tail = decomp.eigenvalues[~decomp.retained(r)]
    return math.sqrt(math.fsum((tail**2).tolist()))


def truncation_sweep(g: Graphon, rs) -> list[dict]:
    decomp = eigendecompose(g)
    return [
        {
            "r": float(r),
            "retained_count": int(decomp.retained(r).sum()),
            "hs_error": truncation_error(g, r, decomp),
        }
        for r in rs
    ]


def truncation_sweep_json(g: Graphon, rs) -> str:
    return json.dumps(truncation_sweep(g, rs))
