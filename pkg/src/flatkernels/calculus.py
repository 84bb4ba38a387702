"""Finite-difference Dirac and Laplace operators.

These stencils are the independent oracles used throughout the test suite:
a field passes a monogenicity/harmonicity check only if its FD residual is
small, regardless of how the field was constructed.  Default step 1e-3 with
order-4 stencils balances truncation against roundoff for fields that stay
O(1) away from their singularities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .clifford import MultiVector, gp

# (offset multiples of h, weight); weights already include the 1/h power.
_D1 = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)),
}
_D2 = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: (
        (-2, -1.0 / 12.0),
        (-1, 16.0 / 12.0),
        (0, -30.0 / 12.0),
        (1, 16.0 / 12.0),
        (2, -1.0 / 12.0),
    ),
}


@dataclass(frozen=True)
class FDScheme:
    """Central stencil: step h > 0, order 2 or 4."""

    h: float = 1e-3
    order: int = 4

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("FD step must be positive")
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")


def _to_mv(value, n: int) -> MultiVector:
    if isinstance(value, MultiVector):
        return value
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return MultiVector.scalar(n, float(arr))
    if arr.shape == (n,):
        return MultiVector.from_vector(arr)
    if arr.shape == (1 << n,):
        return MultiVector(n, arr)
    raise ValueError(f"cannot interpret field value of shape {arr.shape} in Cl_{n}")


def _partial(f, x: np.ndarray, j: int, s: FDScheme) -> MultiVector:
    n = x.shape[0]
    acc = MultiVector.zero(n)
    for off, w in _D1[s.order]:
        xp = x.copy()
        xp[j] += off * s.h
        acc = acc + _to_mv(f(xp), n) * (w / s.h)
    return acc


def dirac_fd(f: Callable, x, s: FDScheme = FDScheme(), side: str = "left") -> MultiVector:
    """FD Dirac operator: sum_j e_j d_j f (left) or sum_j (d_j f) e_j (right)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    acc = MultiVector.zero(n)
    for j in range(n):
        df = _partial(f, x, j, s)
        ej = MultiVector.basis_vector(n, j)
        acc = acc + (ej * df if side == "left" else df * ej)
    return acc


def laplace_fd(f: Callable, x, s: FDScheme = FDScheme()) -> MultiVector:
    """FD Laplacian applied componentwise to a Clifford-valued field."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    acc = MultiVector.zero(n)
    h2 = s.h * s.h
    for j in range(n):
        for off, w in _D2[s.order]:
            xp = x.copy()
            xp[j] += off * s.h
            acc = acc + _to_mv(f(xp), n) * (w / h2)
    return acc


# -- batched residuals for lattice-kernel fields ------------------------------
#
# Kernel fields evaluate whole point batches at once; building the full
# stencil point set first keeps an FD sweep over many samples to a handful of
# kernel evaluations.


def _coerce_batch(vals: np.ndarray, n: int) -> np.ndarray:
    vals = np.asarray(vals, dtype=float)
    dim = 1 << n
    if vals.ndim == 1:  # scalar field
        out = np.zeros(vals.shape + (dim,))
        out[..., 0] = vals
        return out
    if vals.shape[-1] == dim:
        return vals
    if vals.shape[-1] == n:  # vector field
        out = np.zeros(vals.shape[:-1] + (dim,))
        for j in range(n):
            out[..., 1 << j] = vals[..., j]
        return out
    raise ValueError(f"cannot interpret batched field values of shape {vals.shape}")


def _stencil_points(X: np.ndarray, offsets, h: float) -> np.ndarray:
    """All X shifted along every axis by every offset: (S, B, n) flattened."""
    B, n = X.shape
    pts = []
    for j in range(n):
        for off in offsets:
            P = X.copy()
            P[:, j] += off * h
            pts.append(P)
    return np.concatenate(pts, axis=0)


def dirac_residual_batch(field, X, s: FDScheme = FDScheme(), side: str = "left") -> np.ndarray:
    """Norm of the FD Dirac of a batched field at each row of X.

    `field` maps an (M, n) point array to (M,), (M, n) or (M, 2^n) values.
    Returns the coefficient-norm of the residual, shape (B,).
    """
    X = np.asarray(X, dtype=float)
    B, n = X.shape
    offsets = [off for off, _ in _D1[s.order]]
    weights = [w for _, w in _D1[s.order]]
    vals = _coerce_batch(field(_stencil_points(X, offsets, s.h)), n)
    vals = vals.reshape(n, len(offsets), B, 1 << n)
    dim = 1 << n
    res = np.zeros((B, dim))
    for j in range(n):
        df = np.zeros((B, dim))
        for si, w in enumerate(weights):
            df += (w / s.h) * vals[j, si]
        ej = np.zeros(dim)
        ej[1 << j] = 1.0
        res += gp(ej, df, n) if side == "left" else gp(df, ej, n)
    return np.linalg.norm(res, axis=1)


def laplace_residual_batch(field, X, s: FDScheme = FDScheme()) -> np.ndarray:
    """Norm of the FD Laplacian of a batched field at each row of X."""
    X = np.asarray(X, dtype=float)
    B, n = X.shape
    offsets = [off for off, _ in _D2[s.order] if off != 0]
    weights = {off: w for off, w in _D2[s.order]}
    vals = _coerce_batch(field(_stencil_points(X, offsets, s.h)), n)
    vals = vals.reshape(n, len(offsets), B, 1 << n)
    center = _coerce_batch(field(X), n)
    h2 = s.h * s.h
    res = np.zeros((B, 1 << n))
    for j in range(n):
        for si, off in enumerate(offsets):
            res += (weights[off] / h2) * vals[j, si]
        res += (weights[0] / h2) * center
    return np.linalg.norm(res, axis=1)
