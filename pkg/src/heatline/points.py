"""Complex n-tuples: bilinear dot product, Euclidean modulus, inequality slacks.

The dot product here is bilinear, z . w = sum_j z_j w_j with no conjugation;
every kernel and transform in this package pairs points that way.  The
modulus is the usual Euclidean one, |z| = (sum_j |z_j|^2)^(1/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a 1-d float64 or complex128 array, checking ``dim``."""
    a = np.atleast_1d(np.asarray(x))
    if a.ndim != 1:
        raise ValueError(f"a point must be a 1-d tuple, got shape {a.shape}")
    if a.size == 0:
        raise ValueError("a point needs at least one coordinate")
    if np.iscomplexobj(a):
        a = a.astype(np.complex128)
    else:
        a = a.astype(np.float64)
    if dim is not None and a.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {a.shape[0]}")
    return a


def dot(z, w):
    """Bilinear dot product sum_j z_j w_j (no conjugation).

    Accepts arrays of shape (..., n); the product is taken over the last
    axis, so batches of points are paired elementwise.
    """
    z = np.atleast_1d(np.asarray(z))
    w = np.atleast_1d(np.asarray(w))
    if z.shape[-1] != w.shape[-1]:
        raise ValueError(
            f"dimension mismatch: {z.shape[-1]} vs {w.shape[-1]}"
        )
    out = np.sum(z * w, axis=-1)
    return out[()] if out.ndim == 0 else out


def modulus(z):
    """Euclidean modulus (sum_j |z_j|^2)^(1/2) over the last axis."""
    z = np.atleast_1d(np.asarray(z))
    out = np.sqrt(np.sum((z * np.conj(z)).real, axis=-1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class InequalityReport:
    """Nonnegative slack in the Cauchy-Schwarz and triangle inequalities."""

    cs_slack: float
    tri_slack: float


def check_inequalities(z, w) -> InequalityReport:
    """Slack |z||w| - |z.w| and |z| + |w| - |z+w| for a pair of points.

    Both slacks are >= 0 up to roundoff for every pair; the property suite
    samples this at scale.
    """
    z = as_point(z)
    w = as_point(w, dim=z.shape[0])
    cs = modulus(z) * modulus(w) - abs(dot(z, w))
    tri = modulus(z) + modulus(w) - modulus(z + w)
    return InequalityReport(cs_slack=float(cs), tri_slack=float(tri))
