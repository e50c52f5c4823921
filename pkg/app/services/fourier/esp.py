"""
Elementary symmetric polynomials over the last array axis.
"""

from typing import Optional, Sequence

import numpy as np

from app.core.config import settings


def elementary_symmetric(z: np.ndarray) -> np.ndarray:
    """
    ESPs of the last axis: out[..., s] = e_s(z[..., :]) for s = 0..k.

    Built by the product recurrence e_s <- e_s + z_j e_{s-1}.
    """
    z = np.asarray(z, dtype=float)
    k = z.shape[-1]
    out = np.zeros(z.shape[:-1] + (k + 1,))
    out[..., 0] = 1.0
    for j in range(k):
        head = out[..., : j + 1]
        out[..., 1 : j + 2] = out[..., 1 : j + 2] + z[..., j : j + 1] * head
    return out


def esp_coeffs(values: Sequence[float]) -> np.ndarray:
    """Coefficients of prod_j (t + a_j) from t^0 up; entry j is e_{k-j}."""
    return elementary_symmetric(np.asarray(values, dtype=float))[::-1]


def leave_one_out(
    z: np.ndarray, esp: np.ndarray, limit: Optional[float] = None
) -> np.ndarray:
    """
    ESPs of z with one coordinate removed.

    out[..., i, s] = e_s(z without z_i) for s = 0..k-1. Deflates with
    e_s(z_-i) = e_s(z) - z_i e_{s-1}(z_-i) where |z_i| <= limit; other
    coordinates are recomputed with z_i set to 0.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        return leave_one_out(z[None, :], np.asarray(esp)[None, :], limit)[0]

    limit = settings.DEFLATION_LIMIT if limit is None else limit
    k = z.shape[-1]
    out = np.empty(z.shape + (k,))
    out[..., 0] = 1.0
    for s in range(1, k):
        out[..., s] = esp[..., s, None] - z * out[..., s - 1]

    unstable = np.abs(z) > limit
    if unstable.any():
        positions = np.nonzero(unstable)
        zeroed = z[positions[:-1]].copy()
        zeroed[np.arange(zeroed.shape[0]), positions[-1]] = 0.0
        out[positions] = elementary_symmetric(zeroed)[:, :k]
    return out
