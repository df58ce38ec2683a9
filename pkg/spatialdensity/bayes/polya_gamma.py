from typing import Union

import numpy as np
from polyagamma import random_polyagamma

ArrayLike = Union[float, np.ndarray]


def sample_polya_gamma(b, psi, rng: np.random.Generator) -> ArrayLike:
    """
    Exact draws from PG(b, psi) for integer ``b >= 0``.

    Each draw is a sum of ``b`` PG(1, psi) variables from Devroye's exact
    rejection sampler. ``b = 0`` gives the point mass at 0.

    Args:
        b: Integer shape(s), scalar or array.
        psi: Tilting parameter(s), broadcast against ``b``.
        rng (np.random.Generator): Source of randomness.
    """
    b_arr, psi_arr = np.broadcast_arrays(
        np.asarray(b, dtype=np.int64), np.asarray(psi, dtype=float)
    )
    if np.any(b_arr < 0):
        raise ValueError("Polya-Gamma shape must be non-negative")

    out = np.zeros(b_arr.shape, dtype=float)
    positive = b_arr > 0
    if np.any(positive):
        out[positive] = random_polyagamma(
            b_arr[positive].astype(float),
            psi_arr[positive],
            method="devroye",
            random_state=rng,
        )
    if out.ndim == 0:
        return float(out)
    return out


def polya_gamma_mean(b, psi) -> ArrayLike:
    """Analytic mean ``b / (2 psi) * tanh(psi / 2)``, ``b / 4`` at ``psi = 0``."""
    b = np.asarray(b, dtype=float)
    psi = np.abs(np.asarray(psi, dtype=float))
    small = psi < 1e-8
    safe = np.where(small, 1.0, psi)
    mean = np.where(small, b / 4.0, b / (2.0 * safe) * np.tanh(safe / 2.0))
    return float(mean) if mean.ndim == 0 else mean
