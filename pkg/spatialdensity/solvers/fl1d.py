"""Weighted one-dimensional fused lasso by dynamic programming.

Solves

    minimize  1/2 * sum_i w_i (t_i - z_i)^2 + lam * sum_i |z_{i+1} - z_i|

in linear time. The derivative of the DP message is piecewise linear; it
is stored as knots ``x`` with slope/intercept increments ``a``/``b`` and
clipped at ``+-lam`` each step. Back-pointers ``tm``/``tp`` recover the
solution in a backward pass.
"""

import numpy as np

from spatialdensity.constants import FUSION_TOL
from spatialdensity.exceptions import InvalidWeightError, NumericInputError


def _validate(targets: np.ndarray, weights: np.ndarray, lam: float) -> None:
    if targets.ndim != 1 or targets.size == 0:
        raise NumericInputError("targets must be a non-empty 1-D vector")
    if weights.shape != targets.shape:
        raise NumericInputError(
            f"weights shape {weights.shape} does not match targets {targets.shape}"
        )
    if not (np.all(np.isfinite(targets)) and np.all(np.isfinite(weights)) and np.isfinite(lam)):
        raise NumericInputError("targets, weights and lambda must be finite")
    if np.any(weights <= 0):
        raise InvalidWeightError("all weights must be positive")
    if lam < 0:
        raise NumericInputError(f"lambda must be non-negative, got {lam}")


def solve_weighted_fl1d(targets, weights, lam: float) -> np.ndarray:
    """
    Returns the unique minimiser of the weighted 1D fused lasso objective.

    Args:
        targets: Length-n vector ``t``.
        weights: Length-n vector of positive weights ``w``.
        lam: Non-negative fusion penalty.

    Raises:
        NumericInputError: Non-finite inputs or negative ``lam``.
        InvalidWeightError: A non-positive weight.
    """
    y = np.asarray(targets, dtype=float)
    w = np.asarray(weights, dtype=float)
    lam = float(lam)
    _validate(y, w, lam)

    n = y.shape[0]
    if n == 1 or lam == 0.0:
        return y.copy()

    beta = np.zeros(n)
    x = np.zeros(2 * n)
    a = np.zeros(2 * n)
    b = np.zeros(2 * n)
    tm = np.zeros(n - 1)
    tp = np.zeros(n - 1)

    # first message
    tm[0] = -lam / w[0] + y[0]
    tp[0] = lam / w[0] + y[0]
    l = n - 1  # noqa: E741
    r = n
    x[l] = tm[0]
    x[r] = tp[0]
    a[l] = w[0]
    b[l] = -w[0] * y[0] + lam
    a[r] = -w[0]
    b[r] = w[0] * y[0] + lam
    afirst = w[1]
    bfirst = -w[1] * y[1] - lam
    alast = -w[1]
    blast = w[1] * y[1] - lam

    for k in range(1, n - 1):
        alo = afirst
        blo = bfirst
        lo = l
        while lo <= r:
            if alo * x[lo] + blo > -lam:
                break
            alo += a[lo]
            blo += b[lo]
            lo += 1

        ahi = alast
        bhi = blast
        hi = r
        while hi >= lo:
            if (-ahi * x[hi] - bhi) < lam:
                break
            ahi += a[hi]
            bhi += b[hi]
            hi -= 1

        tm[k] = (-lam - blo) / alo
        l = lo - 1  # noqa: E741
        x[l] = tm[k]

        tp[k] = (lam + bhi) / (-ahi)
        r = hi + 1
        x[r] = tp[k]

        a[l] = alo
        b[l] = blo + lam
        a[r] = ahi
        b[r] = bhi + lam
        afirst = w[k + 1]
        bfirst = -w[k + 1] * y[k + 1] - lam
        alast = -w[k + 1]
        blast = w[k + 1] * y[k + 1] - lam

    # last coefficient: zero of the final derivative
    alo = afirst
    blo = bfirst
    for lo in range(l, r + 1):
        if alo * x[lo] + blo > 0:
            break
        alo += a[lo]
        blo += b[lo]
    beta[n - 1] = -blo / alo

    for k in range(n - 2, -1, -1):
        if beta[k + 1] > tp[k]:
            beta[k] = tp[k]
        elif beta[k + 1] < tm[k]:
            beta[k] = tm[k]
        else:
            beta[k] = beta[k + 1]
    return beta


def fl1d_objective(z, targets, weights, lam: float) -> float:
    z = np.asarray(z, dtype=float)
    t = np.asarray(targets, dtype=float)
    w = np.asarray(weights, dtype=float)
    return float(0.5 * np.sum(w * (t - z) ** 2) + lam * np.sum(np.abs(np.diff(z))))


def fused_plateaus(z) -> int:
    """Number of constant runs in a 1D solution."""
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        return 0
    gaps = np.abs(np.diff(z))
    fused = gaps <= FUSION_TOL * np.maximum(1.0, np.abs(z[:-1]))
    return int(1 + np.count_nonzero(~fused))
