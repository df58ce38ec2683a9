"""
Empirical-Bayes binomial graph trend filtering.

Model, for a fixed global shrinkage ``lam``:

    y_s | alpha, beta ~ Binomial(m_s, sigmoid(alpha + beta_s))
    delta = D beta,  delta_j | omega_j ~ N(0, 2 omega_j)
    omega_j | nu_j ~ Exponential(rate nu_j^2 / 2)
    nu_j ~ Gamma(1, scale lam)

with a flat prior on ``alpha``. Marginally ``|delta_j| / sqrt(2)`` is a
generalised double Pareto variable with median ``1 / lam``, so a larger
``lam`` fuses neighbours harder. Polya-Gamma auxiliaries make the ``beta``
and ``alpha`` conditionals Gaussian.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import linalg, sparse
from scipy.special import expit, gammaln, logit

from spatialdensity.constants import CHOLESKY_JITTER, CHOLESKY_RETRIES, PROB_EPS
from spatialdensity.exceptions import CholeskyError, EmptyInputError, NumericInputError
from spatialdensity.helpers.rng import child_seed, substream
from spatialdensity.solvers.gfl import SplitProblem

from .penalty import PenaltyMatrix
from .polya_gamma import sample_polya_gamma

DELTA_FLOOR = 1e-12
SQRT2 = np.sqrt(2.0)
TIE_TOL = 1e-9


@dataclass
class GibbsState:
    beta: np.ndarray
    alpha: float
    omega: np.ndarray
    nu: np.ndarray
    h: np.ndarray
    lam: float

    @classmethod
    def initial(cls, problem: SplitProblem, penalty: PenaltyMatrix, lam: float) -> "GibbsState":
        total = problem.total_trials
        pooled = problem.y.sum() / total if total > 0 else 0.5
        return cls(
            beta=np.zeros(problem.num_sites),
            alpha=float(logit(np.clip(pooled, PROB_EPS, 1.0 - PROB_EPS))),
            omega=np.ones(penalty.num_rows),
            nu=np.full(penalty.num_rows, lam),
            h=np.zeros(problem.num_sites),
            lam=lam,
        )


@dataclass
class PosteriorSamples:
    """Retained draws of one chain."""

    beta: np.ndarray
    alpha: np.ndarray
    lam: float

    def __len__(self) -> int:
        return int(self.alpha.shape[0])

    def w(self) -> np.ndarray:
        """Split-probability draws ``sigmoid(alpha + beta)``, one row per sweep."""
        return expit(self.alpha[:, None] + self.beta)

    def summary(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-site posterior mean, 5% and 95% quantiles of ``w``."""
        w = self.w()
        return w.mean(axis=0), np.quantile(w, 0.05, axis=0), np.quantile(w, 0.95, axis=0)


def _cholesky(precision: np.ndarray) -> np.ndarray:
    try:
        return linalg.cholesky(precision, lower=True)
    except linalg.LinAlgError:
        pass
    eye = np.eye(precision.shape[0])
    for attempt in range(CHOLESKY_RETRIES):
        jitter = CHOLESKY_JITTER * 10.0**attempt
        try:
            return linalg.cholesky(precision + jitter * eye, lower=True)
        except linalg.LinAlgError:
            logger.debug(f"Cholesky retry {attempt + 1} with jitter {jitter:.1e} failed")
    raise CholeskyError(CHOLESKY_RETRIES)


def beta_conditional(
    state: GibbsState, problem: SplitProblem, penalty: PenaltyMatrix
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Precision ``H + 1/2 D^T Omega^-1 D`` and right-hand side ``kappa - alpha h``
    of the Gaussian conditional of ``beta``, with ``H = diag(h)``.
    """
    precision = np.diag(state.h).astype(float)
    if penalty.num_rows > 0:
        delta = penalty.matrix
        precision += (delta.T @ sparse.diags(0.5 / state.omega) @ delta).toarray()
    kappa = problem.y - problem.m / 2.0
    rhs = kappa - state.alpha * state.h
    return precision, rhs


def _draw_beta(state, problem, penalty, rng) -> np.ndarray:
    precision, rhs = beta_conditional(state, problem, penalty)
    chol = _cholesky(precision)
    mean = linalg.cho_solve((chol, True), rhs)
    noise = linalg.solve_triangular(chol.T, rng.standard_normal(len(rhs)), lower=False)
    return mean + noise


def draw_local_scales(
    delta: np.ndarray, lam: float, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Joint conditional draw of ``(nu, omega)`` given the differences ``delta``."""
    delta = np.maximum(np.abs(delta), DELTA_FLOOR)
    nu = rng.gamma(shape=2.0, scale=1.0 / (1.0 / lam + delta / SQRT2))
    inv_omega = rng.wald(mean=SQRT2 * nu / delta, scale=nu**2)
    return nu, 1.0 / inv_omega


def _draw_scales(state, penalty, rng) -> None:
    state.nu, state.omega = draw_local_scales(penalty.apply(state.beta), state.lam, rng)


def _draw_alpha(state, problem, rng) -> None:
    total_h = float(state.h.sum())
    if total_h <= 0:
        state.alpha = 0.0
        return
    kappa = problem.y - problem.m / 2.0
    mean = float(np.sum(kappa - state.h * state.beta)) / total_h
    state.alpha = mean + rng.standard_normal() / np.sqrt(total_h)


def _center(state: GibbsState) -> None:
    # alpha + beta is unchanged; the posterior is invariant to this shift
    for _ in range(2):
        shift = state.beta.mean()
        state.beta = state.beta - shift
        state.alpha += shift


def run_gibbs(
    problem: SplitProblem,
    penalty: PenaltyMatrix,
    lam: float,
    sweeps: int,
    burn_in: int,
    rng: np.random.Generator,
    state: Optional[GibbsState] = None,
) -> PosteriorSamples:
    """
    Runs one Gibbs chain and returns the ``sweeps - burn_in`` retained draws.

    Each sweep draws the Polya-Gamma auxiliaries, ``beta`` jointly (then
    centres it), the local scales ``(nu, omega)`` as a block, and ``alpha``.

    Raises:
        CholeskyError: The ``beta`` precision could not be factorised.
    """
    if not lam > 0:
        raise NumericInputError(f"lambda must be positive, got {lam}")
    if sweeps < 1 or burn_in < 0 or burn_in >= sweeps:
        raise NumericInputError(
            f"need 0 <= burn_in < sweeps, got burn_in={burn_in}, sweeps={sweeps}"
        )
    if penalty.num_sites != problem.num_sites:
        raise NumericInputError("penalty matrix and problem disagree on the number of sites")

    state = state or GibbsState.initial(problem, penalty, lam)
    state.lam = lam
    kept = sweeps - burn_in
    betas = np.empty((kept, problem.num_sites))
    alphas = np.empty(kept)
    m_int = np.rint(problem.m).astype(np.int64)
    has_edges = penalty.num_rows > 0

    for sweep in range(sweeps):
        state.h = sample_polya_gamma(m_int, state.alpha + state.beta, rng)
        state.h = np.atleast_1d(state.h)
        state.beta = _draw_beta(state, problem, penalty, rng)
        _center(state)
        if has_edges:
            _draw_scales(state, penalty, rng)
        _draw_alpha(state, problem, rng)

        if sweep >= burn_in:
            betas[sweep - burn_in] = state.beta
            alphas[sweep - burn_in] = state.alpha

    logger.debug(f"Gibbs lambda={lam:.6g}: {sweeps} sweeps, {kept} retained")
    return PosteriorSamples(beta=betas, alpha=alphas, lam=lam)


def binomial_log_likelihood(alpha, beta, problem: SplitProblem) -> np.ndarray:
    """Binomial log-likelihood at each ``(alpha, beta)`` draw (rows of ``beta``)."""
    psi = np.atleast_1d(alpha)[:, None] + np.atleast_2d(beta)
    log_choose = gammaln(problem.m + 1) - gammaln(problem.y + 1) - gammaln(
        problem.m - problem.y + 1
    )
    return np.sum(
        log_choose + problem.y * psi - problem.m * np.logaddexp(0.0, psi), axis=1
    )


def dic(samples: PosteriorSamples, problem: SplitProblem) -> float:
    """``DIC = mean deviance + p_D`` with ``p_D = mean deviance - deviance at the posterior mean``."""
    if len(samples) == 0:
        raise EmptyInputError("cannot compute DIC from an empty sample set")
    deviance = -2.0 * binomial_log_likelihood(samples.alpha, samples.beta, problem)
    mean_deviance = float(np.mean(deviance))
    at_mean = float(
        -2.0
        * binomial_log_likelihood(
            np.array([samples.alpha.mean()]), samples.beta.mean(axis=0), problem
        )[0]
    )
    effective = mean_deviance - at_mean
    return mean_deviance + effective


def select_lambda_dic(
    problem: SplitProblem,
    penalty: PenaltyMatrix,
    lambda_grid: Sequence[float],
    sweeps: int,
    burn_in: int,
    rng: np.random.Generator,
) -> Tuple[float, PosteriorSamples]:
    """
    Fits one chain per grid value and returns the fit with the lowest DIC;
    ties go to the larger lambda. Chains get independent seeds drawn from
    ``rng`` in grid order.
    """
    grid = [float(v) for v in lambda_grid]
    if not grid:
        raise EmptyInputError("lambda grid is empty")
    seeds = [child_seed(rng) for _ in grid]

    fits: List[Tuple[float, float, PosteriorSamples]] = []
    for lam, seed in zip(grid, seeds):
        samples = run_gibbs(
            problem, penalty, lam, sweeps, burn_in, substream(seed, "gibbs")
        )
        fits.append((dic(samples, problem), lam, samples))
        logger.debug(f"DIC at lambda={lam:.6g}: {fits[-1][0]:.6g}")

    best = min(f[0] for f in fits)
    tied = [f for f in fits if f[0] <= best + TIE_TOL * max(1.0, abs(best))]
    _, lam, samples = max(tied, key=lambda f: f[1])
    return lam, samples


def sample_prior(
    penalty: PenaltyMatrix, lam: float, num_draws: int, rng: np.random.Generator
) -> np.ndarray:
    """Forward draws of ``delta`` from the shrinkage hierarchy, shape ``(num_draws, d)``."""
    d = penalty.num_rows
    nu = rng.gamma(shape=1.0, scale=lam, size=(num_draws, d))
    omega = rng.exponential(scale=2.0 / nu**2)
    return rng.normal(0.0, np.sqrt(2.0 * omega))
