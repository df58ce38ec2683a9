from dataclasses import replace
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from spatialdensity.config import SolverOptions
from spatialdensity.exceptions import EmptyInputError, InvalidConfigError
from spatialdensity.graph.base import Graph
from spatialdensity.graph.trails import TrailDecomposition
from spatialdensity.solvers.gfl import (
    GflSolution,
    SplitProblem,
    mle_log_odds,
    negative_log_likelihood,
    plateau_labels,
    solve_binomial_gfl,
)

MAX_DOUBLINGS = 60
MAX_HALVINGS = 40
TIE_TOL = 1e-9


def lambda_max_search(
    problem: SplitProblem,
    trails: TrailDecomposition,
    opts: Optional[SolverOptions] = None,
) -> float:
    """
    Smallest power-of-two multiple of 1 at which the solution is fully fused.

    Fully fused means one plateau per connected component of the graph.
    The search doubles from 1 until fused, or halves from 1 while still fused.
    """
    opts = opts or SolverOptions()
    target = problem.graph.components()[0]
    if problem.graph.num_edges == 0:
        return 1.0

    def fused_at(lam: float) -> bool:
        return solve_binomial_gfl(problem, trails, lam, opts).df <= target

    lam = 1.0
    if fused_at(lam):
        for _ in range(MAX_HALVINGS):
            if not fused_at(lam / 2.0):
                break
            lam /= 2.0
        return lam

    for _ in range(MAX_DOUBLINGS):
        lam *= 2.0
        if fused_at(lam):
            return lam
    logger.warning(f"No fully fused solution found up to lambda={lam:.3g}")
    return lam


def lambda_grid(lambda_max: float, size: int, ratio: float) -> np.ndarray:
    """``size`` log-spaced values from ``lambda_max`` down to ``lambda_max * ratio``."""
    if lambda_max <= 0:
        raise InvalidConfigError(f"lambda_max must be positive, got {lambda_max}")
    if size < 1:
        raise InvalidConfigError(f"grid size must be >= 1, got {size}")
    if size == 1:
        return np.array([float(lambda_max)])
    return np.geomspace(lambda_max, lambda_max * ratio, size)


def solution_path(
    problem: SplitProblem,
    trails: TrailDecomposition,
    lambdas: Sequence[float],
    opts: Optional[SolverOptions] = None,
) -> List[GflSolution]:
    """Solves along a strictly descending grid, warm-starting each fit from the previous."""
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise EmptyInputError("lambda grid is empty")
    if np.any(lambdas <= 0) or np.any(np.diff(lambdas) >= 0):
        raise InvalidConfigError("lambda grid must be positive and strictly descending")

    path: List[GflSolution] = []
    warm = None
    for lam in lambdas:
        warm = solve_binomial_gfl(problem, trails, float(lam), opts, warm=warm)
        path.append(warm)
    return path


def refit_negative_log_likelihood(
    problem: SplitProblem, labels: np.ndarray
) -> float:
    """Binomial loss with every plateau at its own pooled MLE."""
    k = int(labels.max()) + 1 if labels.size else 0
    trials = np.bincount(labels, weights=problem.m, minlength=k)
    successes = np.bincount(labels, weights=problem.y, minlength=k)
    pooled = SplitProblem(y=successes, m=trials, graph=Graph(num_vertices=k))
    return negative_log_likelihood(mle_log_odds(pooled), pooled)


def information_criterion(
    solution: GflSolution, problem: SplitProblem, criterion: str = "bic"
) -> float:
    """
    Criterion on the plateau partition of ``solution``, with the likelihood
    term taken at the per-plateau MLE rather than the penalised values.
    """
    labels = solution.plateaus
    if labels is None:
        labels = plateau_labels(solution.beta, problem.graph)
    nll = refit_negative_log_likelihood(problem, labels)
    n = problem.total_trials
    df = solution.df
    if criterion == "bic":
        return 2.0 * nll + df * np.log(max(n, 1.0))
    if criterion == "aic":
        return 2.0 * nll + 2.0 * df
    if criterion == "aicc":
        slack = n - df - 1.0
        if slack <= 0:
            return np.inf
        return 2.0 * nll + 2.0 * df + 2.0 * df * (df + 1.0) / slack
    raise InvalidConfigError(f"Unsupported criterion: {criterion}")


def select_lambda(
    path: Sequence[GflSolution], problem: SplitProblem, criterion: str = "bic"
) -> GflSolution:
    """
    Returns the path element minimising ``criterion``; ties go to the larger lambda.
    The returned solution carries the criterion value.
    """
    if not path:
        raise EmptyInputError("cannot select from an empty solution path")
    values = np.array([information_criterion(s, problem, criterion) for s in path])
    best = np.min(values)
    tied = np.flatnonzero(values <= best + TIE_TOL * max(1.0, abs(best)))
    chosen = max(tied, key=lambda i: path[i].lam)
    return replace(path[chosen], criterion_value=float(values[chosen]))


def select_lambda_bic(path: Sequence[GflSolution], problem: SplitProblem) -> GflSolution:
    return select_lambda(path, problem, "bic")


def fit_selected(
    problem: SplitProblem,
    trails: TrailDecomposition,
    opts: Optional[SolverOptions] = None,
) -> GflSolution:
    """Fixed-lambda fit when ``opts.lam`` is set, otherwise the selected path element."""
    opts = opts or SolverOptions()
    if opts.lam is not None:
        return solve_binomial_gfl(problem, trails, opts.lam, opts)
    lam_max = lambda_max_search(problem, trails, opts)
    grid = lambda_grid(lam_max, opts.lambda_grid_size, opts.lambda_ratio)
    path = solution_path(problem, trails, grid, opts)
    return select_lambda(path, problem, opts.criterion)
