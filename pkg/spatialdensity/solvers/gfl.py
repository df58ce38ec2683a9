"""
Binomial graph fused lasso.

Minimises

    sum_s [ m_s * log(1 + exp(beta_s)) - y_s * beta_s ] + lam * sum_(r,s) |beta_r - beta_s|

over the site log-odds ``beta``. Each outer step replaces the likelihood by
its second-order expansion at the current iterate and solves the resulting
weighted fused-lasso problem by ADMM over a trail decomposition of the
graph; the slack update along each trail is a weighted 1D fused lasso.
Outer steps are accepted with backtracking on the true objective.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.special import expit, logit

from spatialdensity.config import SolverOptions
from spatialdensity.constants import (
    FUSION_TOL,
    OMEGA_FLOOR,
    PROB_EPS,
    RESIDUAL_BALANCE_FACTOR,
    RESIDUAL_BALANCE_RATIO,
)
from spatialdensity.exceptions import (
    InvalidDimensionError,
    NumericInputError,
    SolverDivergenceError,
)
from spatialdensity.graph.base import Graph
from spatialdensity.graph.trails import TrailDecomposition
from spatialdensity.solvers.fl1d import solve_weighted_fl1d

BETA_MIN = float(logit(PROB_EPS))
BETA_MAX = float(logit(1.0 - PROB_EPS))

ARMIJO_SIGMA = 1e-4
MAX_BACKTRACKS = 30
MAX_OUTER_STEPS = 200
REFIT_SWEEPS = 60
REFIT_BISECTIONS = 64


@dataclass(frozen=True)
class SplitProblem:
    """
    Per-site binomial split: ``y`` left-child counts out of ``m`` trials.
    """

    y: np.ndarray
    m: np.ndarray
    graph: Graph

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        m = np.asarray(self.m, dtype=float)
        p = self.graph.num_vertices
        if y.shape != (p,) or m.shape != (p,):
            raise InvalidDimensionError(
                f"y and m must have length {p}, got {y.shape} and {m.shape}"
            )
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(m))):
            raise NumericInputError("counts must be finite")
        if np.any(y < 0) or np.any(y > m):
            bad = np.flatnonzero((y < 0) | (y > m))
            raise NumericInputError(f"0 <= y <= m violated at sites {bad.tolist()}")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "m", m)

    @property
    def num_sites(self) -> int:
        return self.graph.num_vertices

    @property
    def total_trials(self) -> float:
        return float(self.m.sum())


@dataclass
class AdmmState:
    """
    ADMM variables over trail-vertex occurrences.

    ``site_of[j]`` is the site of slack ``j``; the slack indices of site ``s``
    (the set J_s) are ``slack_index[s]``.
    """

    z: np.ndarray
    u: np.ndarray
    alpha: float
    site_of: np.ndarray
    bounds: List[Tuple[int, int]]
    num_sites: int

    @classmethod
    def from_trails(
        cls, trails: TrailDecomposition, beta: np.ndarray, alpha: float
    ) -> "AdmmState":
        site_of = np.fromiter(
            (v for trail in trails.trails for v in trail),
            dtype=np.int64,
            count=trails.num_occurrences,
        )
        bounds = []
        start = 0
        for trail in trails.trails:
            bounds.append((start, start + len(trail)))
            start += len(trail)
        return cls(
            z=beta[site_of].astype(float),
            u=np.zeros(site_of.shape[0]),
            alpha=float(alpha),
            site_of=site_of,
            bounds=bounds,
            num_sites=trails.num_vertices,
        )

    @property
    def slack_index(self) -> List[np.ndarray]:
        order = np.argsort(self.site_of, kind="stable")
        splits = np.cumsum(np.bincount(self.site_of, minlength=self.num_sites))[:-1]
        return np.split(order, splits)

    def copy(self) -> "AdmmState":
        return AdmmState(
            z=self.z.copy(),
            u=self.u.copy(),
            alpha=self.alpha,
            site_of=self.site_of,
            bounds=self.bounds,
            num_sites=self.num_sites,
        )

    def trail_pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        """Slack indices of the two ends of every trail edge."""
        left = [np.arange(a, b - 1) for a, b in self.bounds]
        if not left:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        left = np.concatenate(left)
        return left, left + 1


@dataclass
class GflSolution:
    beta: np.ndarray
    lam: float
    iterations: int
    primal_residual: float
    dual_residual: float
    df: int
    objective: float
    converged: bool
    criterion_value: Optional[float] = None
    state: Optional[AdmmState] = field(default=None, repr=False, compare=False)
    plateaus: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def probabilities(self) -> np.ndarray:
        return expit(self.beta)


def _check_beta(beta, problem: SplitProblem) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (problem.num_sites,):
        raise InvalidDimensionError(
            f"beta must have length {problem.num_sites}, got {beta.shape}"
        )
    if not np.all(np.isfinite(beta)):
        raise NumericInputError("beta must be finite")
    return beta


def logistic_surrogate(beta, problem: SplitProblem) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadratic expansion of the binomial loss at ``beta``.

    Returns:
        (omega, ytilde): curvature ``m p (1 - p)`` and working response
        ``beta - (m p - y) / omega``. Sites without trials get the curvature
        floor and ``ytilde = beta``.
    """
    beta = _check_beta(beta, problem)
    p = np.clip(expit(beta), PROB_EPS, 1.0 - PROB_EPS)
    m, y = problem.m, problem.y

    has_trials = m > 0
    omega = np.full_like(beta, OMEGA_FLOOR)
    omega[has_trials] = m[has_trials] * p[has_trials] * (1.0 - p[has_trials])
    ytilde = beta.copy()
    ytilde[has_trials] = beta[has_trials] - (
        m[has_trials] * p[has_trials] - y[has_trials]
    ) / omega[has_trials]
    return omega, ytilde


def negative_log_likelihood(beta, problem: SplitProblem) -> float:
    beta = np.asarray(beta, dtype=float)
    return float(np.sum(problem.m * np.logaddexp(0.0, beta) - problem.y * beta))


def total_variation(beta, graph: Graph) -> float:
    if graph.num_edges == 0:
        return 0.0
    beta = np.asarray(beta, dtype=float)
    return float(np.abs(beta[graph.edges[:, 0]] - beta[graph.edges[:, 1]]).sum())


def gfl_objective(beta, problem: SplitProblem, lam: float) -> float:
    """Binomial loss plus ``lam`` times the total variation over graph edges."""
    beta = _check_beta(beta, problem)
    return negative_log_likelihood(beta, problem) + lam * total_variation(
        beta, problem.graph
    )


def mle_log_odds(problem: SplitProblem) -> np.ndarray:
    """Per-site MLE of the log-odds, clamped to ``[eps, 1 - eps]``; 0 where m = 0."""
    rate = np.divide(
        problem.y,
        problem.m,
        out=np.full(problem.num_sites, 0.5),
        where=problem.m > 0,
    )
    return logit(np.clip(rate, PROB_EPS, 1.0 - PROB_EPS))


def _plateau_labels(graph: Graph, fused: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    """Component label per vertex of the subgraph keeping only fused pairs."""
    p = graph.num_vertices
    kept = pairs[fused]
    adj = sparse.coo_matrix(
        (np.ones(len(kept)), (kept[:, 0], kept[:, 1])), shape=(p, p)
    ).tocsr()
    return connected_components(adj, directed=False)[1]


def plateau_labels(beta, graph: Graph, tol: float = FUSION_TOL) -> np.ndarray:
    """
    Plateau label per site: connected components of the subgraph of fused
    edges, an edge being fused when ``|beta_r - beta_s| <= tol * max(1, |beta_r|)``.
    """
    beta = np.asarray(beta, dtype=float)
    edges = graph.edges
    if edges.shape[0] == 0:
        return np.arange(graph.num_vertices)
    a, b = beta[edges[:, 0]], beta[edges[:, 1]]
    fused = np.abs(a - b) <= tol * np.maximum(1.0, np.abs(a))
    return _plateau_labels(graph, fused, edges)


def degrees_of_freedom(beta, graph: Graph, tol: float = FUSION_TOL) -> int:
    """Number of plateaus of ``beta`` over ``graph``."""
    if graph.num_vertices == 0:
        return 0
    return int(plateau_labels(beta, graph, tol).max()) + 1


def _thresholds(opts: SolverOptions, state: AdmmState, beta_occ, p: int):
    if opts.tol_primal is not None:
        eps_pri = opts.tol_primal
    else:
        eps_pri = np.sqrt(state.z.size) * opts.tol_abs + opts.tol_rel * max(
            np.linalg.norm(beta_occ), np.linalg.norm(state.z)
        )
    if opts.tol_dual is not None:
        eps_dual = opts.tol_dual
    else:
        scaled_dual = state.alpha * np.bincount(state.site_of, weights=state.u, minlength=p)
        eps_dual = np.sqrt(p) * opts.tol_abs + opts.tol_rel * np.linalg.norm(scaled_dual)
    return eps_pri, eps_dual


def _run_admm(
    omega: np.ndarray,
    ytilde: np.ndarray,
    state: AdmmState,
    lam: float,
    opts: SolverOptions,
    budget: int,
    iteration_offset: int,
) -> Tuple[np.ndarray, int, float, float, bool]:
    """ADMM on the quadratic surrogate. Mutates ``state``."""
    p = omega.shape[0]
    counts = np.bincount(state.site_of, minlength=p).astype(float)
    beta = np.clip(ytilde, BETA_MIN, BETA_MAX)
    primal = dual = np.inf

    for it in range(1, budget + 1):
        # beta update, factor 2 on the quadratic term
        zu = np.bincount(state.site_of, weights=state.z - state.u, minlength=p)
        beta = (2.0 * ytilde * omega + state.alpha * zu) / (
            2.0 * omega + state.alpha * counts
        )
        beta = np.clip(beta, BETA_MIN, BETA_MAX)
        beta_occ = beta[state.site_of]

        # z update: one weighted 1D fused lasso per trail
        z_prev = state.z
        targets = beta_occ + state.u
        z_new = np.empty_like(z_prev)
        for a, b in state.bounds:
            z_new[a:b] = solve_weighted_fl1d(
                targets[a:b], np.full(b - a, state.alpha), 2.0 * lam
            )
        state.z = z_new

        # dual update
        r = beta_occ - state.z
        state.u = state.u + r

        if not (
            np.all(np.isfinite(beta))
            and np.all(np.isfinite(state.z))
            and np.all(np.isfinite(state.u))
        ):
            raise SolverDivergenceError(iteration_offset + it, lam)

        primal = float(np.linalg.norm(r))
        dual = float(
            state.alpha
            * np.linalg.norm(
                np.bincount(state.site_of, weights=state.z - z_prev, minlength=p)
            )
        )
        eps_pri, eps_dual = _thresholds(opts, state, beta_occ, p)
        if primal <= eps_pri and dual <= eps_dual:
            return beta, it, primal, dual, True

        if primal > RESIDUAL_BALANCE_RATIO * dual:
            state.alpha *= RESIDUAL_BALANCE_FACTOR
            state.u = state.u / RESIDUAL_BALANCE_FACTOR
        elif dual > RESIDUAL_BALANCE_RATIO * primal:
            state.alpha /= RESIDUAL_BALANCE_FACTOR
            state.u = state.u * RESIDUAL_BALANCE_FACTOR

    return beta, budget, primal, dual, False


def _closed_form(problem: SplitProblem, lam: float) -> GflSolution:
    beta = mle_log_odds(problem)
    labels = plateau_labels(beta, problem.graph)
    return GflSolution(
        beta=beta,
        lam=lam,
        iterations=0,
        primal_residual=0.0,
        dual_residual=0.0,
        df=int(labels.max()) + 1 if labels.size else 0,
        objective=gfl_objective(beta, problem, lam),
        converged=True,
        plateaus=labels,
    )


def _slack_plateaus(state: AdmmState, graph: Graph) -> np.ndarray:
    """Plateau labels of the partition the slack variables have fused."""
    left, right = state.trail_pairs()
    if left.size == 0:
        return np.arange(graph.num_vertices)
    z = state.z
    fused = np.abs(z[left] - z[right]) <= FUSION_TOL * np.maximum(1.0, np.abs(z[left]))
    pairs = np.column_stack([state.site_of[left], state.site_of[right]])
    return _plateau_labels(graph, fused, pairs)


def _plateau_minimisers(values, trials, successes, src, dst, lam):
    """
    Exact minimiser of each plateau's pooled loss plus its cut-edge penalty,
    with every neighbouring plateau held at ``values``.

    The slope ``M sigma(b) - Y + lam * sum sign(b - v_neighbour)`` is
    nondecreasing in ``b``, so a vectorised bisection over the box finds its root.
    """
    k = values.shape[0]
    lo = np.full(k, BETA_MIN)
    hi = np.full(k, BETA_MAX)
    neighbour = values[dst]
    for _ in range(REFIT_BISECTIONS):
        mid = 0.5 * (lo + hi)
        pull = np.bincount(src, weights=np.sign(mid[src] - neighbour), minlength=k)
        up = trials * expit(mid) - successes + lam * pull > 0
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    return 0.5 * (lo + hi)


def _refit_plateaus(
    beta: np.ndarray, labels: np.ndarray, problem: SplitProblem, lam: float
) -> np.ndarray:
    """
    Re-fits one value per plateau on the pooled binomial likelihood plus the
    penalty on edges leaving the plateau.

    Damped Jacobi sweeps of exact per-plateau minimisation; a sweep that
    raises the objective ends the refit. Plateaus pulled onto a common kink
    meet at their midpoint and are merged by the caller's relabelling.
    """
    k = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=k)
    trials = np.bincount(labels, weights=problem.m, minlength=k)
    successes = np.bincount(labels, weights=problem.y, minlength=k)
    values = np.clip(np.bincount(labels, weights=beta, minlength=k) / sizes, BETA_MIN, BETA_MAX)

    edges = problem.graph.edges
    a, b = labels[edges[:, 0]], labels[edges[:, 1]]
    cut = a != b
    src = np.concatenate([a[cut], b[cut]])
    dst = np.concatenate([b[cut], a[cut]])
    # a plateau without trials or cut edges has a flat objective
    free = (trials > 0) | (np.bincount(src, minlength=k) > 0)

    objective = gfl_objective(values[labels], problem, lam)
    for _ in range(REFIT_SWEEPS):
        target = _plateau_minimisers(values, trials, successes, src, dst, lam)
        proposal = np.where(free, values + 0.5 * (target - values), values)
        proposal_objective = gfl_objective(proposal[labels], problem, lam)
        if proposal_objective > objective:
            break
        change = float(np.max(np.abs(proposal - values)))
        values, objective = proposal, proposal_objective
        if change <= 1e-13 * max(1.0, float(np.max(np.abs(values)))):
            break
    return values[labels]


def solve_binomial_gfl(
    problem: SplitProblem,
    trails: TrailDecomposition,
    lam: float,
    opts: Optional[SolverOptions] = None,
    warm: Optional[GflSolution] = None,
) -> GflSolution:
    """
    Solves the binomial graph fused lasso at a fixed ``lam``.

    Args:
        problem (SplitProblem): Counts and graph.
        trails (TrailDecomposition): Trails of ``problem.graph``.
        lam (float): Non-negative fusion penalty.
        opts (SolverOptions, optional): Tolerances, iteration cap, initial step.
        warm (GflSolution, optional): Starting point; its ADMM state is reused.

    Returns:
        GflSolution: the objective at the solution never exceeds the
        objective at the starting point.

    Raises:
        SolverDivergenceError: An iterate became non-finite.
    """
    opts = opts or SolverOptions()
    lam = float(lam)
    if not np.isfinite(lam) or lam < 0:
        raise NumericInputError(f"lambda must be finite and non-negative, got {lam}")
    if trails.num_vertices != problem.num_sites:
        raise InvalidDimensionError(
            f"Trails cover {trails.num_vertices} vertices, problem has {problem.num_sites}"
        )

    if lam == 0.0 or problem.graph.num_edges == 0:
        return _closed_form(problem, lam)

    if warm is not None:
        beta = np.clip(_check_beta(warm.beta, problem), BETA_MIN, BETA_MAX)
    else:
        beta = mle_log_odds(problem)
    if warm is not None and warm.state is not None:
        state = warm.state.copy()
    else:
        state = AdmmState.from_trails(trails, beta, opts.alpha0)

    objective = gfl_objective(beta, problem, lam)
    used = 0
    primal = dual = np.inf
    inner_converged = False
    converged = False

    for outer in range(MAX_OUTER_STEPS):
        budget = opts.max_iters - used
        if budget <= 0:
            break
        omega, ytilde = logistic_surrogate(beta, problem)
        candidate, iters, primal, dual, inner_converged = _run_admm(
            omega, ytilde, state, lam, opts, budget, used
        )
        used += iters

        step = candidate - beta
        grad = problem.m * expit(beta) - problem.y
        decrease = float(grad @ step) + lam * (
            total_variation(candidate, problem.graph)
            - total_variation(beta, problem.graph)
        )
        t = 1.0
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            trial = beta + t * step
            trial_objective = gfl_objective(trial, problem, lam)
            if not np.isfinite(trial_objective):
                raise SolverDivergenceError(used, lam)
            if trial_objective <= objective + ARMIJO_SIGMA * t * min(decrease, 0.0):
                accepted = (trial, trial_objective)
                break
            t *= 0.5

        if accepted is None:
            converged = inner_converged
            break

        moved = float(np.linalg.norm(accepted[0] - beta))
        beta, objective = accepted
        # same scale as the ADMM primal threshold
        step_tol = np.sqrt(beta.size) * opts.tol_abs + opts.tol_rel * max(
            1.0, float(np.linalg.norm(beta))
        )
        if inner_converged and moved <= step_tol:
            converged = True
            break

    labels = _slack_plateaus(state, problem.graph)
    refit = _refit_plateaus(beta, labels, problem, lam)
    refit_objective = gfl_objective(refit, problem, lam)
    if refit_objective <= objective:
        beta, objective = refit, refit_objective
        labels = plateau_labels(beta, problem.graph)
    df = int(labels.max()) + 1

    logger.debug(
        f"GFL lambda={lam:.6g}: {used} ADMM iterations, objective={objective:.8g}, "
        f"df={df}, converged={converged}"
    )
    return GflSolution(
        beta=beta,
        lam=lam,
        iterations=used,
        primal_residual=float(primal),
        dual_residual=float(dual),
        df=df,
        objective=float(objective),
        converged=converged,
        state=state,
        plateaus=labels,
    )
