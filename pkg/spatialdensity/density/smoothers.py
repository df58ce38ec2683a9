from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.special import expit

from spatialdensity.bayes.gibbs import select_lambda_dic
from spatialdensity.bayes.penalty import PenaltyMatrix, build_penalty_matrix
from spatialdensity.config import BayesConfig, RunConfig, SolverOptions
from spatialdensity.exceptions import InvalidConfigError
from spatialdensity.graph.base import Graph
from spatialdensity.graph.trails import TrailDecomposition, decompose_trails
from spatialdensity.solvers.gfl import SplitProblem, mle_log_odds, negative_log_likelihood
from spatialdensity.solvers.kernel import gaussian_kernel_smooth
from spatialdensity.solvers.l2 import l2_effective_df, l2_graph_smoother
from spatialdensity.solvers.path import fit_selected

L2_GRID = (1e3, 1e-3)


@dataclass
class NodeFit:
    """Smoothed split probabilities of one tree node plus selection diagnostics."""

    w: np.ndarray
    lam: Optional[float] = None
    df: Optional[float] = None
    criterion_value: Optional[float] = None
    iterations: int = 0
    converged: bool = True

    def record(self, node: str) -> Dict[str, Any]:
        return {
            "node": node,
            "level": len(node),
            "lambda": self.lam,
            "df": self.df,
            "criterion": self.criterion_value,
            "iterations": self.iterations,
            "converged": self.converged,
        }


class Smoother(ABC):
    """Base class of the per-node spatial smoothers."""

    def prepare(self, graph: Graph) -> None:
        """Precomputes graph-dependent state once, before any node is smoothed."""

    @property
    @abstractmethod
    def type(self) -> str:
        """Name of the smoother as used in configuration files."""

    @abstractmethod
    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        """
        Smooths one node's split probabilities across sites.

        Args:
            problem (SplitProblem): The node's per-site binomial counts.
            rng (np.random.Generator): The node's own random stream.
        """


class MleSmoother(Smoother):
    """No smoothing: clamped per-site rates."""

    @property
    def type(self) -> str:
        return "mle"

    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        return NodeFit(w=expit(mle_log_odds(problem)), df=float(problem.num_sites))


class GflSmoother(Smoother):
    """Binomial graph fused lasso with the penalty selected per node."""

    def __init__(self, opts: Optional[SolverOptions] = None):
        self.opts = opts or SolverOptions()
        self._trails: Optional[TrailDecomposition] = None

    @property
    def type(self) -> str:
        return "gfl"

    def prepare(self, graph: Graph) -> None:
        self._trails = decompose_trails(graph)

    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        if self._trails is None or self._trails.num_vertices != problem.num_sites:
            self.prepare(problem.graph)
        solution = fit_selected(problem, self._trails, self.opts)
        return NodeFit(
            w=solution.probabilities,
            lam=solution.lam,
            df=float(solution.df),
            criterion_value=solution.criterion_value,
            iterations=solution.iterations,
            converged=solution.converged,
        )


class GaussianKernelSmoother(Smoother):
    """Truncated Gaussian-kernel average of neighbouring rates."""

    def __init__(self, bandwidth: float = 5.0):
        if not bandwidth > 0:
            raise InvalidConfigError(f"bandwidth must be positive, got {bandwidth}")
        self.bandwidth = bandwidth

    @property
    def type(self) -> str:
        return "gaussian-kernel"

    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        coords = problem.graph.coords
        if coords is None:
            raise InvalidConfigError("the gaussian-kernel smoother needs site coordinates")
        return NodeFit(
            w=gaussian_kernel_smooth(problem, coords, self.bandwidth),
            lam=self.bandwidth,
        )


class L2Smoother(Smoother):
    """
    Squared-difference penalty. The penalty is fixed by ``opts.lam`` or
    selected by the information criterion, using the trace of the
    linearised smoother as degrees of freedom.
    """

    def __init__(self, opts: Optional[SolverOptions] = None):
        self.opts = opts or SolverOptions()

    @property
    def type(self) -> str:
        return "l2"

    def _criterion(self, beta, problem: SplitProblem, lam: float) -> float:
        nll = negative_log_likelihood(beta, problem)
        df = l2_effective_df(beta, problem, lam, seed=self.opts.seed)
        n = max(problem.total_trials, 1.0)
        if self.opts.criterion == "bic":
            return 2.0 * nll + df * np.log(n)
        if self.opts.criterion == "aic":
            return 2.0 * nll + 2.0 * df
        slack = n - df - 1.0
        return np.inf if slack <= 0 else 2.0 * nll + 2.0 * df + 2.0 * df * (df + 1.0) / slack

    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        if self.opts.lam is not None:
            beta = l2_graph_smoother(problem, self.opts.lam)
            return NodeFit(w=expit(beta), lam=self.opts.lam)

        best = None
        for lam in np.geomspace(*L2_GRID, self.opts.lambda_grid_size):
            beta = l2_graph_smoother(problem, lam)
            value = self._criterion(beta, problem, lam)
            # strict comparison keeps the larger lambda on ties
            if best is None or value < best[0]:
                best = (value, float(lam), beta)
        value, lam, beta = best
        return NodeFit(w=expit(beta), lam=lam, criterion_value=float(value))


class BayesGtfSmoother(Smoother):
    """Posterior mean of the split probabilities under graph trend filtering."""

    def __init__(self, config: Optional[BayesConfig] = None):
        self.config = config or BayesConfig()
        self._penalty: Optional[PenaltyMatrix] = None

    @property
    def type(self) -> str:
        return "bayes-gtf"

    def prepare(self, graph: Graph) -> None:
        self._penalty = build_penalty_matrix(graph, self.config.order)

    def smooth(self, problem: SplitProblem, rng: np.random.Generator) -> NodeFit:
        if self._penalty is None or self._penalty.num_sites != problem.num_sites:
            self.prepare(problem.graph)
        lam, samples = select_lambda_dic(
            problem,
            self._penalty,
            sorted(self.config.lambda_grid, reverse=True),
            self.config.sweeps,
            self.config.burn_in,
            rng,
        )
        return NodeFit(w=samples.w().mean(axis=0), lam=lam)


def build_smoother(config: RunConfig) -> Smoother:
    """Instantiates the smoother named by ``config.smoother``."""
    if config.smoother == "mle":
        return MleSmoother()
    if config.smoother == "gfl":
        return GflSmoother(config.solver)
    if config.smoother == "gaussian-kernel":
        return GaussianKernelSmoother(config.bandwidth)
    if config.smoother == "l2":
        return L2Smoother(config.solver)
    if config.smoother == "bayes-gtf":
        return BayesGtfSmoother(config.bayes)
    raise InvalidConfigError(f"Unsupported smoother: {config.smoother}")
