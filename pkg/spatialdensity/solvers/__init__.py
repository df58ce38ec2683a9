from .fl1d import fl1d_objective, fused_plateaus, solve_weighted_fl1d
from .gfl import (
    AdmmState,
    GflSolution,
    SplitProblem,
    degrees_of_freedom,
    gfl_objective,
    logistic_surrogate,
    mle_log_odds,
    negative_log_likelihood,
    plateau_labels,
    solve_binomial_gfl,
)
from .kernel import gaussian_kernel_smooth
from .l2 import l2_effective_df, l2_graph_smoother
from .path import (
    fit_selected,
    information_criterion,
    lambda_grid,
    lambda_max_search,
    refit_negative_log_likelihood,
    select_lambda,
    select_lambda_bic,
    solution_path,
)

__all__ = [
    "AdmmState",
    "GflSolution",
    "SplitProblem",
    "degrees_of_freedom",
    "fit_selected",
    "fl1d_objective",
    "fused_plateaus",
    "gaussian_kernel_smooth",
    "gfl_objective",
    "information_criterion",
    "l2_effective_df",
    "l2_graph_smoother",
    "lambda_grid",
    "lambda_max_search",
    "logistic_surrogate",
    "mle_log_odds",
    "negative_log_likelihood",
    "plateau_labels",
    "refit_negative_log_likelihood",
    "select_lambda",
    "select_lambda_bic",
    "solution_path",
    "solve_binomial_gfl",
    "solve_weighted_fl1d",
]
