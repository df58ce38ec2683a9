from .gibbs import (
    GibbsState,
    PosteriorSamples,
    beta_conditional,
    dic,
    run_gibbs,
    sample_prior,
    select_lambda_dic,
)
from .penalty import PenaltyMatrix, build_penalty_matrix, incidence_matrix
from .polya_gamma import polya_gamma_mean, sample_polya_gamma

__all__ = [
    "GibbsState",
    "PenaltyMatrix",
    "PosteriorSamples",
    "beta_conditional",
    "build_penalty_matrix",
    "dic",
    "incidence_matrix",
    "polya_gamma_mean",
    "run_gibbs",
    "sample_polya_gamma",
    "sample_prior",
    "select_lambda_dic",
]
