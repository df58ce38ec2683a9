"""
Constants used in the spatialdensity package.
"""

# Probability clamp applied before forming logistic surrogates and to merged splits
PROB_EPS = 1e-6

# Curvature floor for sites without trials
OMEGA_FLOOR = 1e-12

# Plateau detection: |z[i+1] - z[i]| <= FUSION_TOL * max(1, |z[i]|)
FUSION_TOL = 1e-8

# Default ADMM settings
DEFAULT_MAX_ITERS = 10_000
DEFAULT_TOL_ABS = 1e-6
DEFAULT_TOL_REL = 1e-4
DEFAULT_ALPHA0 = 1.0
RESIDUAL_BALANCE_RATIO = 10.0
RESIDUAL_BALANCE_FACTOR = 2.0

# Lambda grid
DEFAULT_LAMBDA_GRID_SIZE = 30
DEFAULT_LAMBDA_RATIO = 1e-3

# Dyadic tree
DEFAULT_NUM_BINS = 2048
DEFAULT_TREE_DEPTH = 11
EMPTY_NODE_SPLIT = 0.5

# Radiological scenario defaults
DEFAULT_BACKGROUND_RATE = 40.0
DEFAULT_CELL_METERS = 50.0
CALIBRATION_MCI = 0.000844
CALIBRATION_RATE = 630.0
CALIBRATION_DISTANCE = 0.05
AIR_ATTENUATION = 0.0100029

# Gaussian benchmark support
GAUSSIAN_SUPPORT = (-6.0, 6.0)
GAUSSIAN_MEAN_RANGE = (-3.0, 3.0)

# Bayesian trend filtering
DEFAULT_SWEEPS = 5000
DEFAULT_BURN_IN = 1000
CHOLESKY_JITTER = 1e-8
CHOLESKY_RETRIES = 3

# Detection protocol sweep
DEFAULT_DWELL_TIMES = [2, 4, 6, 10, 14, 20, 30, 40, 60, 90, 120, 180]
DEFAULT_ANOMALY_RATES = [0.1, 0.25, 0.5, 1, 2, 5, 10, 15, 20, 25, 50]
DEFAULT_TRAIN_FRACTION = 0.8

SMOOTHER_CHOICES = ["gfl", "gaussian-kernel", "l2", "mle", "bayes-gtf"]
SELECTION_CRITERIA = ["bic", "aic", "aicc"]
GAUSSIAN_FAMILIES = [
    "piecewise-constant",
    "piecewise-linear",
    "piecewise-quadratic",
    "smooth",
]
OCCLUSION_QUADRANTS = ["nw", "ne", "sw", "se"]
BUILTIN_SPECTRA = ["background", "cesium", "cobalt"]

# CLI exit codes
EXIT_OK = 0
EXIT_IO = 2
EXIT_SOLVER = 3
EXIT_USAGE = 64

# Output artifact names
DENSITY_FILE = "density.txt"
DIAGNOSTICS_FILE = "diagnostics.json"
HISTOGRAM_FILE = "histograms.txt"
RECORDS_FILE = "records.txt"
TRUTH_FILE = "truth.txt"
INJECTED_FILE = "injected.txt"
STATS_FILE = "stats.csv"
ROC_FILE = "roc.csv"
SUMMARY_FILE = "summary.csv"
BENCH_FILE = "bench.csv"
POSTERIOR_FILE = "posterior.csv"
LOG_FILE = "spatialdensity.log"
