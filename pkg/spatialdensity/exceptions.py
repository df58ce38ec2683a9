"""spatialdensity's custom exceptions.

This module contains the implementation of Custom Exceptions.

"""


class SpatialDensityError(Exception):
    """
    Base class for every error raised by spatialdensity.

    Args:
        Exception (Exception): SpatialDensityError
    """


class InvalidDimensionError(SpatialDensityError, ValueError):
    """
    Raised when a grid, tree or bin dimension is not applicable, or when two
    arrays that must share a grid do not.

    Args:
        Exception (Exception): InvalidDimensionError
    """


class InvalidGraphError(SpatialDensityError, ValueError):
    """
    Raised when an edge list contains self-loops, duplicates or endpoints
    outside the vertex range.

    Args:
        Exception (Exception): InvalidGraphError
    """


class NumericInputError(SpatialDensityError, ValueError):
    """
    Raised when an input vector contains non-finite values.

    Args:
        Exception (Exception): NumericInputError
    """


class InvalidWeightError(SpatialDensityError, ValueError):
    """
    Raised when a weight that must be positive is not.

    Args:
        Exception (Exception): InvalidWeightError
    """


class DomainError(SpatialDensityError, ValueError):
    """
    Raised when an argument falls outside the domain of a formula
    (e.g. a non-positive distance in the count-rate equation).

    Args:
        Exception (Exception): DomainError
    """


class EmptyInputError(SpatialDensityError, ValueError):
    """
    Raised when an operation receives an empty path, sample set,
    observation or statistic array.

    Args:
        Exception (Exception): EmptyInputError
    """


class UnsupportedOrderError(SpatialDensityError, ValueError):
    """
    Raised when a trend-filtering order outside {0, 1, 2} is requested.

    Args:
        order (int): The requested order.
    """

    def __init__(self, order):
        self.order = order
        super().__init__(
            f"Unsupported trend filtering order K={order}. Supported orders are 0, 1 and 2."
        )

    def __reduce__(self):
        return (self.__class__, (self.order,))


class UnknownFamilyError(SpatialDensityError, ValueError):
    """
    Raised when a Gaussian benchmark family tag is not recognised.

    Args:
        family (str): The unknown family tag.
    """

    def __init__(self, family):
        self.family = family
        super().__init__(f"Unknown Gaussian field family: '{family}'")

    def __reduce__(self):
        return (self.__class__, (self.family,))


class InvalidConfigError(SpatialDensityError, ValueError):
    """
    Raised when config value is not applicable
    Args:
        Exception (Exception): InvalidConfigError
    """


class SolverError(SpatialDensityError):
    """
    Base class for numerical solver failures.

    Args:
        Exception (Exception): SolverError
    """


class SolverDivergenceError(SolverError):
    """
    Raised when an iterate of the ADMM solver becomes non-finite.

    Args:
        iteration (int): Index of the offending iteration.
        lam (float, optional): Penalty value being solved for.
    """

    def __init__(self, iteration, lam=None):
        self.iteration = iteration
        self.lam = lam
        message = f"Solver diverged at iteration {iteration}"
        if lam is not None:
            message += f" (lambda={lam:.6g})"
        super().__init__(message)

    def __reduce__(self):
        return (self.__class__, (self.iteration, self.lam))


class CholeskyError(SolverError):
    """
    Raised when the Gibbs precision matrix cannot be factorised even after
    jittering its diagonal.

    Args:
        retries (int): Number of jittered attempts made.
    """

    def __init__(self, retries):
        self.retries = retries
        super().__init__(
            f"Cholesky factorisation failed after {retries} jittered retries"
        )

    def __reduce__(self):
        return (self.__class__, (self.retries,))


class NodeSmoothingError(SolverError):
    """
    Raised when smoothing a single node of the dyadic tree fails.
    Wraps the original error and names the node.

    Args:
        node (str): Binary label of the node ("" for the root).
        cause (Exception): The original error.
    """

    def __init__(self, node, cause):
        self.node = node
        self.cause = cause
        label = node if node else "root"
        super().__init__(f"Smoothing failed at node '{label}': {cause}")

    def __reduce__(self):
        return (self.__class__, (self.node, self.cause))


class InputFileError(SpatialDensityError, OSError):
    """
    Raised when an input file is missing or cannot be parsed.

    Args:
        path (str): The offending path.
        reason (str): What went wrong.
    """

    def __init__(self, path, reason="file not found"):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{reason}: {path}")

    def __reduce__(self):
        return (self.__class__, (self.path, self.reason))


class UnknownSiteError(SpatialDensityError, ValueError):
    """
    Raised when ingested records refer to sites outside the configured set.

    Args:
        rows (list): Row indices (0-based) of the offending records.
        sites (list): The unknown site ids, aligned with ``rows``.
    """

    def __init__(self, rows, sites):
        self.rows = list(rows)
        self.sites = list(sites)
        listing = ", ".join(f"row {r} (site {s})" for r, s in zip(self.rows, self.sites))
        super().__init__(f"Records reference unknown sites: {listing}")

    def __reduce__(self):
        return (self.__class__, (self.rows, self.sites))
