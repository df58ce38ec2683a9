from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import trapezoid

from spatialdensity.data_loader.records import Records
from spatialdensity.exceptions import EmptyInputError, InvalidConfigError
from spatialdensity.helpers.rng import substream
from spatialdensity.radsim.spectra import Spectrum

from .injection import bootstrap_background, inject_anomaly
from .ks import Channels, ks_one_sample, ks_two_sample

METHODS = ("local", "global", "two-sample")
MAX_REDRAWS = 100


@dataclass(frozen=True)
class RocCurve:
    """Step ROC over every observed statistic value, starting at (0, 0)."""

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"threshold": self.thresholds, "fpr": self.fpr, "tpr": self.tpr})


def _check(values, what: str) -> np.ndarray:
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise EmptyInputError(f"{what} statistics are empty")
    return values


def fpr_at(null, threshold: float) -> float:
    """Fraction of null statistics at or above ``threshold``."""
    null = _check(null, "null")
    return float(np.mean(null >= threshold))


def threshold_for_fpr(null, alpha: float) -> float:
    """Smallest observed threshold whose false-positive rate is at most ``alpha``."""
    null = np.sort(_check(null, "null"))
    candidates = np.unique(null)
    fprs = 1.0 - np.searchsorted(null, candidates, side="left") / null.size
    ok = np.flatnonzero(fprs <= alpha)
    if ok.size == 0:
        return float(np.nextafter(null[-1], np.inf))
    return float(candidates[ok[0]])


def roc_curve(null, alternative) -> RocCurve:
    """
    ROC of the rule "flag when D >= t", swept over all pooled statistic values.

    Raises:
        EmptyInputError: either set is empty.
    """
    null = np.sort(_check(null, "null"))
    alt = np.sort(_check(alternative, "alternative"))
    thresholds = np.unique(np.concatenate([null, alt]))[::-1]

    fpr = 1.0 - np.searchsorted(null, thresholds, side="left") / null.size
    tpr = 1.0 - np.searchsorted(alt, thresholds, side="left") / alt.size
    thresholds = np.concatenate([[np.inf], thresholds])
    fpr = np.concatenate([[0.0], fpr])
    tpr = np.concatenate([[0.0], tpr])
    return RocCurve(thresholds=thresholds, fpr=fpr, tpr=tpr, auc=float(trapezoid(tpr, fpr)))


@dataclass
class DetectionRun:
    """Paired null and alternative statistics per method for one (T, rate, source) setting."""

    seconds: int
    rate: float
    source: str
    sites: np.ndarray
    null: Dict[str, np.ndarray] = field(default_factory=dict)
    alternative: Dict[str, np.ndarray] = field(default_factory=dict)
    replicates: Optional[np.ndarray] = None

    @property
    def replicate_index(self) -> np.ndarray:
        """Stream index of each kept replicate."""
        if self.replicates is None:
            return np.arange(len(self.sites))
        return self.replicates

    def roc(self, method: str) -> RocCurve:
        return roc_curve(self.null[method], self.alternative[method])

    def stats_frame(self) -> pd.DataFrame:
        frames = []
        for method in self.null:
            frames.append(
                pd.DataFrame(
                    {
                        "T": self.seconds,
                        "rate": self.rate,
                        "source": self.source,
                        "method": method,
                        "replicate": self.replicate_index,
                        "site": self.sites,
                        "null": self.null[method],
                        "alternative": self.alternative[method],
                    }
                )
            )
        return pd.concat(frames, ignore_index=True)


@dataclass(frozen=True)
class References:
    """What each method compares an observation against."""

    local_cdf: Optional[np.ndarray] = None
    global_cdf: Optional[np.ndarray] = None
    train_histograms: Optional[np.ndarray] = None

    def methods(self) -> List[str]:
        available = []
        if self.local_cdf is not None:
            available.append("local")
        if self.global_cdf is not None:
            available.append("global")
        if self.train_histograms is not None:
            available.append("two-sample")
        return available


def _statistic(method: str, observation, site: int, refs: References, channels: Channels) -> float:
    if method == "local":
        return ks_one_sample(observation, refs.local_cdf[site], site, channels).statistic
    if method == "global":
        return ks_one_sample(observation, refs.global_cdf, site, channels).statistic
    if method == "two-sample":
        return ks_two_sample(observation, refs.train_histograms[site], site, channels).statistic
    raise InvalidConfigError(f"Unsupported detection method: {method}")


def _eligible_sites(test: Records, refs: References, methods: List[str], channels: Channels) -> np.ndarray:
    counts = np.bincount(test.sites, minlength=test.num_sites)
    eligible = counts > 0
    if "two-sample" in methods:
        train = refs.train_histograms
        if channels is not None:
            train = train[:, channels[0] : channels[1] + 1]
        eligible &= train.sum(axis=1) > 0
    return np.flatnonzero(eligible)


def _has_counts(observation: np.ndarray, channels: Channels) -> bool:
    if channels is not None:
        observation = observation[channels[0] : channels[1] + 1]
    return bool(observation.sum() > 0)


def _redraw(draw: Callable[[], Tuple[int, np.ndarray]], channels: Channels):
    """
    Calls ``draw`` until its observation has counts in the tested channels.

    Returns:
        (site, observation, redraws); site and observation are None once
        ``MAX_REDRAWS`` draws have all come back empty.
    """
    for attempt in range(MAX_REDRAWS):
        site, observation = draw()
        if _has_counts(observation, channels):
            return site, observation, attempt
    return None, None, MAX_REDRAWS


def _report_empty_draws(what: str, redrawn: int, skipped: int, replicates: int):
    if redrawn or skipped:
        logger.warning(
            f"{what}: redrew {redrawn} empty bootstrap observations, "
            f"skipped {skipped} of {replicates} replicates"
        )
    if skipped == replicates:
        raise EmptyInputError(f"{what}: every bootstrap observation was empty")


def run_detection(
    test: Records,
    refs: References,
    seconds: int,
    rate: float,
    source: Spectrum,
    replicates: int,
    seed: int,
    methods: Optional[List[str]] = None,
    channels: Channels = None,
) -> DetectionRun:
    """
    Simulates ``replicates`` paired observations and scores them with every method.

    Replicate ``r`` draws its site uniformly among sites with test rows, then
    one bootstrap observation (null) and one bootstrap + anomaly observation
    (alternative), from the stream named ``("replicate", r)``. An observation
    without counts in the tested channels is redrawn from the same stream, the
    null one together with its site; a replicate still empty after
    ``MAX_REDRAWS`` draws is skipped.
    """
    methods = methods or refs.methods()
    missing = set(methods) - set(refs.methods())
    if missing:
        raise InvalidConfigError(f"no reference available for methods {sorted(missing)}")
    if replicates < 1:
        raise InvalidConfigError("replicates must be >= 1")

    eligible = _eligible_sites(test, refs, methods, channels)
    if eligible.size == 0:
        raise EmptyInputError("no site has test rows")
    rows_by_site = {int(s): test.for_site(int(s)) for s in eligible}

    kept: List[int] = []
    sites: List[int] = []
    null: Dict[str, List[float]] = {m: [] for m in methods}
    alternative: Dict[str, List[float]] = {m: [] for m in methods}
    redrawn = 0
    for r in range(replicates):
        rng = substream(seed, "replicate", r)

        def draw_background():
            site = int(eligible[rng.integers(0, eligible.size)])
            return site, bootstrap_background(rows_by_site[site], seconds, rng)

        site, background, extra = _redraw(draw_background, channels)
        redrawn += extra
        if site is None:
            continue
        _, anomalous, extra = _redraw(
            lambda: (site, inject_anomaly(rows_by_site[site], seconds, rate, source, rng)),
            channels,
        )
        redrawn += extra
        if anomalous is None:
            continue

        kept.append(r)
        sites.append(site)
        for method in methods:
            null[method].append(_statistic(method, background, site, refs, channels))
            alternative[method].append(_statistic(method, anomalous, site, refs, channels))

    label = f"Detection T={seconds} rate={rate} source={source.name}"
    _report_empty_draws(label, redrawn, replicates - len(kept), replicates)
    logger.debug(f"{label}: {len(kept)} replicates")
    return DetectionRun(
        seconds=seconds,
        rate=rate,
        source=source.name,
        sites=np.asarray(sites, dtype=np.int64),
        null={m: np.asarray(v) for m, v in null.items()},
        alternative={m: np.asarray(v) for m, v in alternative.items()},
        replicates=np.asarray(kept, dtype=np.int64),
    )


def empirical_null(
    test: Records,
    reference_cdf: np.ndarray,
    seconds: int,
    replicates: int,
    seed: int,
    channels: Channels = None,
) -> np.ndarray:
    """
    Sorted one-sample KS statistics of anomaly-free bootstrap observations.
    Empty observations are redrawn as in :func:`run_detection`.
    """
    reference_cdf = np.asarray(reference_cdf, dtype=float)
    if reference_cdf.ndim == 1:
        refs = References(global_cdf=reference_cdf)
        method = "global"
    else:
        refs = References(local_cdf=reference_cdf)
        method = "local"
    eligible = _eligible_sites(test, refs, [method], channels)
    if eligible.size == 0:
        raise EmptyInputError("no site has test rows")

    stats = []
    redrawn = 0
    for r in range(replicates):
        rng = substream(seed, "null", r)

        def draw():
            site = int(eligible[rng.integers(0, eligible.size)])
            return site, bootstrap_background(test.for_site(site), seconds, rng)

        site, observation, extra = _redraw(draw, channels)
        redrawn += extra
        if site is not None:
            stats.append(_statistic(method, observation, site, refs, channels))

    _report_empty_draws("Empirical null", redrawn, replicates - len(stats), replicates)
    return np.sort(np.asarray(stats))
