"""Ensemble and time-series estimators for verifying the noise balance.

Variance with error bars, normalized autocorrelation, and exponential
decay-rate fits used to recover gamma_k from simulated data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError
from .langevin import ModeHistory


@dataclass(frozen=True)
class EnsembleStats:
    """Sample mean, unbiased variance, and the Gaussian-assumption standard
    error of the variance estimate."""

    mean: float
    variance: float
    stderr_variance: float
    n: int


@dataclass(frozen=True)
class AcfEstimate:
    """Normalized autocorrelation values at lag times ``lags`` (multiples of dt)."""

    lags: np.ndarray
    values: np.ndarray


def sample_variance(values) -> EnsembleStats:
    """Unbiased variance with stderr = variance * sqrt(2/(n-1)).

    The error bar assumes Gaussian marginals and independent samples.
    """
    x = np.asarray(values, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise InsufficientDataError("need at least 2 samples for a variance")
    var = float(np.var(x, ddof=1))
    return EnsembleStats(
        mean=float(np.mean(x)),
        variance=var,
        stderr_variance=float(var * np.sqrt(2.0 / (n - 1))),
        n=n,
    )


def autocorrelation(history: ModeHistory, max_lag: int) -> AcfEstimate:
    """Biased (divide-by-N) normalized autocorrelation of a zero-mean history.

    c(l) = (1/N) sum_n x_n x_{n+l}, normalized by c(0).  No sample-mean
    subtraction: the process mean is zero by construction, and keeping the
    raw moments makes a pure exponential decay its own autocorrelation.
    The 1/N normalization keeps the estimated sequence positive
    semidefinite at the cost of a (N-l)/N bias factor.
    """
    x = history.values
    n = x.size
    if not 0 <= max_lag < n:
        raise InsufficientDataError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    c0 = float(np.dot(x, x)) / n
    if c0 == 0.0:
        raise InsufficientDataError("history is identically zero; ACF undefined")
    vals = np.empty(max_lag + 1)
    vals[0] = 1.0
    for lag in range(1, max_lag + 1):
        vals[lag] = float(np.dot(x[:-lag], x[lag:])) / n / c0
    return AcfEstimate(lags=np.arange(max_lag + 1) * history.dt, values=vals)


def fit_exponential_rate(
    acf: AcfEstimate, threshold: float = 0.1, min_lags: int = 3
) -> float:
    """Least-squares decay rate from the window where the ACF exceeds ``threshold``.

    Fits -log(acf) vs lag time over the contiguous window starting at lag 0
    and returns the slope.  The fit is weighted by the ACF value: the
    sampling noise of the ACF is roughly lag-independent, so after the log
    transform the residual noise grows like 1/acf and small values near the
    window edge would otherwise dominate.  Raises InsufficientDataError when
    fewer than ``min_lags`` lags are usable.
    """
    above = acf.values > threshold
    n_window = int(np.argmin(above)) if not above.all() else above.size
    if n_window < min_lags:
        raise InsufficientDataError(
            f"only {n_window} lags above threshold {threshold}; need {min_lags}"
        )
    t = acf.lags[:n_window]
    y = -np.log(acf.values[:n_window])
    slope, _ = np.polyfit(t, y, 1, w=acf.values[:n_window])
    return float(slope)
