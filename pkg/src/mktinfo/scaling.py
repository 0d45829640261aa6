"""Second-order structure function of log-prices and Hurst estimation from
the slope of its log-log curve.

A self-similar signal has M2(delta) = mean (x[i+delta] - x[i])**2
proportional to delta**(2H), so the OLS slope of log M2 against log delta
over a fit range of small scales estimates 2H.  Departures from linearity
(read off the second differences of the curve) flag non-scaling dynamics.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_MAX_SCALE = 20
DEFAULT_FIT_RANGE = (1, 5)


def structure_function(logprices: np.ndarray, scales: Sequence[int]):
    """Mean squared increment at each usable scale (overlapping windows).

    Scales of at least the series length carry no increments; such scales
    are dropped with a warning.  Returns (usable scales, moments).
    """
    x = np.asarray(logprices, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-D series with at least 2 points")
    req = sorted({int(s) for s in scales})
    if not req or req[0] < 1:
        raise ValueError("scales must be positive integers")
    usable = [s for s in req if s <= x.size - 1]
    dropped = [s for s in req if s > x.size - 1]
    if dropped:
        warnings.warn(f"scales beyond series length dropped: {dropped}"
                      f" (usable scales: 1..{x.size - 1})")
    moments = np.array([np.mean((x[s:] - x[:-s]) ** 2) for s in usable])
    return np.array(usable, dtype=np.int64), moments


def fit_loglog(scales: np.ndarray, moments: np.ndarray, fit_range: tuple):
    """OLS fit of log2 moment against log2 scale inside fit_range (inclusive)."""
    scales = np.asarray(scales)
    moments = np.asarray(moments, dtype=np.float64)
    lo, hi = fit_range
    mask = (scales >= lo) & (scales <= hi)
    if int(mask.sum()) < 2:
        raise ValueError(
            f"fewer than 2 scales in fit range {lo}..{hi};"
            f" usable scales: {list(map(int, scales))}")
    if np.any(moments[mask] <= 0.0):
        raise ValueError("degenerate moment in fit range")
    slope, intercept = np.polyfit(np.log2(scales[mask]), np.log2(moments[mask]), 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class LogLogCurve:
    """Structure-function curve in log2-log2 coordinates with its OLS fit."""

    scales: np.ndarray
    moments: np.ndarray
    fit_range: tuple
    slope: float
    intercept: float
    hurst_estimate: float

    def __post_init__(self):
        s = np.asarray(self.scales, dtype=np.int64)
        m = np.asarray(self.moments, dtype=np.float64)
        s.flags.writeable = False
        m.flags.writeable = False
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "moments", m)
        object.__setattr__(self, "fit_range", tuple(self.fit_range))

    @property
    def log2_scales(self) -> np.ndarray:
        return np.log2(self.scales.astype(np.float64))

    @property
    def log2_moments(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(self.moments)

    @property
    def in_fit_range(self) -> np.ndarray:
        lo, hi = self.fit_range
        return (self.scales >= lo) & (self.scales <= hi)

    def second_differences(self) -> np.ndarray:
        """Changes of the local log-log slope between consecutive scale pairs.

        Zero for an exact power law; large values indicate curvature or
        oscillation in the scaling plot.
        """
        x = self.log2_scales
        y = self.log2_moments
        local = np.diff(y) / np.diff(x)
        return np.diff(local)

    def to_csv(self) -> str:
        lines = [
            f"# slope={self.slope!r} hurst_estimate={self.hurst_estimate!r}"
            f" intercept={self.intercept!r}"
            f" fit_range={self.fit_range[0]}..{self.fit_range[1]}",
            "log2_scale,log2_moment,in_fit_range",
        ]
        for ls, lm, f in zip(self.log2_scales, self.log2_moments, self.in_fit_range):
            lines.append(f"{float(ls)!r},{float(lm)!r},{int(f)}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "scales": [int(s) for s in self.scales],
            "log2_scale": [float(v) for v in self.log2_scales],
            "log2_moment": [float(v) for v in self.log2_moments],
            "in_fit_range": [bool(b) for b in self.in_fit_range],
            "fit_range": list(self.fit_range),
            "slope": self.slope,
            "intercept": self.intercept,
            "hurst_estimate": self.hurst_estimate,
            "second_differences": [float(v) for v in self.second_differences()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def estimate_hurst(logprices: np.ndarray, scales: Sequence[int] | None = None,
                   fit_range: tuple | None = None) -> LogLogCurve:
    """Structure-function Hurst estimate: H = slope / 2 of the log-log fit.

    Defaults: scales 1..min(20, length-1), fit over scales 1..5.  The input
    is a log-price (or any level) series, not returns.
    """
    x = np.asarray(logprices, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-D series with at least 2 points")
    if scales is None:
        scales = range(1, min(DEFAULT_MAX_SCALE, x.size - 1) + 1)
    fit_range = tuple(fit_range) if fit_range is not None else DEFAULT_FIT_RANGE
    used, moments = structure_function(x, scales)
    if used.size == 0:
        raise ValueError(f"no usable scales requested;"
                         f" usable scales: 1..{x.size - 1}")
    slope, intercept = fit_loglog(used, moments, fit_range)
    return LogLogCurve(used, moments, fit_range, slope, intercept, slope / 2.0)
