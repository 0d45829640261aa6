"""Shannon entropy of word distributions, market information, and the
significance bound of a zero-information null.

Market information at order L+1 is 1 + H(L-word) - H((L+1)-word), computed
with both word distributions aligned on a common start-index range so the
chain rule holds exactly and the value is guaranteed nonnegative.  Under the
no-information null the estimator is asymptotically Gamma(2**(L-1),
1/((n - m*L) ln 2)), which yields the one-sided confidence bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .series import IndicatorSeries, PriceSeries, WordDistribution, compute_returns, \
    to_indicators, _word_count_array

LN2 = math.log(2.0)


def _entropy_bits(counts: np.ndarray, total: int) -> float:
    """Plug-in Shannon entropy in bits; zero-count cells contribute nothing."""
    c = counts[counts > 0]
    if c.size == 0:
        raise ValueError("no observations")
    p = c / float(total)
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(dist: WordDistribution) -> float:
    """Shannon entropy of a word distribution, in bits."""
    counts = np.array([c for c in dist.counts.values() if c > 0], dtype=np.int64)
    return _entropy_bits(counts, dist.total)


def empirical_entropy(j: IndicatorSeries, word_length: int) -> float:
    """Plug-in entropy of length-L words over the maximal window range."""
    counts, n_windows = _word_count_array(j, word_length)
    return _entropy_bits(counts, n_windows)


def _pair_entropies(j: IndicatorSeries, lags: int) -> tuple[float, float, int]:
    """(prefix entropy, full entropy, window count) for orders (lags, lags+1).

    Both distributions use the start-index range of the longer word, so the
    prefix counts are exact marginals of the full counts (code >> 1).
    """
    full, n_windows = _word_count_array(j, lags + 1)
    prefix = full.reshape(-1, 2).sum(axis=1)
    return _entropy_bits(prefix, n_windows), _entropy_bits(full, n_windows), n_windows


def market_information(j: IndicatorSeries, lags: int) -> float:
    """Information the last `lags` indicators carry about the next one.

    Equals 1 + H(lags-word) - H((lags+1)-word) in bits; zero when the next
    indicator is an unbiased coin flip regardless of the preceding word, and
    1 when the word determines the next indicator.
    """
    if lags < 1:
        raise ValueError("lags must be a positive integer")
    h_prefix, h_full, _ = _pair_entropies(j, lags)
    return 1.0 + h_prefix - h_full


def gamma_quantile(shape: int, scale: float, p: float) -> float:
    """Quantile of Gamma(shape, scale) for integer shape >= 1.

    The survival function of an integer-shape (Erlang) variable is a finite
    sum, exp(-y) * sum_{j<shape} y**j/j!, so the quantile is found by
    bracketed bisection without any incomplete-gamma machinery.
    """
    if not isinstance(shape, (int, np.integer)) or shape < 1:
        raise ValueError("shape must be an integer >= 1")
    if not scale > 0.0:
        raise ValueError("scale must be positive")
    if not 0.0 < p < 1.0:
        raise ValueError("quantile level must be in (0, 1)")
    q = 1.0 - p

    def survival(y: float) -> float:
        # every term exp(-y) * y**j / j! is <= 1, so no overflow
        log_term = -y
        log_y = math.log(y)
        total = 0.0
        for jj in range(int(shape)):
            if log_term > -745.0:
                total += math.exp(log_term)
            log_term += log_y - math.log(jj + 1)
        return total

    hi = float(max(int(shape), 1))
    for _ in range(200):
        if survival(hi) <= q:
            break
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if survival(mid) > q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return scale * 0.5 * (lo + hi)


@dataclass(frozen=True)
class SignificanceBound:
    """One-sided confidence bound for market information under the null."""

    shape: int
    scale: float
    confidence: float
    value: float


def significance_bound(n: int, lags: int, m: int, confidence: float) -> SignificanceBound:
    """Bound below which an estimated information is consistent with zero.

    n is the number of prices minus one.  The null distribution of the
    order-(lags+1) information estimate is Gamma(2**(lags-1),
    1/((n - m*lags) ln 2)); the bound is its `confidence` quantile.
    """
    if lags < 1:
        raise ValueError("lags must be a positive integer")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    dof = n - m * lags
    if dof <= 0:
        raise ValueError("degrees of freedom exhausted")
    shape = 2 ** (lags - 1)
    scale = 1.0 / (dof * LN2)
    return SignificanceBound(shape, scale, confidence, gamma_quantile(shape, scale, confidence))


@dataclass(frozen=True)
class EntropyProfile:
    """Word entropies H[order, m] for order = 1..L_max+1 (rows) and each m (columns).

    Cells that cannot be estimated (series too short) hold NaN and n_obs 0.
    """

    m_values: tuple
    L_max: int
    H: np.ndarray
    n_obs: np.ndarray

    def cell(self, order: int, m: int) -> float:
        return float(self.H[order - 1, self.m_values.index(m)])


@dataclass(frozen=True)
class InformationProfile:
    """Market information I[order, m], partial information, and null bounds.

    Rows index the word order: row ell-1 holds the order-ell information
    1 + H(order ell-1) - H(order ell) with the convention H(order 0) = 0, so
    the first row is 1 - H(single indicator).  Partial information is the
    first difference of rows (base case: first row of I itself).  Bounds are
    null quantiles for orders >= 2; the order-1 cell has no integer-shape
    null and is NaN.  partial_bounds are first differences of bounds with the
    absent order-1 bound treated as zero.
    """

    m_values: tuple
    L_max: int
    n: int
    confidence: float
    I: np.ndarray
    partial: np.ndarray
    bounds: np.ndarray
    partial_bounds: np.ndarray

    def cell(self, order: int, m: int) -> float:
        return float(self.I[order - 1, self.m_values.index(m)])


def information_profile(
    j_family: Mapping[int, IndicatorSeries],
    L_max: int,
    m_values: Sequence[int],
    confidence: float = 0.95,
) -> tuple[EntropyProfile, InformationProfile]:
    """Entropy and information grids over orders 1..L_max+1 and the given m values.

    j_family maps each m to the indicator series built at horizon m from one
    underlying price series; all series must imply the same price count.
    """
    if L_max < 1:
        raise ValueError("L_max must be a positive integer")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    m_values = tuple(int(m) for m in m_values)
    if len(set(m_values)) != len(m_values) or not m_values:
        raise ValueError("m_values must be nonempty and distinct")

    n_orders = L_max + 1
    shape = (n_orders, len(m_values))
    H = np.full(shape, np.nan)
    n_obs = np.zeros(shape, dtype=np.int64)
    I = np.full(shape, np.nan)
    partial = np.full(shape, np.nan)
    bounds = np.full(shape, np.nan)
    partial_bounds = np.full(shape, np.nan)

    n_underlying = None
    for col, m in enumerate(m_values):
        j = j_family[m]
        if j.m != m:
            raise ValueError(f"indicator series at key {m} has horizon {j.m}")
        n = len(j.bits) + m - 1  # price count minus one
        if n_underlying is None:
            n_underlying = n
        elif n != n_underlying:
            raise ValueError("indicator series disagree on underlying price count")

        for order in range(1, n_orders + 1):
            row = order - 1
            max_windows = len(j.bits) - (order - 1) * m
            if max_windows < 1:
                continue
            counts, n_windows = _word_count_array(j, order)
            H[row, col] = _entropy_bits(counts, n_windows)
            n_obs[row, col] = n_windows
            if order == 1:
                I[row, col] = 1.0 - H[row, col]
            else:
                prefix = counts.reshape(-1, 2).sum(axis=1)
                I[row, col] = 1.0 + _entropy_bits(prefix, n_windows) - H[row, col]
                lags = order - 1
                if n - m * lags > 0:
                    bounds[row, col] = significance_bound(n, lags, m, confidence).value

        finite = np.isfinite(I[:, col])
        if finite[0]:
            partial[0, col] = I[0, col]
        for row in range(1, n_orders):
            if finite[row] and finite[row - 1]:
                partial[row, col] = I[row, col] - I[row - 1, col]
        if np.isfinite(bounds[1, col]):
            # no order-1 bound exists, so the first difference starts from zero
            partial_bounds[1, col] = bounds[1, col]
        for row in range(2, n_orders):
            if np.isfinite(bounds[row, col]) and np.isfinite(bounds[row - 1, col]):
                partial_bounds[row, col] = bounds[row, col] - bounds[row - 1, col]

    for arr in (H, I, partial, bounds, partial_bounds):
        arr.flags.writeable = False
    n_obs.flags.writeable = False
    ep = EntropyProfile(m_values, L_max, H, n_obs)
    ip = InformationProfile(m_values, L_max, int(n_underlying), confidence,
                            I, partial, bounds, partial_bounds)
    return ep, ip


def profile_from_prices(
    prices: PriceSeries,
    L_max: int = 7,
    m_values: Sequence[int] = (1, 2, 3),
    confidence: float = 0.95,
) -> tuple[EntropyProfile, InformationProfile]:
    """Build indicator series at each m from one price series, then profile them."""
    j_family = {int(m): to_indicators(compute_returns(prices, int(m)))
                for m in m_values}
    return information_profile(j_family, L_max, m_values, confidence)


def entropy_rate_slope(profile: EntropyProfile, m: int, lags: Sequence[int]) -> float:
    """OLS slope of word entropy against the lag count.

    Fits H(order lag+1) against lag for the given lag values: lag L pairs
    with the order-(L+1) word, matching the axis on which the entropy growth
    is usually read.  A sign sequence with no memory has slope 1.
    """
    col = profile.m_values.index(m)
    xs, ys = [], []
    for lag in lags:
        order = lag + 1
        if not 1 <= order <= profile.L_max + 1:
            continue
        h = profile.H[order - 1, col]
        if np.isfinite(h):
            xs.append(float(lag))
            ys.append(float(h))
    if len(xs) < 2:
        raise ValueError("insufficient range")
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return float(slope)


def _matrix_to_lists(arr: np.ndarray) -> list:
    return [[None if not np.isfinite(v) else float(v) for v in row] for row in arr]


def profile_to_json(ep: EntropyProfile, ip: InformationProfile) -> str:
    """Serialize a profile pair to a JSON object with null for absent cells."""
    payload = {
        "m_values": list(ep.m_values),
        "L_max": ep.L_max,
        "H": _matrix_to_lists(ep.H),
        "I": _matrix_to_lists(ip.I),
        "partial": _matrix_to_lists(ip.partial),
        "bounds": _matrix_to_lists(ip.bounds),
        "confidence": ip.confidence,
        "n": ip.n,
    }
    return json.dumps(payload, indent=2)


def profile_to_csv(ep: EntropyProfile, ip: InformationProfile) -> str:
    """Long-format CSV: one row per (order L, m) cell, blank for absent values."""
    def fmt(v: float) -> str:
        return "" if not np.isfinite(v) else repr(float(v))

    lines = [
        f"# n={ip.n} confidence={ip.confidence} m_values={','.join(map(str, ep.m_values))}",
        "L,m,H,I,partial,bound",
    ]
    for row in range(ep.L_max + 1):
        for col, m in enumerate(ep.m_values):
            lines.append(",".join([
                str(row + 1), str(m),
                fmt(ep.H[row, col]), fmt(ip.I[row, col]),
                fmt(ip.partial[row, col]), fmt(ip.bounds[row, col]),
            ]))
    return "\n".join(lines) + "\n"
