"""Time-domain descriptor families: fused descriptors (per channel, fused
with a log-squared transformed copy) and temporal-spatial descriptors
(within channels and across all pairwise channel differences)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class TddParams:
    """Moment normalization and guard settings.

    k: exponent applied to the root moments before normalization.
    lambda_mode: "channel_median" divides by the median of m0^k across the
        window's channels; "unit" skips normalization.
    irf_standard: use m2/sqrt(m0*m4) instead of sqrt(m2/(m0*m4)) for the
        irregularity factor.
    """

    k: float = 0.1
    lambda_mode: str = "channel_median"
    eps: float = 1e-10
    irf_standard: bool = False

    def __post_init__(self):
        if not (0 < self.k <= 1):
            raise FeatureError(f"k must be in (0, 1], got {self.k}")
        if self.eps <= 0:
            raise FeatureError(f"eps must be positive, got {self.eps}")
        if self.lambda_mode not in ("channel_median", "unit"):
            raise FeatureError(f"unknown lambda_mode: {self.lambda_mode!r}")


def root_moments(x: np.ndarray) -> tuple[float, float, float]:
    """Root-squared moments of the signal and its first/second differences.

    All three are normalized by the original length N.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 3:
        raise FeatureError(f"signal too short for moment features: {n} < 3")
    dx = np.diff(x)
    ddx = np.diff(dx)
    m0 = np.sqrt(np.sum(x * x) / n)
    m2 = np.sqrt(np.sum(dx * dx) / n)
    m4 = np.sqrt(np.sum(ddx * ddx) / n)
    return float(m0), float(m2), float(m4)


def resolve_lambda(channels: np.ndarray, params: TddParams) -> float:
    """Normalization factor for one window: median of m0^k over channels."""
    if params.lambda_mode == "unit":
        return 1.0
    m0s = [root_moments(ch)[0] for ch in channels]
    lam = float(np.median(np.power(m0s, params.k)))
    return lam if lam > 0 else 1.0


def _core_features(x: np.ndarray, params: TddParams, lam: float):
    """Normalized moments plus sparseness and irregularity; shared by both
    descriptor families."""
    eps = params.eps
    m0t, m2t, m4t = root_moments(x)
    m0 = m0t**params.k / lam
    m2 = m2t**params.k / lam
    m4 = m4t**params.k / lam
    f1 = np.log(m0 + eps)
    f2 = np.log(m2 + eps)
    f3 = np.log(m4 + eps)
    sparseness = m0 / (np.sqrt(abs(m0 - m2)) * np.sqrt(abs(m0 - m4)) + eps)
    f4 = np.log(sparseness + eps)
    if params.irf_standard:
        irf = m2 / (np.sqrt(m0 * m4) + eps)
    else:
        irf = np.sqrt(m2 / (m0 * m4 + eps))
    f5 = np.log(irf + eps)
    return (m0, m2, m4), (f1, f2, f3, f4, f5)


def tdd_base(x: np.ndarray, params: TddParams | None = None, lam: float = 1.0) -> np.ndarray:
    """Six descriptors of one signal: log moments, sparseness, irregularity
    factor, and the waveform-length ratio of second to first differences."""
    params = params or TddParams()
    x = np.asarray(x, dtype=np.float64)
    _, (f1, f2, f3, f4, f5) = _core_features(x, params, lam)
    dx = np.diff(x)
    ddx = np.diff(dx)
    wlr = np.sum(np.abs(ddx)) / (np.sum(np.abs(dx)) + params.eps)
    f6 = np.log(wlr + params.eps)
    return np.array([f1, f2, f3, f4, f5, f6])


def fuse(a: np.ndarray, b: np.ndarray, eps: float = 1e-10) -> np.ndarray:
    """Element-wise cosine contributions: c_j = a_j b_j / (|a| |b|).

    The sum of the fused vector is the cosine similarity of a and b.
    """
    denom = np.linalg.norm(a) * np.linalg.norm(b) + eps
    return a * b / denom


def ftdd_window(samples: np.ndarray, params: TddParams | None = None) -> np.ndarray:
    """Fused descriptors for one multi-channel window: per channel, fuse the
    descriptors of the signal with those of log(x^2 + eps)."""
    params = params or TddParams()
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    transformed = np.log(samples * samples + params.eps)
    lam_orig = resolve_lambda(samples, params)
    lam_trans = resolve_lambda(transformed, params)
    rows = []
    for x, z in zip(samples, transformed):
        a = tdd_base(x, params, lam_orig)
        b = tdd_base(z, params, lam_trans)
        rows.append(fuse(a, b, params.eps))
    return np.concatenate(rows)


def ftdd_names(n_channels: int) -> list[str]:
    return [f"ch{i}_ftdd{j}" for i in range(n_channels) for j in range(6)]


def tsd_signal_features(
    x: np.ndarray, params: TddParams | None = None, lam: float = 1.0
) -> np.ndarray:
    """Seven descriptors of one signal: log moments, sparseness,
    irregularity factor, coefficient of variation, and the log of the
    absolute Teager-Kaiser energy sum."""
    params = params or TddParams()
    x = np.asarray(x, dtype=np.float64)
    eps = params.eps
    _, (f1, f2, f3, f4, f5) = _core_features(x, params, lam)
    std = float(np.std(x, ddof=1))
    cov = std / (abs(float(np.mean(x))) + eps)
    f7 = np.log(cov + eps)
    tkeo = x[1:-1] ** 2 - x[:-2] * x[2:]
    f8 = np.log(abs(float(np.sum(tkeo))) + eps)
    return np.array([f1, f2, f3, f4, f5, f7, f8])


def tsd_window(samples: np.ndarray, params: TddParams | None = None) -> np.ndarray:
    """Temporal-spatial descriptors: within-channel features followed by the
    features of every pairwise channel difference, lexicographic (i, j), i < j."""
    params = params or TddParams()
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    n_ch = samples.shape[0]
    if n_ch < 2:
        raise FeatureError("temporal-spatial descriptors need at least 2 channels")
    lam = resolve_lambda(samples, params)
    rows = [tsd_signal_features(x, params, lam) for x in samples]
    for i in range(n_ch):
        for j in range(i + 1, n_ch):
            rows.append(tsd_signal_features(samples[i] - samples[j], params, lam))
    return np.concatenate(rows)


def tsd_names(n_channels: int) -> list[str]:
    names = [f"ch{i}_tsd{j}" for i in range(n_channels) for j in range(7)]
    for i in range(n_channels):
        for j in range(i + 1, n_channels):
            names.extend(f"pair{i}_{j}_tsd{m}" for m in range(7))
    return names
