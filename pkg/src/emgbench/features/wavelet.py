"""Discrete wavelet transform (periodized sym8 filter bank) and the
per-subband features: energy, variance, standard deviation, waveform
length, and energy-weighted entropy."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tdd import FeatureError

# Symlet-8 scaling (decomposition low-pass) filter. Obtained by spectral
# factorization of the degree-8 half-band polynomial with the
# least-asymmetric root selection; validated by the orthonormality checks
# in WaveletFilter.
_SYM8_SCALING = (
    0.0018899503327594609,
    -0.0003029205147213668,
    -0.01495225833704823,
    0.003808752013890615,
    0.049137179673607506,
    -0.027219029917056003,
    -0.05194583810770904,
    0.3644418948353314,
    0.7771857517005235,
    0.4813596512583722,
    -0.061273359067658524,
    -0.1432942383508097,
    0.007607487324917605,
    0.03169508781149298,
    -0.0005421323317911481,
    -0.0033824159510061256,
)


@dataclass(frozen=True)
class WaveletFilter:
    """Orthonormal two-channel decomposition filter bank."""

    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.dec_lo, dtype=np.float64)
        hi = np.asarray(self.dec_hi, dtype=np.float64)
        object.__setattr__(self, "dec_lo", lo)
        object.__setattr__(self, "dec_hi", hi)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise FeatureError("filter pair must be two equal-length 1-D sequences")
        for h in (lo, hi):
            if abs(np.sum(h * h) - 1.0) > 1e-10:
                raise FeatureError(f"{self.name}: filter is not unit-norm")
            for m in range(1, h.size // 2):
                if abs(np.sum(h[: -2 * m] * h[2 * m :])) > 1e-10:
                    raise FeatureError(f"{self.name}: filter shifts are not orthogonal")

    @classmethod
    def sym8(cls) -> "WaveletFilter":
        lo = np.array(_SYM8_SCALING[::-1])
        # Quadrature mirror: hi[k] = (-1)^k lo[L-1-k]
        sign = np.where(np.arange(lo.size) % 2 == 0, 1.0, -1.0)
        hi = sign * lo[::-1]
        return cls(name="sym8", dec_lo=lo, dec_hi=hi)


@dataclass(frozen=True)
class SubbandSet:
    """Detail subbands D1..DJ (finest first) and the approximation AJ."""

    details: tuple[np.ndarray, ...]
    approx: np.ndarray

    @property
    def levels(self) -> int:
        return len(self.details)

    def all_bands(self) -> list[np.ndarray]:
        return [*self.details, self.approx]

    def band_names(self) -> list[str]:
        return [f"D{j + 1}" for j in range(self.levels)] + [f"A{self.levels}"]

    def total_coefficients(self) -> int:
        return sum(b.size for b in self.all_bands())


def _analysis_step(x: np.ndarray, filt: WaveletFilter) -> tuple[np.ndarray, np.ndarray]:
    """One periodized decomposition level.

    Odd-length inputs pass their trailing sample straight into the
    approximation band, keeping the overall map orthogonal so energy is
    conserved exactly.
    """
    tail = None
    if x.size % 2 == 1:
        tail = x[-1]
        x = x[:-1]
    n = x.size
    taps = filt.dec_lo.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n
    seg = x[idx]
    approx = seg @ filt.dec_lo
    detail = seg @ filt.dec_hi
    if tail is not None:
        approx = np.concatenate([approx, [tail]])
    return approx, detail


def dwt(x: np.ndarray, filt: WaveletFilter | None = None, levels: int = 5) -> SubbandSet:
    """Cascade DWT with periodized signal extension.

    Total coefficient count equals the input length and total energy is
    conserved to rounding.
    """
    filt = filt or WaveletFilter.sym8()
    x = np.asarray(x, dtype=np.float64)
    if levels < 1:
        raise FeatureError(f"levels must be >= 1, got {levels}")
    if x.size < 2**levels:
        raise FeatureError(
            f"signal too short for {levels} decomposition levels: {x.size} < {2**levels}"
        )
    details = []
    approx = x
    for _ in range(levels):
        approx, detail = _analysis_step(approx, filt)
        details.append(detail)
    return SubbandSet(details=tuple(details), approx=approx)


SUBBAND_FEATURES = ("energy", "variance", "std", "wl", "entropy")


def subband_features(w: np.ndarray, entropy_guard: float = 1e-12) -> np.ndarray:
    """Energy, variance, standard deviation, waveform length, entropy."""
    w = np.asarray(w, dtype=np.float64)
    if w.size == 0:
        raise FeatureError("empty subband")
    energy = float(np.sum(w * w))
    variance = float(np.var(w))
    std = float(np.sqrt(variance))
    wl = float(np.sum(np.abs(np.diff(w))))
    sq = w * w
    entropy = float(-np.sum(sq * np.log(sq + entropy_guard)))
    return np.array([energy, variance, std, wl, entropy])


def wavelet_features(subbands: SubbandSet, entropy_guard: float = 1e-12) -> np.ndarray:
    """Thirty features per channel: five per subband over D1..DJ, AJ."""
    return np.concatenate(
        [subband_features(band, entropy_guard) for band in subbands.all_bands()]
    )


def wavelet_names(n_channels: int, levels: int = 5) -> list[str]:
    bands = [f"D{j + 1}" for j in range(levels)] + [f"A{levels}"]
    return [
        f"ch{i}_{band}_{feat}"
        for i in range(n_channels)
        for band in bands
        for feat in SUBBAND_FEATURES
    ]
