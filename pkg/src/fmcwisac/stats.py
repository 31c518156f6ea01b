"""Distribution diagnostics for the dispersed payload.

The dispersed payload of a unit-power alphabet approaches a circularly
symmetric complex normal with unit second moment, so its magnitude
reference is a Rayleigh with scale ``1/sqrt(2)``. The divergence estimate
is one-dimensional (magnitudes only); a separate phase-uniformity check
justifies dropping the angular dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

from .txchain import ComplexSignal

__all__ = [
    "MagnitudeHistogram",
    "KlEstimate",
    "magnitude_histogram",
    "rayleigh_fit",
    "kl_divergence_vs_cn",
    "phase_uniformity",
    "ks_rayleigh",
]

_MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class MagnitudeHistogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int


@dataclass(frozen=True)
class KlEstimate:
    d_kl: float
    bins_used: int
    samples: int


def _magnitudes(sig) -> np.ndarray:
    samples = sig.samples if isinstance(sig, ComplexSignal) else np.asarray(sig)
    return np.abs(np.asarray(samples, dtype=complex).reshape(-1))


def magnitude_histogram(sig, B: int = 100, r_max: float = 4.0) -> MagnitudeHistogram:
    """Histogram of sample magnitudes on B uniform cells over [0, r_max].

    Magnitudes above ``r_max`` are counted in the last cell.
    """
    if B < 10:
        raise ValueError(f"B must be >= 10, got {B}")
    if r_max <= 0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    mags = _magnitudes(sig)
    edges = np.linspace(0.0, r_max, B + 1)
    counts, _ = np.histogram(np.clip(mags, 0.0, r_max), bins=edges)
    return MagnitudeHistogram(edges=edges, counts=counts, total=int(mags.size))


def rayleigh_fit(sig) -> float:
    """Maximum-likelihood Rayleigh scale ``sqrt(mean(|z|**2)/2)``."""
    mags = _magnitudes(sig)
    if mags.size == 0:
        raise ValueError("cannot fit Rayleigh scale to an empty signal")
    return float(np.sqrt(np.mean(mags**2) / 2.0))


def _rayleigh_cell_masses(edges: np.ndarray) -> np.ndarray:
    """Cell masses of Rayleigh(1/sqrt(2)), last cell extended to infinity."""
    cdf = 1.0 - np.exp(-(edges**2))  # scale 1/sqrt(2): F(r) = 1 - exp(-r^2)
    q = np.diff(cdf)
    q[-1] += np.exp(-(edges[-1] ** 2))
    return q


def kl_divergence_vs_cn(sig, B: int = 100, r_max: float = 4.0) -> KlEstimate:
    """Binned KL divergence of the magnitude law against CN(0, 1).

    CN(0, 1) is read as unit second moment, so the magnitude reference is
    Rayleigh with scale ``1/sqrt(2)``. Empty empirical cells contribute 0;
    reference masses are floored at 1e-300.
    """
    hist = magnitude_histogram(sig, B=B, r_max=r_max)
    if hist.total < _MIN_SAMPLES:
        raise ValueError(f"need >= {_MIN_SAMPLES} samples, got {hist.total}")
    p = hist.counts / hist.total
    q = np.maximum(_rayleigh_cell_masses(hist.edges), 1e-300)
    nz = p > 0
    d = float(np.sum(p[nz] * np.log(p[nz] / q[nz])))
    return KlEstimate(d_kl=d, bins_used=B, samples=hist.total)


def phase_uniformity(sig) -> float:
    """Kolmogorov-Smirnov distance of the sample phases from uniformity.

    Phases are wrapped to [0, 2*pi) before comparing against the uniform
    law on the circle, so a phase-degenerate signal scores ~1.
    """
    samples = sig.samples if isinstance(sig, ComplexSignal) else np.asarray(sig)
    samples = np.asarray(samples, dtype=complex).reshape(-1)
    if samples.size < _MIN_SAMPLES:
        raise ValueError(f"need >= {_MIN_SAMPLES} samples, got {samples.size}")
    phases = np.mod(np.angle(samples), 2.0 * np.pi)
    return float(_st.kstest(phases, "uniform", args=(0.0, 2.0 * np.pi)).statistic)


def ks_rayleigh(sig) -> float:
    """KS distance between the magnitude law and its fitted Rayleigh."""
    mags = _magnitudes(sig)
    if mags.size == 0:
        raise ValueError("cannot test an empty signal")
    scale = rayleigh_fit(mags)
    return float(_st.kstest(mags, "rayleigh", args=(0.0, scale)).statistic)
