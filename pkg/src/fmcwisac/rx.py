"""Sensing receiver: dechirp, alignment, compensation, periodogram, metrics.

Sign conventions, chosen so the whole chain closes exactly on itself:

* Dechirping an echo delayed by ``d`` samples leaves the beat tone
  ``exp(-2j*pi*alpha_norm*d*n)``, so a delay ``d`` peaks at FFT bin
  ``(N - alpha_norm*d*N) mod N``.
* The alignment filter is the allpass ``G[k] = exp(-1j*pi*f_k**2/alpha)``
  over signed bin frequencies ``f_k``. Its group delay ``+f/alpha`` is
  negative at the (negative) beat frequencies, advancing every delayed
  payload copy back to zero lag, where one sample-wise division by the
  identically dispersed reference payload removes it.

FFT convention throughout: unnormalized forward transform, ``1/N`` inverse
(numpy default).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams
from .txchain import ComplexSignal

__all__ = [
    "AlignmentFilter",
    "Periodogram",
    "MetricsReport",
    "dechirp",
    "alignment_filter",
    "apply_alignment",
    "disperse_reference",
    "compensate",
    "periodogram",
    "rdm",
    "measure_isnr",
]


@dataclass(frozen=True)
class AlignmentFilter:
    """Allpass frequency-domain group-delay filter over FFT-ordered bins."""

    g: np.ndarray
    alpha_norm: float


@dataclass(frozen=True)
class Periodogram:
    """Squared-magnitude FFT of one chirp, rectangular window, no averaging."""

    bins: np.ndarray
    bin_width: float


@dataclass(frozen=True)
class MetricsReport:
    """Peak/floor measurements of one periodogram."""

    peak_bin: int
    peak_power: float
    noise_floor: float
    isnr_db: float
    est_delay_samples: int


def dechirp(r: ComplexSignal, s: ComplexSignal) -> ComplexSignal:
    """Multiply the received signal by the conjugate chirp."""
    if len(r.samples) != len(s.samples):
        raise ValueError(f"length mismatch: {len(r.samples)} vs {len(s.samples)}")
    return ComplexSignal(samples=r.samples * np.conj(s.samples), f_s=r.f_s)


def alignment_filter(params: SystemParams) -> AlignmentFilter:
    """Build the group-delay alignment filter for the configured slope.

    Phase ``-pi*f_k**2/alpha`` evaluated at the signed physical frequency of
    each FFT bin, equivalently ``-pi*kappa**2/(N**2*alpha_norm)`` with
    ``kappa`` the signed bin index. ``g[0] == 1`` and ``|g[k]| == 1``.
    """
    n_samp = params.N
    kappa = np.fft.fftfreq(n_samp) * n_samp  # 0..N/2-1, -N/2..-1
    phase = -np.pi * kappa * kappa / (n_samp * n_samp * params.alpha_norm)
    return AlignmentFilter(g=np.exp(1j * phase), alpha_norm=params.alpha_norm)


def apply_alignment(sig: ComplexSignal, f: AlignmentFilter) -> ComplexSignal:
    """Apply the filter in the frequency domain: IFFT(FFT(sig) * g)."""
    if len(sig.samples) != f.g.size:
        raise ValueError(f"length mismatch: {len(sig.samples)} vs {f.g.size}")
    out = np.fft.ifft(np.fft.fft(sig.samples) * f.g)
    return ComplexSignal(samples=out, f_s=sig.f_s)


def disperse_reference(x: ComplexSignal, f: AlignmentFilter) -> ComplexSignal:
    """Disperse the known transmit payload with the same alignment filter."""
    return apply_alignment(x, f)


def compensate(
    r_al: ComplexSignal, x_tilde: ComplexSignal, clamp_eps: float = 0.0
) -> ComplexSignal:
    """Sample-wise division of the aligned signal by the dispersed payload.

    With ``clamp_eps > 0``, divisor samples of magnitude below ``clamp_eps``
    are replaced by ``clamp_eps`` at their original phase before dividing;
    the default ``clamp_eps = 0`` divides faithfully and raises on an exact
    zero.
    """
    if len(r_al.samples) != len(x_tilde.samples):
        raise ValueError(
            f"length mismatch: {len(r_al.samples)} vs {len(x_tilde.samples)}"
        )
    if clamp_eps < 0:
        raise ValueError(f"clamp_eps must be >= 0, got {clamp_eps}")
    div = x_tilde.samples
    if clamp_eps == 0.0:
        zero = np.flatnonzero(div == 0)
        if zero.size:
            raise ZeroDivisionError(f"dispersed payload is exactly zero at sample {zero[0]}")
    else:
        mag = np.abs(div)
        small = mag < clamp_eps
        if np.any(small):
            div = div.copy()
            unit = np.ones(int(small.sum()), dtype=complex)
            nz = mag[small] > 0
            unit[nz] = div[small][nz] / mag[small][nz]
            div[small] = clamp_eps * unit
    return ComplexSignal(samples=r_al.samples / div, f_s=r_al.f_s)


def periodogram(sig: ComplexSignal) -> Periodogram:
    """``bins[k] = |FFT(sig)[k]|**2``."""
    spec = np.fft.fft(sig.samples)
    return Periodogram(
        bins=(spec.real**2 + spec.imag**2), bin_width=sig.f_s / len(sig.samples)
    )


def rdm(chirps: np.ndarray) -> np.ndarray:
    """Range-Doppler power matrix of a P x N chirp stack.

    Fast-time FFT along each chirp, slow-time IFFT across chirps, squared
    magnitude. ``P = 1`` reduces to the single-chirp periodogram.
    """
    chirps = np.asarray(chirps, dtype=complex)
    if chirps.ndim != 2 or chirps.shape[0] < 1:
        raise ValueError(f"need a P x N matrix with P >= 1, got shape {chirps.shape}")
    out = np.fft.ifft(np.fft.fft(chirps, axis=1), axis=0)
    return np.abs(out) ** 2


def measure_isnr(
    per: Periodogram,
    alpha_norm: float,
    guard: int = 2,
    floor_method: str = "median",
) -> MetricsReport:
    """Peak power, noise floor and image SNR of a periodogram.

    The peak-power estimate is ``bins[peak]/N**2`` (amplitude-squared of an
    on-grid tone). The per-sample noise power is estimated from the
    non-peak bins, excluding ``guard`` bins on each side of the peak; the
    default estimator is the bin median divided by ``N*ln(2)``, exact for
    exponentially distributed bins and robust against the heavy-tailed
    bins left by payload compensation. ``floor_method="mean"`` uses the
    mean-based estimator ``mean/N`` instead.
    """
    bins = per.bins
    n_bins = bins.size
    if n_bins <= 2 * guard + 1:
        raise ValueError(f"guard {guard} too large for {n_bins} bins")
    peak_bin = int(np.argmax(bins))
    mask = np.ones(n_bins, dtype=bool)
    mask[(peak_bin + np.arange(-guard, guard + 1)) % n_bins] = False
    rest = bins[mask]
    if floor_method == "median":
        noise_floor = float(np.median(rest) / (n_bins * np.log(2.0)))
    elif floor_method == "mean":
        noise_floor = float(np.mean(rest) / n_bins)
    else:
        raise ValueError(f"unknown floor_method {floor_method!r}")
    peak_power = float(bins[peak_bin]) / n_bins**2
    with np.errstate(divide="ignore"):
        isnr_db = float(10.0 * np.log10(n_bins * peak_power / noise_floor))
    est_delay = int(round(((n_bins - peak_bin) % n_bins) / (alpha_norm * n_bins)))
    return MetricsReport(
        peak_bin=peak_bin,
        peak_power=peak_power,
        noise_floor=noise_floor,
        isnr_db=isnr_db,
        est_delay_samples=est_delay,
    )
