"""Transmit chain: pulse-shaped payload, chirp generation, and modulation.

The payload is laid out cyclically within one chirp: shaping is a circular
convolution of the upsampled symbol train, so a symbol-level cyclic shift of
the input is exactly a sample-level cyclic shift of the output. This makes
the delayed payload in the channel an exact circular shift and keeps the
whole FFT-based receiver chain free of edge effects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams

__all__ = ["ComplexSignal", "PulseShape", "rrc_taps", "shape_symbols", "gen_chirp", "modulate"]


@dataclass(frozen=True)
class ComplexSignal:
    """A complex baseband sample sequence with its sampling rate [Hz]."""

    samples: np.ndarray
    f_s: float

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class PulseShape:
    """Root-raised-cosine taps sampled at ``sps`` points per symbol.

    Taps are normalized so that ``sum(taps**2) == sps``, which makes cyclic
    shaping of unit-power i.i.d. symbols produce a unit-mean-power signal.
    """

    beta: float
    sps: int
    span: int
    taps: np.ndarray


def rrc_taps(beta: float, sps: int, span: int) -> PulseShape:
    """Closed-form root-raised-cosine impulse response.

    Parameters
    ----------
    beta : float
        Roll-off in [0, 1]; ``beta = 0`` degenerates to a sinc.
    sps : int
        Samples per symbol, >= 1.
    span : int
        Half-length in symbols, >= 4; yields ``2*span*sps + 1`` taps.

    The two removable singularities (``t = 0`` and ``|t| = 1/(4*beta)``)
    are evaluated by their analytic limits.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if sps < 1:
        raise ValueError(f"sps must be >= 1, got {sps}")
    if span < 4:
        raise ValueError(f"span must be >= 4, got {span}")
    t = np.arange(-span * sps, span * sps + 1) / sps  # in symbol durations
    h = np.empty_like(t)
    at_zero = np.isclose(t, 0.0, atol=1e-12)
    if beta > 0:
        at_sing = np.isclose(np.abs(t), 1.0 / (4.0 * beta), atol=1e-9)
    else:
        at_sing = np.zeros_like(at_zero)
    regular = ~(at_zero | at_sing)
    tr = t[regular]
    num = np.sin(np.pi * tr * (1 - beta)) + 4 * beta * tr * np.cos(np.pi * tr * (1 + beta))
    den = np.pi * tr * (1 - (4 * beta * tr) ** 2)
    h[regular] = num / den
    h[at_zero] = 1.0 + beta * (4.0 / np.pi - 1.0)
    if beta > 0:
        h[at_sing & ~at_zero] = (beta / np.sqrt(2.0)) * (
            (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta))
            + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
        )
    h *= np.sqrt(sps / np.sum(h * h))
    return PulseShape(beta=beta, sps=sps, span=span, taps=h)


def shape_symbols(symbols, ps: PulseShape, params: SystemParams) -> ComplexSignal:
    """Cyclically pulse-shape one chirp's worth of symbols to N samples."""
    symbols = np.asarray(symbols, dtype=complex).reshape(-1)
    n_samp = params.N
    if symbols.size * ps.sps != n_samp:
        raise ValueError(
            f"need M*sps == N, got M={symbols.size}, sps={ps.sps}, N={n_samp}"
        )
    if 2 * ps.span * ps.sps + 1 > n_samp:
        raise ValueError("pulse shape longer than one chirp")
    up = np.zeros(n_samp, dtype=complex)
    up[:: ps.sps] = symbols
    center = ps.taps.size // 2
    h_cyc = np.zeros(n_samp)
    for i, tap in enumerate(ps.taps):
        h_cyc[(i - center) % n_samp] += tap
    out = np.fft.ifft(np.fft.fft(up) * np.fft.fft(h_cyc))
    return ComplexSignal(samples=out, f_s=params.f_s)


def gen_chirp(params: SystemParams) -> ComplexSignal:
    """Baseband chirp ``s[n] = exp(j*pi*alpha_norm*n**2)``, unit modulus."""
    n = np.arange(params.N, dtype=float)
    return ComplexSignal(
        samples=np.exp(1j * np.pi * params.alpha_norm * n * n), f_s=params.f_s
    )


def modulate(x: ComplexSignal, s: ComplexSignal) -> ComplexSignal:
    """Elementwise product of payload and chirp."""
    if len(x.samples) != len(s.samples):
        raise ValueError(f"length mismatch: {len(x.samples)} vs {len(s.samples)}")
    return ComplexSignal(samples=x.samples * s.samples, f_s=s.f_s)
