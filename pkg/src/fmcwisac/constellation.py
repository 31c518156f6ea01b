"""Unit-power modulation alphabets, Gray bit mapping and AWGN BER simulation.

Two alphabet families are supported:

* ``"psk"``: points on the unit circle at angles ``2*pi*i/order``, labeled
  with a binary-reflected Gray code around the ring starting at angle 0.
* ``"qam"``: square grid with odd integer levels per axis, scaled to unit
  average power, with independent per-axis binary-reflected Gray codes
  (in-phase bits first). Level labels run from the most positive level
  downwards, so the all-zero label is the top-right corner point; for
  order 4 this makes ``"00"`` map to ``(1+1j)/sqrt(2)``.

Average constellation power is exactly 1 in both cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Constellation",
    "BerCurve",
    "build_constellation",
    "map_bits",
    "demap_hard",
    "simulate_awgn_ber",
]

_QAM_ORDERS = (4, 16, 64, 256)


@dataclass(frozen=True)
class Constellation:
    """A labeled symbol alphabet with unit mean power.

    Attributes
    ----------
    kind : str
        ``"psk"`` or ``"qam"``.
    order : int
        Number of points (power of two).
    points : np.ndarray
        Complex symbols, ``mean(|points|**2) == 1``.
    labels : tuple of str
        Gray-coded bit string per point, each of length ``log2(order)``.
    """

    kind: str
    order: int
    points: np.ndarray
    labels: tuple

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def build_constellation(kind: str, order: int) -> Constellation:
    """Construct a Gray-labeled unit-power alphabet.

    Parameters
    ----------
    kind : {"psk", "qam"}
    order : int
        Power of two; for ``"qam"`` one of 4, 16, 64, 256.
    """
    if order < 2 or (order & (order - 1)) != 0:
        raise ValueError(f"order must be a power of two >= 2, got {order}")
    k = order.bit_length() - 1
    if kind == "psk":
        idx = np.arange(order)
        points = np.exp(2j * np.pi * idx / order)
        labels = tuple(format(_gray(i), f"0{k}b") for i in range(order))
    elif kind == "qam":
        if order not in _QAM_ORDERS:
            raise ValueError(f"qam order must be one of {_QAM_ORDERS}, got {order}")
        side = int(round(np.sqrt(order)))
        kb = k // 2
        levels = np.arange(side - 1, -side, -2)  # most positive level first
        axis_labels = [format(_gray(i), f"0{kb}b") for i in range(side)]
        grid = levels[:, None] + 1j * levels[None, :]  # [i_axis, q_axis]
        points = grid.reshape(-1).astype(complex)
        points /= np.sqrt(np.mean(np.abs(points) ** 2))
        labels = tuple(
            axis_labels[ii] + axis_labels[qq] for ii in range(side) for qq in range(side)
        )
    else:
        raise ValueError(f"unsupported constellation kind {kind!r}")
    return Constellation(kind=kind, order=order, points=points, labels=labels)


def _label_lut(c: Constellation) -> np.ndarray:
    """Map integer label value -> point index."""
    lut = np.empty(c.order, dtype=np.int64)
    for i, lab in enumerate(c.labels):
        lut[int(lab, 2)] = i
    return lut


def _label_bits(c: Constellation) -> np.ndarray:
    """(order, k) matrix of label bits."""
    k = c.bits_per_symbol
    return np.array([[int(b) for b in lab] for lab in c.labels], dtype=np.int8).reshape(
        c.order, k
    )


def map_bits(bits, c: Constellation) -> np.ndarray:
    """Map a 0/1 sequence to symbols, ``bits_per_symbol`` bits per symbol."""
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    k = c.bits_per_symbol
    if bits.size % k != 0:
        raise ValueError(f"bit count {bits.size} not divisible by {k}")
    if bits.size == 0:
        return np.empty(0, dtype=complex)
    groups = bits.reshape(-1, k)
    values = groups @ (1 << np.arange(k - 1, -1, -1))
    return c.points[_label_lut(c)[values]]


def demap_hard(symbols, c: Constellation) -> np.ndarray:
    """Minimum-distance hard decisions; ties resolved to the lowest point index."""
    symbols = np.asarray(symbols, dtype=complex).reshape(-1)
    if symbols.size == 0:
        return np.empty(0, dtype=np.int8)
    d2 = np.abs(symbols[:, None] - c.points[None, :]) ** 2
    idx = np.argmin(d2, axis=1)  # argmin returns the first minimum
    return _label_bits(c)[idx].reshape(-1)


@dataclass(frozen=True)
class BerCurve:
    """Monte Carlo bit-error-rate curve over an Eb/N0 grid."""

    ebn0_db: np.ndarray
    ber: np.ndarray
    bits_simulated: np.ndarray
    errors_counted: np.ndarray


def simulate_awgn_ber(
    c: Constellation,
    ebn0_grid,
    min_bits: int = 100_000,
    min_errors: int = 100,
    seed: int = 0,
    max_bits: int = 2_000_000,
) -> BerCurve:
    """Uncoded hard-decision BER over an AWGN channel.

    Per grid point, random bits are mapped, disturbed by circularly symmetric
    complex Gaussian noise with per-symbol variance
    ``sigma^2 = 1 / (bits_per_symbol * 10**(ebn0_db/10))`` and hard-demapped.
    Simulation continues until at least ``min_bits`` bits are sent and
    ``min_errors`` errors are seen, capped at ``max_bits``.
    """
    if min_bits < 10_000:
        raise ValueError(f"min_bits must be >= 10000, got {min_bits}")
    ebn0_db = np.asarray(ebn0_grid, dtype=float).reshape(-1)
    k = c.bits_per_symbol
    ber = np.zeros(ebn0_db.size)
    total_bits = np.zeros(ebn0_db.size, dtype=np.int64)
    total_errs = np.zeros(ebn0_db.size, dtype=np.int64)
    batch_syms = 25_000
    for i, ebn0 in enumerate(ebn0_db):
        rng = np.random.default_rng((seed, i))
        sigma2 = 1.0 / (k * 10.0 ** (ebn0 / 10.0))
        nbits = 0
        nerr = 0
        while (nbits < min_bits or nerr < min_errors) and nbits < max_bits:
            bits = rng.integers(0, 2, batch_syms * k)
            tx = map_bits(bits, c)
            noise = np.sqrt(sigma2 / 2) * (
                rng.standard_normal(tx.size) + 1j * rng.standard_normal(tx.size)
            )
            rx_bits = demap_hard(tx + noise, c)
            nerr += int(np.count_nonzero(rx_bits != bits.astype(np.int8)))
            nbits += bits.size
        ber[i] = nerr / nbits
        total_bits[i] = nbits
        total_errs[i] = nerr
    return BerCurve(ebn0_db=ebn0_db, ber=ber, bits_simulated=total_bits, errors_counted=total_errs)
