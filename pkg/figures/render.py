#!/usr/bin/env python3
"""Render simulator CSV outputs as figures.

Usage:
    render.py --kind ber          --csv ber.csv                 --out ber.png
    render.py --kind spectrum     --csv spectrum.csv            --out spectrum.png
    render.py --kind dispersion   --csv dispersion_time_qam16.csv
                                  --csv2 dispersion_hist.csv    --out dispersion.png
    render.py --kind kl-sweep     --csv kl_sweep.csv            --out kl.png
    render.py --kind isnr-surface --csv isnr_surface.csv        --out isnr.png

Rendering is read-only over the CSVs: nothing is recomputed, the columns are
plotted as-is on the axes each figure kind calls for (log-y BER, normalized-dB
spectra, log-log divergence sweep, paired 3-D ISNR surfaces).
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("ber", "spectrum", "dispersion", "kl-sweep", "isnr-surface")


class ColumnError(ValueError):
    """A required CSV column is absent."""


def read_csv(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a simulator CSV (one '#' provenance line, then header, then rows)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    rows = [ln for ln in lines if not ln.startswith("#")]
    if not rows:
        raise ColumnError(f"empty CSV {path}")
    header = rows[0].split(",")
    for col in required:
        if col not in header:
            raise ColumnError(f"missing column {col!r} in {path}")
    data = np.array([[float(v) for v in ln.split(",")] for ln in rows[1:]])
    if data.ndim != 2 or data.shape[0] == 0:
        raise ColumnError(f"no data rows in {path}")
    return {col: data[:, i] for i, col in enumerate(header)}


def render_ber(csv_path: str):
    d = read_csv(csv_path, ("snr", "16psk", "16qam"))
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogy(d["snr"], np.maximum(d["16psk"], 1e-12), label="16-PSK")
    ax.semilogy(d["snr"], np.maximum(d["16qam"], 1e-12), "--", label="16-QAM")
    positive = np.concatenate([d["16psk"][d["16psk"] > 0], d["16qam"][d["16qam"] > 0]])
    ax.set_ylim(max(positive.min() * 0.5, 1e-7), 1)
    ax.set_xlabel(r"$E_b/N_0$ (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", ls=":")
    ax.legend()
    return fig


def render_spectrum(csv_path: str):
    d = read_csv(csv_path, ("freq", "X", "Xmod", "X_rvpc"))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(d["freq"], d["X"], label="Radar", lw=1.0)
    ax.plot(d["freq"], d["Xmod"], label="ISAC", lw=0.8, alpha=0.8)
    ax.plot(d["freq"], d["X_rvpc"], label="RVPC", lw=0.8, alpha=0.8)
    ax.set_xlim(-0.5, 0.5)
    ax.set_xlabel(r"$f/f_s$")
    ax.set_ylabel("Normalized power (dB)")
    ax.grid(True, ls=":")
    ax.legend()
    return fig


def render_dispersion(csv_path: str, hist_path: str):
    t = read_csv(csv_path, ("t", "stream", "rvpc"))
    h = read_csv(hist_path, ("abs", "counts", "rayleigh"))
    fig, (ax1, ax2) = plt.subplots(
        1, 2, figsize=(7, 3), gridspec_kw={"width_ratios": [2.2, 1]}, sharey=True
    )
    ax1.plot(t["t"], t["stream"], label="$|x[n]|$", lw=1.2)
    ax1.plot(t["t"], t["rvpc"], label=r"$|\tilde{x}[n]|$", lw=0.7, alpha=0.85)
    ax1.set_xlabel("sample $n$")
    ax1.set_ylabel("magnitude")
    ax1.set_xlim(t["t"][0], t["t"][-1])
    ax1.legend(loc="upper right")
    ax2.barh(h["abs"], h["counts"], height=h["abs"][1] - h["abs"][0], alpha=0.6, label="Hist")
    ax2.plot(h["rayleigh"], h["abs"], "k-", lw=1.2, label="Fit")
    ax2.set_xlabel("density")
    ax2.legend(loc="upper right")
    fig.tight_layout()
    return fig


_KL_SERIES = (
    ("qpsk4", "QPSK, 50 MBd", "tab:green", "-"),
    ("qam4", "16-QAM, 50 MBd", "tab:green", "--"),
    ("qpsk8", "QPSK, 25 MBd", "tab:red", "-"),
    ("qam8", "16-QAM, 25 MBd", "tab:red", "--"),
    ("qpsk32", "QPSK, 12.5 MBd", "tab:blue", "-"),
    ("qam32", "16-QAM, 12.5 MBd", "tab:blue", "--"),
)


def render_kl_sweep(csv_path: str):
    d = read_csv(csv_path, ("slope",) + tuple(c for c, _, _, _ in _KL_SERIES))
    fig, ax = plt.subplots(figsize=(6, 4))
    for col, label, color, style in _KL_SERIES:
        ax.loglog(d["slope"], np.maximum(d[col], 1e-12), style, color=color, label=label)
    ax.set_xlabel(r"normalized slope $\alpha_{norm}$")
    ax.set_ylabel(r"$D_{KL}$ vs $\mathcal{CN}(0,1)$ (nats)")
    ax.grid(True, which="both", ls=":")
    ax.legend(fontsize=8)
    return fig


def render_isnr_surface(csv_path: str):
    d = read_csv(csv_path, ("snr", "M_Sym", "ISNR", "ISNR_unmod"))
    orders = np.unique(d["M_Sym"])
    snrs = np.unique(d["snr"])
    shape = (orders.size, snrs.size)
    if orders.size * snrs.size != d["snr"].size:
        raise ColumnError(f"rows in {csv_path} do not form an (order x snr) grid")
    # rows are written order-major
    order_idx = np.searchsorted(orders, d["M_Sym"])
    snr_idx = np.searchsorted(snrs, d["snr"])
    z_isac = np.full(shape, np.nan)
    z_radar = np.full(shape, np.nan)
    z_isac[order_idx, snr_idx] = d["ISNR"]
    z_radar[order_idx, snr_idx] = d["ISNR_unmod"]
    xx, yy = np.meshgrid(np.log2(orders), snrs, indexing="ij")
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(xx, yy, z_radar, alpha=0.75, color="tab:blue", label="Radar")
    ax.plot_surface(xx, yy, z_isac, alpha=0.85, color="tab:cyan", label="ISAC")
    ax.set_xticks(np.log2(orders))
    ax.set_xticklabels([str(int(o)) for o in orders])
    ax.set_xlabel("constellation order")
    ax.set_ylabel("SNR (dB)")
    ax.set_zlabel("ISNR (dB)")
    try:
        ax.legend()
    except (AttributeError, NotImplementedError):
        pass  # 3-D surface legends are version-dependent
    return fig


def render(kind: str, csv_path: str, csv2_path: str | None = None):
    """Build the figure for one CSV kind; returns a matplotlib Figure."""
    if kind == "ber":
        return render_ber(csv_path)
    if kind == "spectrum":
        return render_spectrum(csv_path)
    if kind == "dispersion":
        if csv2_path is None:
            raise ColumnError("dispersion rendering needs --csv2 (histogram CSV)")
        return render_dispersion(csv_path, csv2_path)
    if kind == "kl-sweep":
        return render_kl_sweep(csv_path)
    if kind == "isnr-surface":
        return render_isnr_surface(csv_path)
    raise ValueError(f"unknown kind {kind!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--csv", required=True)
    parser.add_argument("--csv2", default=None)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        fig = render(args.kind, args.csv, args.csv2)
    except (ColumnError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig.savefig(args.out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
