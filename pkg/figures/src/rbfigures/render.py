"""Render the five figure kinds from the primary component's CSV files.

Every renderer is a pure function of its input tables: fixed figure size,
fixed fonts, no timestamps, so re-rendering the same inputs reproduces the
image pixel for pixel. All statistics are taken from the CSVs; the only
transforms applied here are display-level (offsets, bands, the plotted
series' autocorrelation panel).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

plt.rcParams.update({
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "rbfigures",
})

METHOD_COLORS = {
    "bl": "#555555", "tbl": "#2a9d8f", "cbl": "#e9c46a",
    "rbl": "#d62828", "rhs": "#1d3557",
}


class SchemaError(ValueError):
    """Input CSV does not carry the columns a figure kind needs."""


def _require(df: pd.DataFrame, cols, kind: str) -> None:
    missing = [c for c in cols if c not in df.columns]
    if missing:
        raise SchemaError(f"{kind}: input is missing columns {missing}")


def _read(path: str) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def render_influence(inputs, ax_pair=None):
    """Influence curves: one panel per parameter, one line per x value."""
    df = _read(inputs[0])
    _require(df, ["x", "z", "if_alpha", "if_beta"], "influence")
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2), sharex=True)
    for ax, col, title in zip(axes, ["if_alpha", "if_beta"],
                              ["intercept", "slope"]):
        for j, (x_val, grp) in enumerate(sorted(df.groupby("x"))):
            ax.plot(grp["z"], grp[col], lw=1.4, color=f"C{j}",
                    label=f"x = {x_val:g}")
        ax.axhline(0.0, color="k", lw=0.6)
        ax.set_xlabel("z")
        ax.set_title(title)
    axes[0].set_ylabel("influence")
    axes[0].legend(frameon=False)
    fig.tight_layout()
    return fig


def _bands(inputs, value_col, err_col, ylabel, kind):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for path in inputs:
        df = _read(path)
        _require(df, ["method", "level", value_col, err_col], kind)
        for method, grp in sorted(df.groupby("method")):
            grp = grp.sort_values("level")
            color = METHOD_COLORS.get(str(method), None)
            ax.plot(grp["level"], grp[value_col], marker="o", ms=3, lw=1.2,
                    label=str(method), color=color)
            ax.fill_between(grp["level"],
                            grp[value_col] - 3 * grp[err_col],
                            grp[value_col] + 3 * grp[err_col],
                            alpha=0.2, color=color, linewidth=0)
    ax.set_xlabel("contamination level")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, ncol=2)
    fig.tight_layout()
    return fig


def render_mse_bands(inputs):
    """Mean log-MSE against contamination level with +-3 MC error bands."""
    return _bands(inputs, "mean_log_mse", "mcse_log_mse", "log-MSE",
                  "mse_bands")


def render_al_bands(inputs):
    """Mean interval length against contamination level with +-3 MC bands."""
    return _bands(inputs, "mean_al", "mcse_al", "average CI length",
                  "al_bands")


def render_trace_acf(inputs, coef="beta_10", max_lag=40):
    """Two-panel sample path and autocorrelation of one draws.csv column."""
    df = _read(inputs[0])
    _require(df, [coef], "trace_acf")
    x = df[coef].to_numpy(dtype=float)
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(8, 2.8))
    ax0.plot(np.arange(1, x.size + 1), x, lw=0.5, color="#1d3557")
    ax0.set_xlabel("iteration")
    ax0.set_ylabel(coef)
    ax0.set_title("trace")
    lags = min(max_lag, x.size - 2)
    ax1.acorr(x, maxlags=lags, detrend=lambda v: v - v.mean(),
              usevlines=True, color="#1d3557", lw=1.2)
    ax1.set_xlim(-0.5, lags)
    ax1.set_xlabel("lag")
    ax1.set_ylabel("ACF")
    ax1.set_title("autocorrelation")
    fig.tight_layout()
    return fig


def render_coef_intervals(inputs, labels=None):
    """Credible intervals with median markers (x) per coefficient.

    Each input is one summary.csv (one method); methods are offset side by
    side within each coefficient slot. Only beta rows are drawn: one glyph
    per coefficient per method.
    """
    frames = []
    for path in inputs:
        df = _read(path)
        _require(df, ["param", "median", "lower", "upper"], "coef_intervals")
        frames.append(df[df["param"].str.startswith("beta_")].reset_index(drop=True))
    if labels is None:
        labels = [f"fit {i + 1}" for i in range(len(frames))]
    p = len(frames[0])
    fig, ax = plt.subplots(figsize=(max(5.0, 0.45 * p + 1.5), 3.6))
    m = len(frames)
    width = 0.7
    for i, (df, lab) in enumerate(zip(frames, labels)):
        off = (i - (m - 1) / 2) * (width / max(m, 1))
        pos = np.arange(1, len(df) + 1) + off
        ax.vlines(pos, df["lower"], df["upper"], lw=1.4, color=f"C{i}")
        ax.plot(pos, df["median"], ls="none", marker="x", ms=5, color=f"C{i}",
                label=lab)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xticks(np.arange(1, p + 1))
    ax.set_xlabel("coefficient")
    ax.set_ylabel("95% interval")
    ax.legend(frameon=False, ncol=min(m, 3))
    fig.tight_layout()
    return fig


KINDS = {
    "influence": render_influence,
    "mse_bands": render_mse_bands,
    "al_bands": render_al_bands,
    "trace_acf": render_trace_acf,
    "coef_intervals": render_coef_intervals,
}


def render(kind: str, inputs, out: str, **opts):
    """Render one figure kind from input CSV paths and write the image."""
    if kind not in KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; expected one of "
                         f"{sorted(KINDS)}")
    fig = KINDS[kind](inputs, **opts)
    try:
        fig.savefig(out, metadata={"Software": "rbfigures"})
    finally:
        plt.close(fig)
    return out
