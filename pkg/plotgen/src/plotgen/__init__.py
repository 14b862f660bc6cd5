"""Publication-style condition-number figures from aggregate.csv sweep output.

Reads the nine-column aggregate schema written by the sweep CLI and
renders median condition number versus d on a log y-axis, with the
interquartile band, the closed-form prediction overlay, a vertical
marker at d = n and an explicit break marker wherever the median
diverged. Same input and options give byte-identical SVG output.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__version__ = "0.1.0"

SCHEMA = ("n", "d", "gamma", "trials", "kappa_q25", "kappa_median",
          "kappa_q75", "kappa_mp", "inf_count")
INT_COLUMNS = {"n", "d", "trials", "inf_count"}


class SchemaError(ValueError):
    """The input file does not match the aggregate.csv schema."""


@dataclass(frozen=True)
class PlotSpec:
    input_path: str
    output_path: str
    y_scale: str = "log"  # "log" | "linear"
    show_mp_overlay: bool = True
    title: Optional[str] = None


def _parse(token: str, column: str, line_no: int):
    token = token.strip()
    try:
        if column in INT_COLUMNS:
            return int(token)
        if token == "inf":
            return float("inf")
        if token == "-inf":
            return float("-inf")
        return float(token)
    except ValueError:
        raise SchemaError(f"line {line_no}: column {column!r} has "
                          f"unparseable value {token!r}")


def load_aggregate(path) -> list:
    """Rows of an aggregate.csv as dicts; schema violations name the column."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    for column in SCHEMA:
        if column not in header:
            raise SchemaError(f"{path}: missing required column {column!r}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = line.split(",")
        if len(tokens) != len(header):
            raise SchemaError(f"{path}: line {i}: expected {len(header)} "
                              f"fields, got {len(tokens)}")
        named = dict(zip(header, tokens))
        rows.append({col: _parse(named[col], col, i) for col in SCHEMA})
    if len(rows) < 2:
        raise SchemaError(f"{path}: need at least 2 grid points, got {len(rows)}")
    n_values = {row["n"] for row in rows}
    if len(n_values) != 1:
        raise SchemaError(f"{path}: column 'n' must be constant across rows, "
                          f"got {sorted(n_values)}")
    return sorted(rows, key=lambda r: r["d"])


def peak_row(rows) -> dict:
    """Row with the largest finite median (ties to the smallest d)."""
    finite = [r for r in rows if np.isfinite(r["kappa_median"])]
    if not finite:
        raise SchemaError("no finite kappa_median values to mark a peak")
    best = finite[0]
    for row in finite[1:]:
        if row["kappa_median"] > best["kappa_median"]:
            best = row
    return best


def render_double_descent(spec: PlotSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    rows = load_aggregate(spec.input_path)
    n = rows[0]["n"]
    d = np.array([r["d"] for r in rows], dtype=float)
    med = np.array([r["kappa_median"] for r in rows])
    q25 = np.array([r["kappa_q25"] for r in rows])
    q75 = np.array([r["kappa_q75"] for r in rows])
    mp = np.array([r["kappa_mp"] for r in rows])
    finite = np.isfinite(med)

    plt.rcParams["svg.hashsalt"] = "plotgen"
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    try:
        band = finite & np.isfinite(q25) & np.isfinite(q75)
        if band.any():
            ax.fill_between(d[band], q25[band], q75[band], alpha=0.25,
                            color="C0", linewidth=0, gid="iqr-band",
                            label="interquartile range")
        line, = ax.plot(d[finite], med[finite], "o-", color="C0",
                        gid="median-curve", label="measured median")
        if spec.show_mp_overlay:
            overlay = np.isfinite(mp)
            if overlay.any():
                ax.plot(d[overlay], mp[overlay], "--", color="C1",
                        gid="mp-overlay", label="theoretical prediction")
        ax.axvline(n, color="k", linestyle=":", linewidth=1.2,
                   gid="n-marker", label=f"d = n = {n}")

        best = peak_row(rows)
        ax.scatter([best["d"]], [best["kappa_median"]], marker="*", s=160,
                   color="C3", zorder=5, gid="peak-marker",
                   label=f"peak (d = {best['d']})")

        if (~finite).any():
            # a diverged median is a visible break, never silently dropped
            top = float(np.nanmax(np.where(np.isfinite(q75), q75, med[finite].max())))
            ax.scatter(d[~finite], np.full((~finite).sum(), top * 2.0),
                       marker="^", s=90, color="C3", zorder=5,
                       gid="inf-break", label="median diverged")

        ax.set_yscale(spec.y_scale)
        if d.max() / max(d.min(), 1.0) >= 10.0:
            ax.set_xscale("log")
        ax.set_xlabel("d")
        ax.set_ylabel("condition number (median over trials)")
        ax.set_title(spec.title or f"condition number across d (n = {n})")
        ax.legend(loc="best", fontsize=9)
        fig.tight_layout()
        metadata = {"Date": None} if spec.output_path.endswith(".svg") else None
        fig.savefig(spec.output_path, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.output_path
