"""Render region maps and boundary-curve families from lossdeph CSV files.

The renderer never imports the lossdeph library; it consumes only the CSV
files its CLI writes. Rendering is deterministic: a pinned matplotlib style,
fixed figure geometry, and no timestamps in the output, so the same CSV
produces identical image bytes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

KINDS = ("region-map", "eta-curves", "lambda-curves")

REQUIRED_COLUMNS = {
    "region-map": ("e_minus_gamma", "lambda", "composite_label"),
    "eta-curves": ("e_minus_gamma", "d", "eta_d", "theta_boundary", "conjecture"),
    "lambda-curves": ("e_minus_gamma", "d", "lambda_d", "status"),
}

# category codes for the region map raster
LABEL_CODES = {
    "Unclassified": 0,
    "Red": 1,
    "CrossedRed": 2,
    "CrossedGreen": 3,
    "Green": 4,
}
REGION_COLORS = ["#f5f5f5", "#c0392b", "#e8a49c", "#b7dfb9", "#2e8b57"]

STYLE = {
    "figure.figsize": (6.0, 4.5),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": False,
    "svg.hashsalt": "lossdeph-figures",
}


class SchemaError(ValueError):
    """Input CSV does not carry the columns the figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: str
    out: str
    lambda_range: tuple[float, float] = (0.0, 1.0)
    eg_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind '{self.kind}', expected one of {KINDS}")


def read_table(path: str, required: tuple[str, ...]) -> dict[str, list[str]]:
    """Load a CSV into columns, failing hard on missing required columns."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing required columns {missing}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return {name: [row[name] for row in rows] for name in header}


def theta_series(x: float, y: float, tol: float = 1e-12) -> float:
    """sum_n x^(n^2) y^n for 0 <= x < 1; duplicated here so the overlay curve
    can be drawn without importing the primary library."""
    total, term, n = 1.0, 1.0, 0
    while True:
        term *= x ** (2 * n + 1) * y
        n += 1
        if term < tol * max(total, 1.0):
            return total + term
        total += term
        if n > 10000:
            return total


def theta_boundary_lambda(eg: float) -> float:
    """Largest lambda with theta(e^(-gamma/2), sqrt(lam/(1-lam))) <= 3/2."""
    x = math.sqrt(eg)
    lo, hi = 0.5, 1.0 - 1e-9
    if theta_series(x, math.sqrt(lo / (1 - lo))) > 1.5:
        return 0.5
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if theta_series(x, math.sqrt(mid / (1 - mid))) <= 1.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _new_axes():
    fig, ax = plt.subplots()
    ax.set_xlabel(r"$e^{-\gamma}$")
    ax.set_ylabel(r"$\lambda$")
    return fig, ax


def render_region_map(spec: FigureSpec) -> None:
    table = read_table(spec.source, REQUIRED_COLUMNS["region-map"])
    egs = np.array([float(v) for v in table["e_minus_gamma"]])
    lams = np.array([float(v) for v in table["lambda"]])
    labels = table["composite_label"]
    eg_axis = np.unique(egs)
    lam_axis = np.unique(lams)
    grid = np.zeros((lam_axis.size, eg_axis.size), dtype=int)
    eg_index = {v: i for i, v in enumerate(eg_axis)}
    lam_index = {v: i for i, v in enumerate(lam_axis)}
    for eg, lam, label in zip(egs, lams, labels):
        if label not in LABEL_CODES:
            raise SchemaError(f"{spec.source}: unknown composite_label '{label}'")
        grid[lam_index[lam], eg_index[eg]] = LABEL_CODES[label]

    fig, ax = _new_axes()
    extent = (eg_axis[0], eg_axis[-1], lam_axis[0], lam_axis[-1])
    ax.imshow(
        grid,
        origin="lower",
        extent=extent,
        aspect="auto",
        cmap=ListedColormap(REGION_COLORS),
        vmin=-0.5,
        vmax=4.5,
        interpolation="nearest",
    )
    # crossed overlays get hatching on top of their tint
    for code, hatch in ((LABEL_CODES["CrossedRed"], "///"), (LABEL_CODES["CrossedGreen"], "\\\\\\")):
        mask = (grid == code).astype(float)
        if mask.any():
            ax.contourf(
                eg_axis, lam_axis, mask,
                levels=[0.5, 1.5], colors="none", hatches=[hatch],
            )

    eg_fine = np.linspace(max(eg_axis[0], 1e-4), eg_axis[-1], 200)
    ax.plot(eg_fine, 1.0 / (1.0 + eg_fine), color="black", lw=1.2,
            label=r"$\lambda = 1/(1+e^{-\gamma})$")
    ax.plot(eg_fine, [theta_boundary_lambda(float(v)) for v in eg_fine],
            color="black", lw=1.2, ls="--", label=r"$\theta = 3/2$")
    ax.axhline(0.5, color="black", lw=0.8, ls=":", label=r"$\lambda = 1/2$")
    ax.set_xlim(*spec.eg_range)
    ax.set_ylim(*spec.lambda_range)
    ax.legend(loc="upper right", fontsize=8, framealpha=0.9)
    ax.set_title("Anti-degradability region map")
    _save(fig, spec.out)


def _curve_family(table, value_column):
    egs = [float(v) for v in table["e_minus_gamma"]]
    ds = [int(v) for v in table["d"]]
    values = [float(v) if v else math.nan for v in table[value_column]]
    family: dict[int, list[tuple[float, float]]] = {}
    for eg, d, value in zip(egs, ds, values):
        family.setdefault(d, []).append((eg, value))
    return {d: sorted(points) for d, points in family.items()}


def render_eta_curves(spec: FigureSpec) -> None:
    table = read_table(spec.source, REQUIRED_COLUMNS["eta-curves"])
    family = _curve_family(table, "eta_d")
    fig, ax = _new_axes()
    for d in sorted(family):
        xs, ys = zip(*family[d])
        ax.plot(xs, ys, marker="o", ms=3, lw=1.2, label=rf"$\eta_{{{d}}}$")
    overlays = sorted(set(zip(
        (float(v) for v in table["e_minus_gamma"]),
        (float(v) for v in table["theta_boundary"]),
        (float(v) for v in table["conjecture"]),
    )))
    xs = [p[0] for p in overlays]
    ax.plot(xs, [p[1] for p in overlays], color="black", ls="--", lw=1.0,
            label=r"$\theta = 3/2$ boundary")
    ax.plot(xs, [p[2] for p in overlays], color="black", ls=":", lw=1.0,
            label=r"$1/(1+e^{-\gamma})$")
    ax.set_ylim(0.45, 1.02)
    ax.legend(fontsize=8)
    ax.set_title("A-matrix PSD boundaries")
    _save(fig, spec.out)


def render_lambda_curves(spec: FigureSpec) -> None:
    table = read_table(spec.source, REQUIRED_COLUMNS["lambda-curves"])
    family = _curve_family(table, "lambda_d")
    fig, ax = _new_axes()
    for d in sorted(family):
        xs, ys = zip(*family[d])
        ax.plot(xs, ys, marker="o", ms=3, lw=1.2, label=rf"$\lambda_{{{d}}}$")
    undecided = [
        (float(eg), float(ld))
        for eg, ld, status in zip(table["e_minus_gamma"], table["lambda_d"], table["status"])
        if status != "ok" and ld
    ]
    if undecided:
        xs, ys = zip(*undecided)
        ax.scatter(xs, ys, marker="x", color="red", zorder=3, label="undecided")
    eg_fine = np.linspace(1e-4, 1.0, 200)
    ax.plot(eg_fine, 1.0 / (1.0 + eg_fine), color="black", ls=":", lw=1.0,
            label=r"$1/(1+e^{-\gamma})$")
    ax.set_ylim(0.45, 1.02)
    ax.legend(fontsize=8)
    ax.set_title("Anti-degradability boundaries of qudit restrictions")
    _save(fig, spec.out)


def _save(fig, out: str) -> None:
    fig.savefig(out, metadata={"Software": "lossdeph-figures"})
    plt.close(fig)


RENDERERS = {
    "region-map": render_region_map,
    "eta-curves": render_eta_curves,
    "lambda-curves": render_lambda_curves,
}


def render(spec: FigureSpec) -> None:
    with plt.rc_context(STYLE):
        RENDERERS[spec.kind](spec)
