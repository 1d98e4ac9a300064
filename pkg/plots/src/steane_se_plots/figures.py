"""Figure construction: sweep rows -> rescaled series -> PNG.

Two figure kinds:

* ``rate-vs-p``      — y = p_L / p_phys² against p_phys (log x by default).
  A fault-tolerant distance-3 protocol has p_L ∝ p² at small p, so this
  ratio is flat and deviations from flatness are immediately visible.
* ``rate-per-cycle`` — y = p_L / N against the cycle count N.  Cycles
  contribute independently at leading order, so this also flattens.

Error bars rescale the Wilson interval columns by the same divisor as
the estimate.  Each input CSV becomes one series, labeled by file stem.
The style is frozen in STYLE so identical input yields identical pixels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .csvio import SweepRow, read_sweep_csv

KINDS = ("rate-vs-p", "rate-per-cycle")

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linewidth": 0.5,
    "legend.frameon": False,
    "lines.markersize": 5.0,
}

_MARKERS = ("o", "s", "D", "^", "v", "P", "X", "*")


@dataclass(frozen=True)
class PlotSpec:
    """Everything one rendering needs; log flags default per kind."""

    inputs: tuple[Path, ...]
    kind: str
    output: Path
    log_x: bool | None = None
    log_y: bool | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; pick one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")

    @property
    def x_log(self) -> bool:
        return self.log_x if self.log_x is not None else self.kind == "rate-vs-p"

    @property
    def y_log(self) -> bool:
        return bool(self.log_y)


def _series(rows: list[SweepRow], kind: str) -> tuple[np.ndarray, ...]:
    """x, y, and (lower, upper) error-bar magnitudes for one CSV."""
    if kind == "rate-vs-p":
        x = np.array([r.p_phys for r in rows])
        if (x <= 0).any():
            raise ValueError(
                "rate-vs-p divides by p_phys**2; every row needs p_phys > 0"
            )
        divisor = x**2
    else:
        x = np.array([float(r.n_cycles) for r in rows])
        divisor = x
    p_l = np.array([r.p_l for r in rows])
    lo = np.array([r.wilson_lo for r in rows])
    hi = np.array([r.wilson_hi for r in rows])
    return x, p_l / divisor, (p_l - lo) / divisor, (hi - p_l) / divisor


_AXIS_LABELS = {
    "rate-vs-p": ("physical error rate p", r"$p_L\,/\,p^2$"),
    "rate-per-cycle": ("extraction cycles N", r"$p_L\,/\,N$"),
}


def plot(spec: PlotSpec) -> Path:
    """Render the figure and write it as PNG; returns the output path."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            for i, path in enumerate(spec.inputs):
                rows = read_sweep_csv(path)
                x, y, err_lo, err_hi = _series(rows, spec.kind)
                ax.errorbar(
                    x, y, yerr=np.vstack([err_lo, err_hi]),
                    marker=_MARKERS[i % len(_MARKERS)],
                    linestyle="-" if len(x) > 1 else "none",
                    capsize=3.0,
                    label=Path(path).stem,
                )
            if spec.x_log:
                ax.set_xscale("log")
            if spec.y_log:
                ax.set_yscale("log")
            xlabel, ylabel = _AXIS_LABELS[spec.kind]
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            if len(spec.inputs) > 1:
                ax.legend()
            fig.tight_layout()
            # Pinned metadata: no timestamps or library versions in the
            # file, so equal inputs give byte-identical PNGs.
            fig.savefig(spec.output, format="png",
                        metadata={"Software": "steane-se-plots"})
        finally:
            plt.close(fig)
    return Path(spec.output)
