"""Datasets behind the standard figures, and their rendering with matplotlib.

Each dataset is a header plus equal-length numeric columns, written as CSV
next to a PNG of the same name.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .potential import LOG2, LOG32, psi, psi_n
from .pressure import birkhoff_spectrum, default_t_grid, pressure_curve

__all__ = ["FIGURES", "figure_data", "render_figure"]

FIGURES = ("b_spectrum", "psi_humps", "birkhoff_humps", "pressure_asymptotes")

GRID_POINTS = 10_000


def _unit_grid() -> np.ndarray:
    # cell midpoints avoid the zeros of 1 - cos 2 pi x
    return (np.arange(GRID_POINTS) + 0.5) / GRID_POINTS


def figure_data(name: str, n: int = 20) -> tuple[list[str], list[np.ndarray]]:
    if name == "b_spectrum":
        alpha = np.round(-1.5 + 0.005 * np.arange(401), 12)
        curve = pressure_curve(n, default_t_grid())
        b = birkhoff_spectrum(n, alpha, curve=curve)
        return ["alpha", "b"], [alpha, b.value]
    if name == "psi_humps":
        x = _unit_grid()
        return ["x", "psi_x", "psi_2x", "psi_4x"], [x, psi(x), psi(2 * x), psi(4 * x)]
    if name == "birkhoff_humps":
        x = _unit_grid()
        return ["x", "psi_3", "psi_5"], [x, psi_n(x, 3), psi_n(x, 5)]
    if name == "pressure_asymptotes":
        t = np.round(0.01 * np.arange(1001), 12)
        p = pressure_curve(n, t).p
        return ["t", "p", "t_log_3_2", "one_minus_t_log_2"], [t, p, t * LOG32, (1.0 - t) * LOG2]
    raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


def render_figure(name: str, header, columns, path) -> Path:
    """Draw one dataset to ``path`` (PNG) with the Agg backend."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4), dpi=120)
    x = columns[0]
    if name == "b_spectrum":
        ax.plot(x, columns[1], color="k", lw=1.2)
        for a in (-LOG2, LOG32):
            ax.axvline(a, color="0.6", lw=0.6, ls=":")
        ax.set_xlabel(r"$\alpha$")
        ax.set_ylabel(r"$b(\alpha)$")
    elif name == "pressure_asymptotes":
        ax.plot(x, columns[1], color="k", lw=1.2, label=r"$p(t)$")
        ax.plot(x, columns[2], color="C0", lw=0.8, ls="--", label=r"$t\log(3/2)$")
        ax.plot(x, columns[3], color="C3", lw=0.8, ls="--", label=r"$(1-t)\log 2$")
        ax.set_ylim(-0.5, max(1.5, float(np.max(columns[1]))))
        ax.set_xlabel("t")
        ax.legend(frameon=False)
    else:
        styles = ["-", "--", ":"]
        for col, label, ls in zip(columns[1:], header[1:], styles):
            ax.plot(x, col, lw=0.9, ls=ls, label=label)
        ax.set_ylim(-8.0, 4.0 if name == "birkhoff_humps" else 1.0)
        ax.set_xlabel("x")
        ax.legend(frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path
