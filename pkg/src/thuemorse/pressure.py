"""Pressure of t*psi, its restriction to the subshifts X_m, and the Legendre spectra.

Production path is the normalised midpoint approximant

    p_n(t) = 1/(n-2) log sum_{j=1}^{2^(n-2)} (exp(psi_n((2j-1)/2^n)) / 2)^t,

which satisfies p_n(0) = p_n(1) = log 2 for every n.  The sup-over-cylinders
definition is kept as an independent cross-check for small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .measure import ResourceError, max_level
from .potential import LOG2, LOG32, cylinder_sup, psi_n_cylinder, psi_n_dyadic
from .symbolic import admissible_values

__all__ = [
    "PressureCurve",
    "LegendreTransform",
    "SpectrumCurve",
    "default_t_grid",
    "midpoint_table",
    "pressure_approx",
    "pressure_curve",
    "restricted_table",
    "restricted_pressure",
    "restricted_pressure_curve",
    "cylinder_sup_pressure",
    "legendre",
    "birkhoff_spectrum",
    "dimension_spectrum",
    "pressure_slope_at_zero",
    "slope_at_zero_closed_form",
    "discrete_second_differences",
]

_CHUNK = 1 << 20


@dataclass
class PressureCurve:
    kind: str  # "full" or "restricted"
    n: int
    t: np.ndarray
    p: np.ndarray
    m: int | None = None

    def second_differences(self) -> np.ndarray:
        return discrete_second_differences(self.t, self.p)

    def is_convex(self, tol: float = 1e-6) -> bool:
        d2 = self.second_differences()
        return bool(d2.size == 0 or d2.min() >= -tol)


@dataclass
class LegendreTransform:
    """``sup_t (t a - p(t))`` over the sampled curve.

    ``unbounded`` marks alphas whose maximum sits at the right end of the
    t grid and is still increasing there; ``value`` is ``inf`` at those.
    """

    alpha: np.ndarray
    value: np.ndarray
    unbounded: np.ndarray
    t_at_max: np.ndarray


@dataclass
class SpectrumCurve:
    kind: str  # "birkhoff" or "dimension"
    n: int
    alpha: np.ndarray
    value: np.ndarray
    meta: dict = field(default_factory=dict)


def discrete_second_differences(x, y) -> np.ndarray:
    """Divided second differences, scaled to agree with y'' on uniform grids."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if len(x) < 3:
        return np.zeros(0)
    h1, h2 = np.diff(x)[:-1], np.diff(x)[1:]
    s1, s2 = np.diff(y)[:-1] / h1, np.diff(y)[1:] / h2
    return 2.0 * (s2 - s1) / (h1 + h2)


def default_t_grid(stop: float = 40.0, step: float = 0.1) -> np.ndarray:
    count = int(math.floor(stop / step + 1e-9)) + 1
    return np.round(np.arange(count) * step, 12)


def _check_level(n: int, lo: int):
    if n < lo:
        raise ValueError(f"n must be >= {lo}")
    cap = max(26, max_level() + 4)
    if n > cap:
        raise ResourceError(f"n = {n} exceeds cap {cap} (set TM_MAX_LEVEL)")


@lru_cache(maxsize=8)
def midpoint_table(n: int) -> np.ndarray:
    """``psi_n((2j - 1) / 2**n)`` for ``j = 1 .. 2**(n-2)``; never singular."""
    _check_level(n, 3)
    count = 1 << (n - 2)
    out = np.empty(count)
    for s in range(0, count, _CHUNK):
        j = np.arange(s, min(s + _CHUNK, count), dtype=np.int64)
        out[s : s + len(j)] = psi_n_dyadic(2 * j + 1, n, n)
    out.setflags(write=False)
    return out


def _lse_pressure(table: np.ndarray, shift: float, t, denom: float) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = table - shift
    return np.array([logsumexp(tt * z) / denom for tt in t])


def pressure_approx(n: int, t: float) -> float:
    """Midpoint approximant ``p_n(t)`` (``t >= 0``; ``p = +inf`` for ``t < 0``)."""
    if t < 0:
        raise ValueError("full pressure is +inf for t < 0")
    return float(_lse_pressure(midpoint_table(n), LOG2, t, n - 2)[0])


def pressure_curve(n: int, t_grid) -> PressureCurve:
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0:
        raise ValueError("empty t grid")
    if np.any(t < 0):
        raise ValueError("full pressure is +inf for t < 0")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t grid must be strictly increasing")
    return PressureCurve("full", n, t, _lse_pressure(midpoint_table(n), LOG2, t, n - 2))


@lru_cache(maxsize=16)
def restricted_table(m: int, n: int) -> np.ndarray:
    """``psi_n`` at a representative point of every word of Sigma_m^n.

    The representative continues the word by the alternating tail that starts
    with the complement of its last symbol (1/3 or 2/3 in the cylinder
    coordinate), so no forbidden run crosses the junction.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    _check_level(n, 2)
    v = admissible_values(n, m)
    tail = np.where(v & 1, 1.0 / 3.0, 2.0 / 3.0)
    out = psi_n_cylinder(v, n, tail, n)
    out.setflags(write=False)
    return out


def restricted_pressure(m: int, n: int, t: float) -> float:
    """``(1/n) log sum_{w in Sigma_m^n} exp(t psi_n(rep(w)))``; any real ``t``."""
    return float(_lse_pressure(restricted_table(m, n), 0.0, t, n)[0])


def restricted_pressure_curve(m: int, n: int, t_grid) -> PressureCurve:
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t) <= 0):
        raise ValueError("t grid must be strictly increasing")
    return PressureCurve("restricted", n, t, _lse_pressure(restricted_table(m, n), 0.0, t, n), m=m)


@lru_cache(maxsize=4)
def _cylinder_sup_table(n: int) -> np.ndarray:
    _, sup = cylinder_sup(np.arange(2**n, dtype=np.int64), n, n)
    return sup


def cylinder_sup_pressure(n: int, t) -> np.ndarray:
    """``(1/n) log sum_{|w| = n} sup_<w> exp(t psi_n)`` with golden-section sups (n <= 16)."""
    if not 1 <= n <= 16:
        raise ValueError("cylinder-sup pressure is limited to 1 <= n <= 16")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("full pressure is +inf for t < 0")
    out = _lse_pressure(_cylinder_sup_table(n), 0.0, t, n)
    return float(out[0]) if t.ndim == 0 else out


def legendre(curve: PressureCurve, alpha_grid) -> LegendreTransform:
    alpha = np.atleast_1d(np.asarray(alpha_grid, dtype=float))
    t, p = curve.t, curve.p
    vals = np.multiply.outer(alpha, t) - p[None, :]
    i = np.argmax(vals, axis=1)
    rows = np.arange(len(alpha))
    value = vals[rows, i]
    at_edge = i == len(t) - 1
    if len(t) > 1:
        rising = vals[:, -1] > vals[:, -2]
    else:
        rising = np.zeros(len(alpha), bool)
    unbounded = at_edge & rising
    value = np.where(unbounded, np.inf, value)
    return LegendreTransform(alpha, value, unbounded, t[i])


def birkhoff_spectrum(n: int, alpha_grid, t_grid=None, curve: PressureCurve | None = None) -> SpectrumCurve:
    """``b(a) = max(-p*(a) / log 2, 0)`` from the level-``n`` pressure.

    Values are clamped to [0, 1].  Above ``log(3/2)`` the level sets are
    empty, so ``b`` is set to 0 there even when the finite-``n`` transform
    is still finite; at ``log(3/2)`` itself the computed value is kept.
    """
    if curve is None:
        curve = pressure_curve(n, default_t_grid() if t_grid is None else t_grid)
    lt = legendre(curve, alpha_grid)
    with np.errstate(invalid="ignore"):
        b = np.clip(-lt.value / LOG2, 0.0, 1.0)
    b = np.where(lt.unbounded | (lt.alpha > LOG32), 0.0, b)
    return SpectrumCurve("birkhoff", curve.n, lt.alpha, b, meta={"t_max": float(curve.t[-1])})


def dimension_spectrum(n: int, alpha_grid, t_grid=None, curve: PressureCurve | None = None) -> SpectrumCurve:
    """``f(a) = b(log(2) (1 - a))``."""
    alpha = np.atleast_1d(np.asarray(alpha_grid, dtype=float))
    b = birkhoff_spectrum(n, LOG2 * (1.0 - alpha), t_grid=t_grid, curve=curve)
    return SpectrumCurve("dimension", b.n, alpha, b.value, meta=dict(b.meta))


def pressure_slope_at_zero(n: int) -> float:
    """Right derivative of ``p_n`` at 0: mean of ``psi_n(x_j) - log 2`` over ``n - 2``."""
    _check_level(n, 4)
    table = midpoint_table(n)
    return float(np.mean(table - LOG2) / (n - 2))


def slope_at_zero_closed_form(n: int) -> float:
    """``-log 2 (n - 3 + 2**(2-n)) / (n - 2)``.

    From ``sum_{r=1}^{M-1} log(2 sin(pi r / M)) = log M``: the mean of ``psi``
    over the odd multiples of ``2**-k`` is ``log 2 (2**(2-k) - 1)``.
    """
    return -LOG2 * (n - 3 + 2.0 ** (2 - n)) / (n - 2)
