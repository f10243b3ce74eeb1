"""Riesz-product approximants nu_N and their masses on dyadic cylinders.

``P_N(x) = prod_{l<N} (1 - cos 2 pi 2**l x)`` is a trigonometric polynomial
with frequencies ``|k| < 2**N``.  Multiplying by ``1 - cos 2 pi 2**N x``
gives the coefficient recursion

    c'(k) = c(k) - c(k - 2**N) / 2 - c(k + 2**N) / 2,

which is exact and O(2**N) per level, so cylinder masses are integrated
term by term rather than by quadrature of a rapidly oscillating density.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .potential import LOG2, cylinder_sup, psi_n, psi_n_cylinder
from .symbolic import BinaryWord, as_word

__all__ = [
    "ResourceError",
    "max_level",
    "TrigPolynomial",
    "CylinderMass",
    "fourier_coeffs",
    "density",
    "cylinder_mass",
    "cylinder_masses",
    "gibbs_upper_check",
    "gibbs_upper_check_all",
    "gibbs_lower_ratio",
    "local_dimension_estimate",
    "beta_estimate",
    "g",
    "g_identity_check",
]

DEFAULT_MAX_LEVEL = 22
EXACT_MAX_LEVEL = 12


class ResourceError(RuntimeError):
    """A requested level exceeds the configured memory cap."""


def max_level() -> int:
    """Level cap; ``TM_MAX_LEVEL`` in the environment overrides the default 22."""
    return int(os.environ.get("TM_MAX_LEVEL", DEFAULT_MAX_LEVEL))


@dataclass(frozen=True)
class TrigPolynomial:
    """Coefficients of ``P_N`` stored densely, index ``k + 2**N - 1`` for ``|k| < 2**N``.

    ``coeffs`` is a float array, or a list of ``Fraction`` in exact mode.
    """

    N: int
    coeffs: object
    exact: bool = False

    @property
    def offset(self) -> int:
        return 2**self.N - 1

    def __getitem__(self, k: int):
        i = k + self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0) if self.exact else 0.0

    def as_dict(self) -> dict:
        """Nonzero coefficients keyed by frequency."""
        return {
            k - self.offset: c for k, c in enumerate(self.coeffs) if c != 0
        }

    def __call__(self, x):
        """Evaluate ``sum_k c_k cos(2 pi k x)`` (the table is even in ``k``)."""
        x = np.asarray(x, dtype=float)
        c = np.asarray(self.coeffs, dtype=float)[self.offset:]
        k = np.arange(len(c))
        out = np.cos(2.0 * np.pi * np.multiply.outer(x, k)) @ (c * np.where(k > 0, 2.0, 1.0))
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CylinderMass:
    word: BinaryWord
    level: int
    mass: float


def fourier_coeffs(N: int, exact: bool = False) -> TrigPolynomial:
    """Fourier table of ``P_N``; exact rationals available up to ``N = 12``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if N > max_level():
        raise ResourceError(f"level {N} exceeds cap {max_level()} (set TM_MAX_LEVEL)")
    if exact:
        if N > EXACT_MAX_LEVEL:
            raise ResourceError(f"exact mode is limited to N <= {EXACT_MAX_LEVEL}")
        c = [Fraction(1)]
        for L in range(N):
            h = 2**L
            new = [Fraction(0)] * (4 * h - 1)
            off = 2 * h - 1
            for i, ci in enumerate(c):
                k = i - (h - 1)
                if ci:
                    new[off + k] += ci
                    new[off + k - h] -= ci / 2
                    new[off + k + h] -= ci / 2
            c = new
        return TrigPolynomial(N, c, exact=True)
    c = np.ones(1)
    for L in range(N):
        h = 2**L
        new = np.zeros(4 * h - 1)
        lo = h  # new index of old k = -(h - 1)
        new[lo : lo + 2 * h - 1] += c
        new[lo - h : lo + h - 1] -= 0.5 * c
        new[lo + h : lo + 3 * h - 1] -= 0.5 * c
        c = new
    return TrigPolynomial(N, c)


def density(x, N: int):
    """``P_N(x)`` as the direct product of its ``N`` factors."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for ell in range(N):
        out = out * (1.0 - np.cos(2.0 * np.pi * np.mod(x * 2.0**ell, 1.0)))
    return float(out) if out.ndim == 0 else out


_COEFF_CACHE: dict[int, TrigPolynomial] = {}


def _float_coeffs(N: int) -> TrigPolynomial:
    if N not in _COEFF_CACHE:
        _COEFF_CACHE.clear()
        _COEFF_CACHE[N] = fourier_coeffs(N)
    return _COEFF_CACHE[N]


def _fourier_mass(v: int, n: int, N: int) -> float:
    # nu_N([a, b]) = (b - a) + sum_{k>=1} c_k (sin 2 pi k b - sin 2 pi k a) / (pi k)
    c = np.asarray(_float_coeffs(N).coeffs)[2**N:]
    if len(c) == 0:
        return 2.0**-n
    k = np.arange(1, len(c) + 1, dtype=np.int64)
    q = 1 << n
    # phases k*a and k*b reduced mod 1 exactly in integers
    sa = np.sin(2.0 * np.pi * (((k % q) * v) % q) / q)
    sb = np.sin(2.0 * np.pi * (((k % q) * ((v + 1) % q)) % q) / q)
    return 2.0**-n + float(np.sum(c * (sb - sa) / (np.pi * k)))


@lru_cache(maxsize=4)
def _gauss_legendre(nodes: int):
    return np.polynomial.legendre.leggauss(nodes)


def _local_log_mass(v, n: int, N: int, nodes: int = 48):
    """log nu_N of the length-``n`` cylinders ``v`` via the self-similar split.

    ``P_N(x) = P_n(x) P_{N-n}(2**n x)``, so with ``x = (v + y) / 2**n``

        nu_N<v> = 2**-n * int_0^1 P_n((v + y) / 2**n) P_{N-n}(y) dy.

    The first factor is smooth in ``y`` and handled in log form; the second
    has bandwidth ``2**(N-n)``.  Composite Gauss-Legendre with one panel per
    four periods of the fast factor integrates the product to full relative
    precision, however small the mass.
    """
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if N < n:
        raise ValueError("local method needs N >= n")
    panels = max(1, 2 ** (N - n) // 4)
    t, w = _gauss_legendre(nodes)
    left = np.arange(panels)[:, None] / panels
    y = (left + 0.5 * (t[None, :] + 1.0) / panels).ravel()
    w = np.tile(0.5 * w / panels, panels)
    with np.errstate(divide="ignore"):
        logp = psi_n_cylinder(v[:, None], n, y[None, :], n)
        tail = np.log(density(y, N - n)) if N > n else np.zeros_like(y)
    logf = logp + tail[None, :]
    top = np.max(logf, axis=1, keepdims=True)
    s = np.sum(w[None, :] * np.exp(logf - top), axis=1)
    with np.errstate(divide="ignore"):
        return top[:, 0] + np.log(s) - n * LOG2


def cylinder_mass(word, N: int, method: str = "fourier") -> CylinderMass:
    """``nu_N(<word>) = int_<word> P_N``.

    ``method="fourier"`` integrates the coefficient table exactly (absolute
    accuracy ~1e-15); ``method="local"`` uses the self-similar split and
    keeps relative accuracy for tiny masses (requires ``N >= len(word)``).
    """
    w = as_word(word)
    if N > max_level():
        raise ResourceError(f"level {N} exceeds cap {max_level()} (set TM_MAX_LEVEL)")
    if method == "fourier":
        mass = _fourier_mass(w.value, w.n, N)
    elif method == "local":
        mass = float(np.exp(_local_log_mass(np.array([w.value]), w.n, N)[0]))
    else:
        raise ValueError(f"unknown method {method!r}")
    return CylinderMass(w, N, mass)


def cylinder_masses(n: int, N: int) -> np.ndarray:
    """Fourier masses of all ``2**n`` cylinders of length ``n``, indexed by word value."""
    if N > max_level():
        raise ResourceError(f"level {N} exceeds cap {max_level()} (set TM_MAX_LEVEL)")
    c = np.asarray(_float_coeffs(N).coeffs)[2**N:]
    q = 1 << n
    k = np.arange(1, len(c) + 1, dtype=np.int64)
    weights = c / (np.pi * k)
    edges = np.arange(q + 1, dtype=np.int64)
    # S[e] = sum_k c_k sin(2 pi k e / q) / (pi k) at every cylinder edge
    S = np.array([np.sum(weights * np.sin(2.0 * np.pi * ((k * e) % q) / q)) for e in edges])
    return 2.0**-n + np.diff(S)


def gibbs_upper_check(word, N: int, rtol: float = 1e-9):
    """Compare ``nu_N<w>`` with ``2**-n sup_<w> exp(psi_n)``.

    Returns ``(mass, bound, passed)``.  The comparison is done in log form
    with the locally integrated mass so deep, nearly empty cylinders are
    still decided correctly.
    """
    w = as_word(word)
    n = w.n
    if N < n:
        raise ValueError("need N >= len(word)")
    log_mass = float(_local_log_mass(np.array([w.value]), n, N)[0])
    _, sup = cylinder_sup(np.array([w.value]), n, n)
    log_bound = float(sup[0]) - n * LOG2
    passed = log_mass <= log_bound + math.log1p(rtol)
    return math.exp(log_mass), math.exp(log_bound), bool(passed)


def gibbs_upper_check_all(n: int, N: int, values=None, rtol: float = 1e-9):
    """Vectorised :func:`gibbs_upper_check` over word values (default: all of Sigma^n).

    Returns ``(log_mass, log_bound, passed)`` arrays.
    """
    v = np.arange(2**n, dtype=np.int64) if values is None else np.asarray(values, dtype=np.int64)
    log_mass = _local_log_mass(v, n, N)
    _, sup = cylinder_sup(v, n, n)
    log_bound = sup - n * LOG2
    return log_mass, log_bound, log_mass <= log_bound + math.log1p(rtol)


def gibbs_lower_ratio(word, N: int, m: int) -> float:
    """Diagnostic ``nu_N<w> / (2**-n inf exp(psi_n))`` over ``<w>`` intersected with X_m.

    The infimum over the Cantor set is approximated on two points of ``<w>``
    continued admissibly: by the periodic tails ``(a^m b^m)`` and ``(a b)``,
    where ``a`` is the complement of the last symbol of ``w`` and ``b`` the last
    symbol.  No threshold is implied.
    """
    w = as_word(word)
    n = w.n
    log_mass = float(_local_log_mass(np.array([w.value]), n, N)[0])
    b = w.bits[-1]
    a = "1" if b == "0" else "0"
    vals = []
    for tail in (a * m + b * m, a + b):
        frac = Fraction(int(tail, 2), 2 ** len(tail) - 1)
        x = (Fraction(w.value) + frac) / 2**n
        vals.append(psi_n(x, n))
    return math.exp(log_mass - (min(vals) - n * LOG2))


def local_dimension_estimate(x, n: int) -> tuple[float, bool]:
    """``1 - psi_n(x) / (n log 2)``; the flag is True when ``psi_n(x) = -inf``."""
    s = psi_n(x, n)
    if s == -math.inf:
        return math.inf, True
    return 1.0 - s / (n * LOG2), False


def beta_estimate(x, n: int) -> float:
    """Finite-``n`` scaling exponent ``psi_n(x) / (n log 2)``."""
    return psi_n(x, n) / (n * LOG2)


def g(x):
    """The g-function ``(1 - cos 2 pi x) / 2``."""
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.asarray(x, dtype=float)))


def g_identity_check(samples: int, seed: int = 0) -> float:
    """Max over random ``y`` of ``|g(y/2) + g(y/2 + 1/2) - 1|``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    y = np.random.default_rng(seed).random(samples)
    return float(np.max(np.abs(g(y / 2.0) + g(y / 2.0 + 0.5) - 1.0)))
