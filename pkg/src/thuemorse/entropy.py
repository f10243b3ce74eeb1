"""Thue-Morse autocorrelations and the entropy series ``h = 2 log 2 + 2 sum eta(j)/j``.

The autocorrelations obey ``eta(0) = 1``, ``eta(2j) = eta(j)`` and
``eta(2j+1) = -(eta(j) + eta(j+1)) / 2``; they are kept as exact rationals.
The series converges slowly, so it is evaluated by two unrelated schemes:

* partial sums up to ``2**K`` followed by Richardson extrapolation in
  ``2**-K`` (the dyadic partial sums have an error expansion in that
  variable, a consequence of the renormalisation equations);
* repeated even/odd resummation, which rewrites the sum as a short
  constant plus a series whose terms decay like ``j**-(L+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

__all__ = [
    "ConvergenceError",
    "EntropyResult",
    "eta",
    "eta_table",
    "eta_empirical",
    "entropy_series",
    "information_dimension",
    "energy_exponent",
    "KAPPA",
]

KAPPA = (1.0 + math.sqrt(17.0)) / 4.0
MAX_TARGET = 14
WORK_DPS = 40

_ETA: list[Fraction] = [Fraction(1), Fraction(-1, 3)]


class ConvergenceError(ArithmeticError):
    """The two summation schemes disagree at the requested precision."""

    def __init__(self, message, value_a=None, value_b=None):
        super().__init__(message)
        self.value_a = value_a
        self.value_b = value_b


def eta_table(J: int) -> list[Fraction]:
    """``[eta(0), ..., eta(J)]``; the memo grows on demand and is shared."""
    if J < 0:
        raise ValueError("J must be >= 0")
    e = _ETA
    for j in range(len(e), J + 2):
        h = j >> 1
        e.append(e[h] if j % 2 == 0 else -(e[h] + e[h + 1]) / 2)
    return e[: J + 1]


def eta(j: int) -> Fraction:
    if j < 0:
        raise ValueError("j must be >= 0")
    if j >= len(_ETA):
        eta_table(j)
    return _ETA[j]


@lru_cache(maxsize=2)
def _thue_morse_signs(L: int) -> np.ndarray:
    """``v_k = (-1)**popcount(k - 1)`` for ``k = 1 .. 2**L``, built by doubling."""
    v = np.ones(1, dtype=np.int64)
    for _ in range(L):
        v = np.concatenate([v, -v])
    v.setflags(write=False)
    return v


def eta_empirical(j: int, L: int) -> float:
    """Finite-sample autocorrelation of the +-1 Thue-Morse word of length ``2**L``."""
    n = 1 << L
    if not 0 <= j < n:
        raise ValueError("need 0 <= j < 2**L")
    v = _thue_morse_signs(L)
    return float(np.dot(v[: n - j], v[j:])) / (n - j)


@dataclass(frozen=True)
class EntropyResult:
    h: mpmath.mpf
    S: mpmath.mpf
    digits_validated: int
    h_partial_sums: mpmath.mpf
    h_resummed: mpmath.mpf

    @property
    def h_decimal(self) -> str:
        """``h`` printed to the validated number of significant digits."""
        return mpmath.nstr(self.h, self.digits_validated, strip_zeros=False)


def _mp(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def _sum_partial_richardson(K: int = 18, skip: int = 6) -> mpmath.mpf:
    """Partial sums at ``2**k``, ``k <= K``, extrapolated in ``2**-k``."""
    e = eta_table(1 << K)
    partial = {}
    S = mpmath.mpf(0)
    lo = 1
    for k in range(K + 1):
        hi = 1 << k
        # fixed dyadic blocks [2**(k-1) + 1, 2**k]
        S += mpmath.fsum(_mp(e[j]) / j for j in range(lo, hi + 1))
        partial[k] = S
        lo = hi + 1
    row = [partial[k] for k in range(skip, K + 1)]
    p = 1
    while len(row) > 1:
        f = mpmath.mpf(2) ** p
        row = [(f * row[i + 1] - row[i]) / (f - 1) for i in range(len(row) - 1)]
        p += 1
    return row[0]


def _sum_resummed(levels: int = 5, J: int = 1 << 10) -> mpmath.mpf:
    """Iterate ``T(f) = -f(1)/2 + T(g)``, ``g(j) = f(2j) - (f(2j+1) + f(2j-1))/2``.

    ``f`` stays a finite combination ``sum_b c_b / (a j + b)``, carried as
    exact rationals; after ``levels`` steps the terms decay fast enough for
    a direct sum to ``J``.
    """
    a, terms = 1, {0: Fraction(1)}
    const = Fraction(0)
    for _ in range(levels):
        const -= sum(c / (a + b) for b, c in terms.items()) / 2
        new: dict[int, Fraction] = {}
        for b, c in terms.items():
            new[b] = new.get(b, 0) + c
            new[b + a] = new.get(b + a, 0) - c / 2
            new[b - a] = new.get(b - a, 0) - c / 2
        a, terms = 2 * a, {b: c for b, c in new.items() if c}
    e = eta_table(J)
    coeff = [(b, _mp(c)) for b, c in terms.items()]
    tail = mpmath.fsum(
        _mp(e[j]) * mpmath.fsum(c / (a * j + b) for b, c in coeff) for j in range(1, J + 1)
    )
    return _mp(const) + tail


@lru_cache(maxsize=1)
def _both_schemes():
    with mpmath.workdps(WORK_DPS):
        return _sum_partial_richardson(), _sum_resummed()


def _agreeing_digits(x, y) -> int:
    diff = abs(x - y)
    if diff == 0:
        return 20
    return max(0, min(20, int(mpmath.floor(-mpmath.log10(diff / abs(x))))))


def entropy_series(precision_target: int = 10) -> EntropyResult:
    """``h = 2 log 2 + 2 S``, ``S = sum_{j>=1} eta(j)/j``, validated by two schemes."""
    if not 1 <= precision_target <= MAX_TARGET:
        raise ValueError(f"precision_target must lie in 1..{MAX_TARGET}")
    sa, sb = _both_schemes()
    with mpmath.workdps(WORK_DPS):
        two_log2 = 2 * mpmath.log(2)
        ha, hb = two_log2 + 2 * sa, two_log2 + 2 * sb
        digits = _agreeing_digits(ha, hb)
        if digits < precision_target:
            raise ConvergenceError(
                f"schemes agree to {digits} digits only: {mpmath.nstr(ha, 25)} vs {mpmath.nstr(hb, 25)}",
                ha,
                hb,
            )
        h = (ha + hb) / 2
        if not 0 < h < mpmath.log(2):
            raise ConvergenceError("entropy outside (0, log 2)", ha, hb)
        return EntropyResult(h, (sa + sb) / 2, digits, ha, hb)


def information_dimension(result: EntropyResult | None = None) -> float:
    """``D1 = h / log 2``."""
    if result is None:
        result = entropy_series(10)
    return float(result.h / mpmath.log(2))


def energy_exponent() -> float:
    """``1 - log2(kappa)`` with ``kappa = (1 + sqrt 17) / 4``."""
    return 1.0 - math.log2(KAPPA)
