"""The potential psi(x) = log(1 - cos 2 pi x) and its Birkhoff sums along x -> 2x mod 1."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .symbolic import BinaryWord

__all__ = [
    "LOG2",
    "LOG32",
    "GAP_BOUND",
    "K_GLOBAL",
    "psi",
    "psi_prime",
    "psi_n",
    "psi_n_dyadic",
    "psi_n_cylinder",
    "psi_truncated",
    "golden_section_max",
    "cylinder_sup",
    "argmax_on_midpoints",
    "max_gap_constant",
]

LOG2 = math.log(2.0)
LOG32 = math.log(1.5)
# max psi_n - psi_n(1/3) never exceeds pi + log(4/3)
GAP_BOUND = math.pi + math.log(4.0 / 3.0)
K_GLOBAL = GAP_BOUND + LOG32

_CHUNK = 1 << 18


def _psi_phase(r):
    """psi at phases already reduced to [0, 1]; 1 - cos 2 pi r = 2 sin^2 pi r."""
    r = np.asarray(r, dtype=float)
    d = np.minimum(r, 1.0 - r)
    with np.errstate(divide="ignore"):
        return LOG2 + 2.0 * np.log(np.sin(np.pi * d))


def psi(x):
    """``log(1 - cos 2 pi x)``; ``-inf`` at integers, ``log 2`` at 1/2.

    Arguments are reduced mod 1.  Fractions are reduced exactly before the
    float evaluation; floats and arrays are reduced with ``np.mod``.
    """
    if isinstance(x, (Fraction, int)):
        r = Fraction(x) % 1
        if r == 0:
            return -math.inf
        d = min(r, 1 - r)
        return LOG2 + 2.0 * math.log(math.sin(math.pi * float(d)))
    out = _psi_phase(np.mod(x, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def psi_prime(x):
    """``2 pi sin(2 pi x) / (1 - cos 2 pi x)``, i.e. ``2 pi cot(pi x)``, on (0, 1)."""
    xa = np.asarray(x, dtype=float)
    if np.any((xa <= 0.0) | (xa >= 1.0)):
        raise ValueError("psi' has poles at 0 and 1; x must lie in (0, 1)")
    out = 2.0 * np.pi / np.tan(np.pi * xa)
    return float(out) if out.ndim == 0 else out


def psi_n(x, n: int):
    """Birkhoff sum ``sum_{l<n} psi(2**l x mod 1)``.

    Rationals follow their orbit exactly (integer numerators modulo the
    denominator); floats double in binary, which is exact but exhausts the
    53 mantissa bits, after which the orbit sits at the dyadic point 0.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(x, (Fraction, int)):
        x = Fraction(x) % 1
        p, q = x.numerator, x.denominator
        total = 0.0
        for _ in range(n):
            if p == 0:
                return -math.inf
            d = min(p, q - p)
            total += LOG2 + 2.0 * math.log(math.sin(math.pi * d / q))
            p = (2 * p) % q
        return total
    y = np.mod(np.asarray(x, dtype=float), 1.0)
    total = np.zeros_like(y)
    for _ in range(n):
        total += _psi_phase(y)
        y = np.mod(2.0 * y, 1.0)
    return float(total) if total.ndim == 0 else total


def psi_n_dyadic(num, k: int, n: int) -> np.ndarray:
    """``psi_n(num / 2**k)`` for integer arrays ``num``; every orbit phase is exact."""
    num = np.asarray(num, dtype=np.int64)
    mask = (1 << k) - 1
    total = np.zeros(num.shape, dtype=float)
    for ell in range(n):
        if ell >= k:
            total += -np.inf
            break
        r = ((num << ell) & mask) / float(1 << k)
        total += _psi_phase(r)
    return total


def psi_n_cylinder(v, k: int, y, n: int):
    """``psi_n`` at ``(v + y) / 2**k``: a point inside the length-``k`` cylinder ``v``.

    The orbit phase of ``2**l x`` is formed as ``((v mod 2**(k-l)) + y) / 2**(k-l)``
    so no digits of ``y`` are lost, however small the cylinder.
    """
    v = np.asarray(v, dtype=np.int64)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(v, y).shape, dtype=float)
    for ell in range(n):
        if ell < k:
            s = k - ell
            r = ((v & ((1 << s) - 1)) + y) / float(1 << s)
        else:
            r = np.mod(y * 2.0 ** (ell - k), 1.0)
        total = total + _psi_phase(r)
    return total


def golden_section_max(f, a, b, tol: float = 1e-12, max_iter: int = 200):
    """Vectorised golden-section search for the maximum of unimodal ``f`` on ``[a, b]``.

    Returns ``(argmax, max)`` arrays; the maximum is taken over the final
    probe points, the bracket midpoint and the two original endpoints, so a
    maximum sitting on the boundary is returned exactly.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    scalar = a.ndim == 0
    a, b = np.atleast_1d(a).copy(), np.atleast_1d(b).copy()
    a0, b0 = a.copy(), b.copy()
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if np.all(b - a <= tol):
            break
        left = fc >= fd
        # keep [a, d] where f(c) >= f(d), else [c, b]; one new probe per bracket
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        probe = np.where(left, b - g * (b - a), a + g * (b - a))
        fp = f(probe)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
    m = 0.5 * (a + b)
    xs = np.stack([c, d, m, a0, b0])
    fs = np.stack([fc, fd, f(m), f(a0), f(b0)])
    i = np.argmax(fs, axis=0)
    cols = np.arange(xs.shape[1])
    x_best, f_best = xs[i, cols], fs[i, cols]
    if scalar:
        return float(x_best[0]), float(f_best[0])
    return x_best, f_best


def cylinder_sup(v, k: int, n: int, tol: float = 1e-12):
    """``sup psi_n`` over the length-``k`` cylinders ``v`` (``k >= n - 1``).

    ``psi_n`` is concave on every cylinder of length ``n - 1`` (one hump) and
    hence on every finer cylinder, so golden-section search is exact up to
    ``tol`` in the cylinder coordinate ``y = 2**k x - v``.
    Returns ``(x_at_sup, sup)``.
    """
    if k < n - 1:
        raise ValueError("psi_n is only concave on cylinders of length >= n - 1")
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    y, val = golden_section_max(
        lambda yy: psi_n_cylinder(v, k, yy, n),
        np.zeros(v.shape),
        np.ones(v.shape),
        tol=tol,
    )
    return (v + y) / 2.0**k, val


def psi_truncated(x, m: int):
    """``psi`` on ``D(m) = [2**-(m+1), 1 - 2**-(m+1)]`` and 0 elsewhere."""
    if m < 1:
        raise ValueError("m must be >= 1")
    lo = Fraction(1, 2 ** (m + 1))
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return psi(x) if lo <= x <= 1 - lo else 0.0
    xa = np.asarray(x, dtype=float)
    inside = (xa >= float(lo)) & (xa <= 1.0 - float(lo))
    out = np.where(inside, psi(np.where(inside, xa, 0.5)), 0.0)
    return float(out) if out.ndim == 0 else out


def _scan_chunk(n, start, stop):
    j = np.arange(start, stop, dtype=np.int64)
    vals = psi_n_dyadic(2 * j + 1, n + 1, n)
    i = int(np.argmax(vals))  # first occurrence: lowest x wins ties
    return float(vals[i]), int(j[i])


def argmax_on_midpoints(n: int, threads: int | None = None):
    """Maximise ``psi_n`` over the midpoints of the length-``n`` cylinders in [0, 1/2].

    Returns ``(x, value, word)`` with ``x`` an exact fraction and ``word``
    the length-``n`` cylinder holding it.  The scan is chunked; chunks may
    run on a thread pool and are reduced in order, so the result does not
    depend on ``threads``.
    """
    if not 1 <= n <= 26:
        raise ValueError("n must lie in 1..26")
    count = 1 << max(n - 1, 0)
    bounds = [(s, min(s + _CHUNK, count)) for s in range(0, count, _CHUNK)]
    if threads and threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda se: _scan_chunk(n, *se), bounds))
    else:
        parts = [_scan_chunk(n, s, e) for s, e in bounds]
    best_val, best_j = parts[0]
    for val, j in parts[1:]:
        if val > best_val:
            best_val, best_j = val, j
    x = Fraction(2 * best_j + 1, 2 ** (n + 1))
    return x, best_val, BinaryWord.from_int(best_j, n)


def max_gap_constant(n: int, threads: int | None = None) -> float:
    """Empirical ``max psi_n - psi_n(1/3)``.

    The midpoint grid locates the best cylinder; the maximum is then refined
    by golden-section search over the hump (length ``n - 1`` cylinder) that
    contains it, so the value never falls below the grid maximum.
    """
    x, grid_max, word = argmax_on_midpoints(n, threads=threads)
    k = n - 1
    hump = word.value >> 1 if k > 0 else 0
    _, refined = cylinder_sup(np.array([hump]), k, n)
    best = max(grid_max, float(refined[0]))
    return best - psi_n(Fraction(1, 3), n)
