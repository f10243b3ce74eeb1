"""Binary words, dyadic cylinders and the run-length subshifts X_m.

A word ``w = w1...wn`` addresses the dyadic interval
``[v / 2**n, (v + 1) / 2**n]`` where ``v`` is ``w`` read as a big-endian
binary integer.  Dyadic points are given their terminating (trailing zeros)
expansion, which makes the left endpoint of a cylinder belong to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterator, Union

import numpy as np

__all__ = [
    "BinaryWord",
    "as_word",
    "is_dyadic",
    "binary_digits",
    "word_interval",
    "point_to_word",
    "rho2",
    "is_admissible",
    "enumerate_words",
    "count_words",
    "admissible_values",
    "collapse_h",
    "preimage_exponent",
    "preimage_count",
    "format_rational",
    "parse_rational",
]

Rational = Union[Fraction, int]


@dataclass(frozen=True)
class BinaryWord:
    """A finite 0/1 string; ``BinaryWord("0110")``."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"not a binary word: {self.bits!r}")

    @classmethod
    def from_int(cls, value: int, n: int) -> "BinaryWord":
        if not 0 <= value < 2**n:
            raise ValueError(f"{value} does not fit in {n} bits")
        return cls(format(value, f"0{n}b"))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return int(self.bits, 2)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return self.bits

    def __add__(self, other):
        return BinaryWord(self.bits + str(other))

    def flipped(self) -> "BinaryWord":
        """Bit-flip involution, ``w -> w^``; on intervals ``x -> 1 - x``."""
        return BinaryWord(self.bits.translate(_FLIP))

    def midpoint(self) -> Fraction:
        return Fraction(2 * self.value + 1, 2 ** (self.n + 1))


_FLIP = str.maketrans("01", "10")


def as_word(w) -> BinaryWord:
    if isinstance(w, BinaryWord):
        return w
    if isinstance(w, (tuple, list)):
        w = "".join(str(int(b)) for b in w)
    return BinaryWord(str(w))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def is_dyadic(x) -> bool:
    """True for rationals whose denominator is a power of two (including 0)."""
    q = _as_fraction(x).denominator
    return q & (q - 1) == 0


def binary_digits(x, n: int) -> str:
    """First ``n`` binary digits of ``x`` in [0, 1), terminating convention."""
    x = _as_fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    p, q = x.numerator, x.denominator
    out = []
    for _ in range(n):
        p *= 2
        if p >= q:
            out.append("1")
            p -= q
        else:
            out.append("0")
    return "".join(out)


def word_interval(w) -> tuple[Fraction, Fraction]:
    w = as_word(w)
    low = Fraction(w.value, 2**w.n)
    return low, low + Fraction(1, 2**w.n)


def point_to_word(x, n: int) -> BinaryWord:
    """The length-``n`` cylinder containing ``x``.

    ``x = 1`` is rejected rather than mapped to ``11...1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return BinaryWord(binary_digits(x, n))


def rho2(x, y) -> Fraction:
    """Shift-space distance ``2**-k``, ``k`` the common binary prefix length.

    Undefined at dyadic points, which have two expansions.
    """
    x, y = _as_fraction(x), _as_fraction(y)
    for z in (x, y):
        if is_dyadic(z):
            raise ValueError(f"rho2 is not defined at the dyadic point {z}")
        if not 0 <= z < 1:
            raise ValueError(f"point outside [0, 1): {z}")
    if x == y:
        return Fraction(0)
    # non-dyadic rationals with x != y differ after finitely many digits
    px, qx, py, qy = x.numerator, x.denominator, y.numerator, y.denominator
    k = 0
    while True:
        px, py = 2 * px, 2 * py
        dx, dy = px >= qx, py >= qy
        if dx != dy:
            return Fraction(1, 2**k)
        px, py = px - dx * qx, py - dy * qy
        k += 1


def is_admissible(w, m: int) -> bool:
    """True iff ``w`` has no run of one symbol of length ``m + 1``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return max(len(list(g)) for _, g in groupby(as_word(w).bits)) <= m


def enumerate_words(n: int, m: int | None = None) -> Iterator[BinaryWord]:
    """All words of length ``n`` (or only those admissible for X_m), in lexicographic order.

    The admissible case is a depth-first search on (last symbol, run length),
    so the cost is linear in the number of words produced.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m is None:
        for v in range(2**n):
            yield BinaryWord.from_int(v, n)
        return
    if m < 1:
        raise ValueError("m must be >= 1")

    prefix: list[str] = []

    def dfs(last: str, run: int):
        if len(prefix) == n:
            yield BinaryWord("".join(prefix))
            return
        for s in "01":
            r = run + 1 if s == last else 1
            if r > m:
                continue
            prefix.append(s)
            yield from dfs(s, r)
            prefix.pop()

    yield from dfs("", 0)


def admissible_values(n: int, m: int | None = None) -> np.ndarray:
    """Integer values of the words of ``enumerate_words(n, m)`` as a sorted array.

    Level-by-level extension with a (last symbol, run length) state per word;
    used where the Python generator would be too slow (n around 20).
    """
    if m is None:
        return np.arange(2**n, dtype=np.int64)
    vals = np.array([0, 1], dtype=np.int64)
    run = np.ones(2, dtype=np.int64)
    for _ in range(n - 1):
        last = vals & 1
        new_vals, new_run = [], []
        for s in (0, 1):
            same = last == s
            r = np.where(same, run + 1, 1)
            keep = r <= m
            new_vals.append((vals[keep] << 1) | s)
            new_run.append(r[keep])
        vals = np.concatenate(new_vals)
        run = np.concatenate(new_run)
    order = np.argsort(vals, kind="stable")
    return vals[order]


def count_words(n: int, m: int | None = None) -> int:
    """Cardinality of Sigma^n or Sigma_m^n (transfer-matrix count on run lengths)."""
    if m is None:
        return 2**n
    # runs ending in each length 1..m; by symmetry both symbols behave alike
    counts = [2] + [0] * (m - 1)
    for _ in range(n - 1):
        total = sum(counts)
        counts = [total] + counts[:-1]
    return sum(counts)


def collapse_h(w, m: int) -> BinaryWord:
    """Map a word into Sigma_m^n by repeated suffix flips.

    Scan for the first position where a symbol has occurred ``m + 1`` times
    in a row, flip that symbol and everything after it, and rescan.
    """
    bits = list(as_word(w).bits)
    n = len(bits)
    while True:
        run, gamma = 0, None
        for i in range(n):
            run = run + 1 if i and bits[i] == bits[i - 1] else 1
            if run == m + 1:
                gamma = i
                break
        if gamma is None:
            return BinaryWord("".join(bits))
        for i in range(gamma, n):
            bits[i] = "1" if bits[i] == "0" else "0"


def preimage_exponent(w, m: int) -> int:
    """Number of positions ``g`` whose ``m`` predecessors carry one symbol.

    Each such position can be flipped independently to produce a preimage of
    ``w`` under :func:`collapse_h`, so there are ``2**i`` preimages.
    """
    bits = as_word(w).bits
    return sum(
        1 for g in range(m, len(bits)) if len(set(bits[g - m : g])) == 1
    )


def preimage_count(w, m: int) -> int:
    """Brute-force ``#{u in Sigma^n : collapse_h(u, m) == w}`` (n <= 20)."""
    w = as_word(w)
    if not is_admissible(w, m):
        raise ValueError(f"{w} is not admissible for m={m}")
    if w.n > 20:
        raise ValueError("brute force limited to n <= 20")
    return sum(1 for u in enumerate_words(w.n) if collapse_h(u, m) == w)


def format_rational(x) -> str:
    x = _as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(s)
