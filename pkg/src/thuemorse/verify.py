"""Numerical checks of the library against known values, grouped into suites.

Every check records what was expected, what was observed and the tolerance
used; ``VerifyReport.overall`` is the conjunction.  The acceptance checks
are listed in ``ACCEPTANCE`` in a fixed order and are shared by the CLI
``verify`` command and the test suite.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import groupby

import numpy as np

from . import entropy as ent
from .measure import (
    cylinder_mass,
    cylinder_masses,
    g_identity_check,
    gibbs_upper_check_all,
    local_dimension_estimate,
    beta_estimate,
)
from .potential import GAP_BOUND, LOG2, LOG32, argmax_on_midpoints, max_gap_constant, psi, psi_n
from .pressure import (
    birkhoff_spectrum,
    cylinder_sup_pressure,
    default_t_grid,
    dimension_spectrum,
    discrete_second_differences,
    pressure_curve,
    pressure_slope_at_zero,
    restricted_pressure,
    slope_at_zero_closed_form,
)
from .symbolic import (
    binary_digits,
    collapse_h,
    count_words,
    enumerate_words,
    is_admissible,
    preimage_exponent,
    rho2,
)

__all__ = ["Check", "VerifyReport", "ACCEPTANCE", "SUITES", "run_suite", "run_acceptance"]

H_REFERENCE = "0.50638399544731967430"


@dataclass
class Check:
    name: str
    expected: str
    observed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: observed {self.observed}; expected {self.expected} (tol {self.tolerance})"


@dataclass
class VerifyReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "overall": self.overall, "checks": [asdict(c) for c in self.checks]}


def _timed(name, fn, **kw) -> Check:
    t0 = time.perf_counter()
    expected, observed, tol, ok = fn(**kw)
    return Check(name, str(expected), str(observed), str(tol), bool(ok), time.perf_counter() - t0)


def _g(x: float) -> str:
    return format(float(x), ".6g")


# -- acceptance checks ------------------------------------------------------


def check_normalisations():
    worst0 = worst1 = 0.0
    for n in range(3, 21):
        c = pressure_curve(n, [0.0, 1.0])
        worst0 = max(worst0, abs(c.p[0] - LOG2))
        worst1 = max(worst1, abs(c.p[1] - LOG2))
    return "p_n(0) = p_n(1) = log 2, n = 3..20", f"max err {_g(worst0)} / {_g(worst1)}", "1e-12 / 1e-9", worst0 <= 1e-12 and worst1 <= 1e-9


def check_maximal_exponent():
    target = LOG32 / LOG2
    err = max(abs(beta_estimate(Fraction(1, 3), n) - target) for n in range(1, 61))
    return "beta(1/3) = log(3/2)/log 2, n = 1..60", f"max err {_g(err)}", "1e-12", err <= 1e-12


def check_argmax_location(threads=None):
    bad = []
    for n in range(2, 23):
        _, _, word = argmax_on_midpoints(n, threads=threads)
        if word.bits != ("01" * n)[:n]:
            bad.append((n, word.bits))
    return "argmax cylinder 0101..., n = 2..22", f"mismatches {bad}", "exact", not bad


def check_gap_constant(threads=None):
    gaps = [max_gap_constant(n, threads=threads) for n in range(2, 23)]
    return f"max psi_n - psi_n(1/3) <= {_g(GAP_BOUND)}, n = 2..22", f"largest gap {_g(max(gaps))}", "bound", max(gaps) <= GAP_BOUND


def check_gibbs_upper(seed: int = 0):
    failures = 0
    worst = -math.inf
    for n in range(1, 11):
        lm, lb, ok = gibbs_upper_check_all(n, n + 4)
        failures += int(np.sum(~ok))
        worst = max(worst, float(np.max(lm - lb)))
    rng = np.random.default_rng(seed)
    vals = rng.integers(0, 2**16, size=100)
    lm, lb, ok = gibbs_upper_check_all(16, 20, values=vals)
    failures += int(np.sum(~ok))
    worst = max(worst, float(np.max(lm - lb)))
    return "nu_N<w> <= 2^-n sup exp(psi_n) on every tested word", f"{failures} failures, max log(mass/bound) {_g(worst)}", "rel 1e-9", failures == 0


def check_partition_of_unity():
    m8 = cylinder_masses(8, 14)
    m9 = cylinder_masses(9, 14)
    total = abs(m8.sum() - 1.0)
    refine = float(np.max(np.abs(m8 - (m9[0::2] + m9[1::2]))))
    # single-word path agrees with the batched one
    single = max(abs(cylinder_mass(format(v, "08b"), 14).mass - m8[v]) for v in (0, 37, 170, 255))
    ok = total <= 1e-10 and refine <= 1e-10 and single <= 1e-12
    return "sum = 1 over Sigma^8 at N = 14; nu<w> = nu<w0> + nu<w1>", f"{_g(total)}, {_g(refine)}", "1e-10", ok


def check_minimal_local_dimension(seed: int = 0):
    target = 2.0 - math.log(3) / LOG2
    err = max(abs(local_dimension_estimate(Fraction(1, 3), n)[0] - target) for n in range(1, 201))
    rng = np.random.default_rng(seed)
    lowest = math.inf
    for _ in range(1000):
        q = int(rng.integers(3, 2**40))
        p = int(rng.integers(1, q))
        lowest = min(lowest, local_dimension_estimate(Fraction(p, q), 200)[0])
    ok = err <= 1e-12 and lowest >= target - 1e-9
    return f"dim(1/3) = {_g(target)}; random rationals >= it", f"err {_g(err)}, min over 1000 {_g(lowest)}", "1e-12 / 1e-9", ok


def check_entropy():
    r = ent.entropy_series(10)
    err = abs(float(r.h - ent.mpmath.mpf(H_REFERENCE)))
    ok = err <= 1e-10 and r.digits_validated >= 10
    return f"h = {H_REFERENCE}, schemes agree to 10 digits", f"h = {r.h_decimal}, {r.digits_validated} digits agree", "1e-10", ok


def check_derived_constants():
    d1 = ent.information_dimension(ent.entropy_series(10))
    e = ent.energy_exponent()
    ok = abs(d1 - 0.7305) <= 5e-4 and abs(e - 0.6427) <= 5e-4 and d1 > e
    return "D1 = 0.7305, e = 0.6427, D1 > e", f"D1 = {_g(d1)}, e = {_g(e)}", "5e-4", ok


def check_spectrum_endpoints():
    curve = pressure_curve(20, default_t_grid())
    ends = birkhoff_spectrum(20, [-LOG2, LOG32], curve=curve).value
    alpha = np.linspace(-LOG2, LOG32, 401)
    b = birkhoff_spectrum(20, alpha, curve=curve).value
    sup = b > 0
    concave = float(np.max(discrete_second_differences(alpha[sup], b[sup]), initial=-np.inf)) <= 1e-8
    fa = np.linspace(1.0 - LOG32 / LOG2, 2.0, 301)
    f = dimension_spectrum(20, fa, curve=curve).value
    same = np.array_equal(f, birkhoff_spectrum(20, LOG2 * (1.0 - fa), curve=curve).value)
    ok = ends[0] >= 0.97 and ends[1] <= 0.03 and concave and same
    return (
        "b(-log 2) >= 0.97, b(log 3/2) <= 0.03, concave, f = b o reparam",
        f"b(-log 2) = {_g(ends[0])}, b(log 3/2) = {_g(ends[1])}, concave {concave}, f exact {same}",
        "as stated",
        ok,
    )


def check_pressure_shape():
    curve = pressure_curve(20, default_t_grid())
    convex = curve.is_convex(tol=1e-9)
    low = float(np.min(curve.p - curve.t * LOG32))
    high = float(np.min((1.0 + curve.t) * LOG2 - curve.p))
    asym = [pressure_curve(n, [8.0]).p[0] - 8.0 * LOG32 for n in (12, 16, 20)]
    decreasing = asym[0] > asym[1] > asym[2]
    ok = convex and low >= 0.0 and high >= -1e-12 and decreasing
    return (
        "convex; t log(3/2) <= p_20 <= (1+t) log 2; p_n(8) - 8 log(3/2) decreasing",
        f"convex {convex}, margins {_g(low)} / {_g(high)}, offsets {[_g(a) for a in asym]}",
        "slack 0",
        ok,
    )


def check_restricted_monotone():
    ms = (1, 2, 3, 4, 6)
    ok, worst_excess, drops = True, -math.inf, []
    for t in (0.0, 0.5, 1.0, 2.0):
        vals = [restricted_pressure(m, 20, t) for m in ms]
        full = pressure_curve(20, [t]).p[0]
        for a, b in zip(vals, vals[1:]):
            if b < a - 1e-12:
                drops.append(t)
        worst_excess = max(worst_excess, max(vals) - full)
    ok = not drops and worst_excess <= 0.05
    return "p_m nondecreasing in m, p_m <= p + 0.05", f"drops at t {drops}, max p_m - p {_g(worst_excess)}", "0.05", ok


def check_collapse():
    problems = []
    for n in range(1, 13):
        for m in range(1, 5):
            images = Counter()
            for u in enumerate_words(n):
                w = collapse_h(u, m)
                if not is_admissible(w, m) or collapse_h(w, m) != w:
                    problems.append(("image", n, m, u.bits))
                images[w] += 1
            if sum(images.values()) != 2**n:
                problems.append(("mass", n, m))
            for w in enumerate_words(n, m):
                # independent count: runs of length exactly m, except the final run
                runs = [len(list(g)) for _, g in groupby(w.bits)]
                i = sum(1 for r in runs[:-1] if r == m)
                if images[w] != 2**i or preimage_exponent(w, m) != i:
                    problems.append(("count", n, m, w.bits))
    return "idempotent, admissible, 2^n total, 2^i per word (n <= 12, m <= 4)", f"{len(problems)} problems", "exact", not problems


def check_g_identity():
    err = g_identity_check(10_000)
    return "g(y/2) + g(y/2 + 1/2) = 1", f"max err {_g(err)}", "1e-12", err <= 1e-12


def check_cylinder_sup_oracle():
    t = np.round(np.arange(201) * 0.05, 12)
    diff = np.abs(cylinder_sup_pressure(14, t) - pressure_curve(14, t).p)
    i = int(np.argmax(diff))
    return "|sup-pressure_14 - p_14| on [0, 10]", f"max {_g(diff[i])} at t = {_g(t[i])}", "0.08", diff[i] <= 0.08


ACCEPTANCE = [
    ("normalisations", check_normalisations),
    ("maximal exponent", check_maximal_exponent),
    ("argmax location", check_argmax_location),
    ("gap constant", check_gap_constant),
    ("gibbs upper bound", check_gibbs_upper),
    ("partition of unity", check_partition_of_unity),
    ("minimal local dimension", check_minimal_local_dimension),
    ("entropy", check_entropy),
    ("derived constants", check_derived_constants),
    ("spectrum endpoints", check_spectrum_endpoints),
    ("pressure shape", check_pressure_shape),
    ("restricted pressure monotone", check_restricted_monotone),
    ("collapse algorithm", check_collapse),
    ("g-function identity", check_g_identity),
    ("cylinder-sup oracle", check_cylinder_sup_oracle),
]

_THREADED = {check_argmax_location, check_gap_constant}


# -- quick invariant checks -------------------------------------------------


def check_symbolic_examples():
    ok = (
        binary_digits(Fraction(1, 3), 4) == "0101"
        and rho2(Fraction(1, 3), Fraction(2, 3)) == 1
        and rho2(Fraction(1, 3), Fraction(5, 12)) == Fraction(1, 4)
        and all(count_words(n, m) == sum(1 for _ in enumerate_words(n, m)) for n in range(1, 11) for m in (1, 2, 3))
    )
    return "digits, rho2 and word counts", str(ok), "exact", ok


def check_potential_examples():
    err = max(
        abs(psi(Fraction(1, 2)) - LOG2),
        abs(psi(Fraction(1, 3)) - LOG32),
        abs(psi_n(Fraction(1, 3), 50) - 50 * LOG32),
    )
    ok = err <= 1e-12 and psi(0) == -math.inf
    return "psi(1/2) = log 2, psi(1/3) = log 3/2, psi(0) = -inf", f"max err {_g(err)}", "1e-12", ok


def check_measure_examples():
    m1 = cylinder_mass("0", 1).mass
    m2 = cylinder_mass("00", 2).mass
    m6 = cylinder_mass("0", 6).mass
    err = max(abs(m1 - 0.5), abs(m2 - (0.25 - 1.0 / (3.0 * math.pi))), abs(m6 - 0.5))
    return "nu_1<0> = 1/2, nu_2<00> = 1/4 - 1/(3 pi), nu_6<0> = 1/2", f"max err {_g(err)}", "1e-12", err <= 1e-12


def check_slope_at_zero():
    err = max(abs(pressure_slope_at_zero(n) - slope_at_zero_closed_form(n)) for n in (4, 8, 12, 16, 20))
    return "slope at 0 = -log 2 (n - 3 + 2^(2-n))/(n - 2)", f"max err {_g(err)}", "1e-12", err <= 1e-12


def check_eta_invariants():
    table = ent.eta_table(10_000)
    doubling = all(table[2 * j] == table[j] for j in range(5001))
    bounded = all(abs(x) <= 1 for x in table)
    err = max(abs(float(table[j]) - ent.eta_empirical(j, 22)) for j in range(65))
    ok = doubling and bounded and err <= 2e-5
    return "eta(2j) = eta(j), |eta| <= 1, recursion = empirical", f"max err {_g(err)}", "2e-5", ok


def check_variational_identity():
    r = ent.entropy_series(10)
    integral_ref = -LOG2 - 2.0 * float(r.S)
    masses = cylinder_masses(8, 14)
    mids = (2 * np.arange(256) + 1) / 512.0
    integral = float(np.sum(masses * psi(mids)))
    identity = abs(float(r.h) + integral_ref - LOG2)
    ok = abs(integral - integral_ref) <= 5e-3 and identity <= 1e-15
    return f"int psi dnu = {_g(integral_ref)}", f"{_g(integral)}", "5e-3", ok


SUITES = {
    "symbolic": [("symbolic examples", check_symbolic_examples), ("collapse algorithm", check_collapse)],
    "potential": [
        ("potential examples", check_potential_examples),
        ("maximal exponent", check_maximal_exponent),
        ("argmax location", check_argmax_location),
        ("gap constant", check_gap_constant),
    ],
    "measure": [
        ("measure examples", check_measure_examples),
        ("gibbs upper bound", check_gibbs_upper),
        ("partition of unity", check_partition_of_unity),
        ("minimal local dimension", check_minimal_local_dimension),
        ("g-function identity", check_g_identity),
    ],
    "pressure": [
        ("normalisations", check_normalisations),
        ("slope at zero", check_slope_at_zero),
        ("spectrum endpoints", check_spectrum_endpoints),
        ("pressure shape", check_pressure_shape),
        ("restricted pressure monotone", check_restricted_monotone),
        ("cylinder-sup oracle", check_cylinder_sup_oracle),
    ],
    "entropy": [
        ("eta invariants", check_eta_invariants),
        ("entropy", check_entropy),
        ("derived constants", check_derived_constants),
        ("variational identity", check_variational_identity),
    ],
    "acceptance": ACCEPTANCE,
}


def _run(suite: str, items, threads=None) -> VerifyReport:
    report = VerifyReport(suite)
    for name, fn in items:
        kw = {"threads": threads} if fn in _THREADED else {}
        report.checks.append(_timed(name, fn, **kw))
    return report


def run_acceptance(threads=None) -> VerifyReport:
    return _run("acceptance", ACCEPTANCE, threads)


def run_suite(suite: str = "all", threads=None) -> VerifyReport:
    """Run one suite; ``"all"`` runs every suite, each check once."""
    if suite == "all":
        seen, items = set(), []
        for name in ("symbolic", "potential", "measure", "pressure", "entropy", "acceptance"):
            for name_fn in SUITES[name]:
                if name_fn[1] not in seen:
                    seen.add(name_fn[1])
                    items.append(name_fn)
        return _run("all", items, threads)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    return _run(suite, SUITES[suite], threads)
