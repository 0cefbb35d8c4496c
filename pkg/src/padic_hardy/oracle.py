"""Brute-force reference implementations and the oracle-check harness.

Everything here works on finitely supported shell sequences (a ``dict`` from
shell index to value) and sums over explicit (shell, shell) pairs with Haar
measures taken straight from :mod:`padic_hardy.padic`.  Nothing is shared with
the closed-form code paths except the measure formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .functions import (
    RadialShellFunction,
    SBFunction,
    ball_mean,
    cmo_norm_pow,
    herz_norm_pow,
    mean_drift_check,
    radialize,
    random_constant_tail,
    random_radial,
    random_sb,
    weighted_lq_norm_pow,
)
from .operators import (
    hardy_adjoint_apply,
    hardy_apply,
    hlp_apply,
    inner_product,
    maximal_apply,
)
from .padic import Ball, ball_measure, intersection_measure, sphere_measure


def shells(f: RadialShellFunction) -> dict[int, Fraction]:
    """Finite shell table of a function with zero tails."""
    if not (f.inner.is_zero and f.outer.is_zero):
        raise ValueError("oracles take finitely supported functions")
    return {k: Fraction(c) for k, c in zip(range(f.kmin, f.kmax + 1), f.coeffs) if c != 0}


def naive_hardy(c: dict, p: int, n: int, m: int) -> Fraction:
    total = sum((v * sphere_measure(p, n, k) for k, v in c.items() if k <= m), Fraction(0))
    return total / ball_measure(p, n, m) * Fraction(1)


def naive_adjoint(c: dict, p: int, n: int, m: int, closed: bool = False) -> Fraction:
    return sum(
        (v * sphere_measure(p, n, k) / Fraction(p) ** (k * n) for k, v in c.items() if k > m or (closed and k == m)),
        Fraction(0),
    )


def naive_hlp(c: dict, p: int, m: int) -> Fraction:
    return sum((v * sphere_measure(p, 1, k) / Fraction(p) ** max(m, k) for k, v in c.items()), Fraction(0))


def naive_ball_mean(c: dict, p: int, n: int, gamma: int) -> Fraction:
    return sum((v * sphere_measure(p, n, k) for k, v in c.items() if k <= gamma), Fraction(0)) / ball_measure(p, n, gamma)


def naive_maximal(c: dict, p: int, n: int, m: int, reach: int = 80) -> Fraction:
    best = c.get(m, Fraction(0))
    for g in range(m, max(c, default=m) + reach):
        best = max(best, naive_ball_mean(c, p, n, g))
    return best


def naive_inner(c: dict, d: dict, p: int, n: int) -> Fraction:
    return sum((v * d[k] * sphere_measure(p, n, k) for k, v in c.items() if k in d), Fraction(0))


def naive_lq_pow(c: dict, p: int, n: int, q: int, alpha: int) -> Fraction:
    return sum((abs(v) ** q * Fraction(p) ** (k * alpha) * sphere_measure(p, n, k) for k, v in c.items()), Fraction(0))


def naive_cmo_pow(c: dict, p: int, n: int, q: int, reach: int = 60) -> Fraction:
    """Oscillation scan for a finitely supported ``b``, q integer."""
    lo, hi = min(c, default=0), max(c, default=0)
    best = Fraction(0)
    for g in range(lo - 2, hi + reach):
        mu = naive_ball_mean(c, p, n, g)
        acc = abs(mu) ** q * ball_measure(p, n, lo - 1) if g >= lo else Fraction(0)
        for k in range(lo, g + 1):
            acc += abs(c.get(k, Fraction(0)) - mu) ** q * sphere_measure(p, n, k)
        best = max(best, acc / ball_measure(p, n, g))
    return best


def sb_hardy_direct(f: SBFunction, m: int) -> Fraction:
    """``Hf`` at any point of ``S_m``, straight from ball intersections."""
    target = Ball.at_origin(f.p, f.n, m)
    total = sum((Fraction(v) * intersection_measure(b, target) for b, v in f.pieces), Fraction(0))
    return total / ball_measure(f.p, f.n, m)


@dataclass
class OracleReport:
    cases: int = 0
    checks: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def check(self, ok: bool, what: str, **details) -> None:
        self.checks += 1
        if not ok and len(self.counterexamples) < 20:
            self.counterexamples.append({"check": what, **{k: str(v) for k, v in details.items()}})


def oracle_check(seed: int = 0, cases: int = 60, max_width: int = 12, primes=(2, 3, 5)) -> OracleReport:
    """Compare every closed form against the brute-force oracles on random small cases."""
    if max_width > 12:
        raise ValueError("oracle windows are limited to width 12")
    rng = np.random.default_rng(seed)
    rep = OracleReport()
    for case in range(cases):
        p = int(primes[case % len(primes)])
        n = 1 + (case // len(primes)) % 2
        width = int(rng.integers(1, max_width + 1))
        kmin = int(rng.integers(-6, 4))
        f = random_radial(rng, p, n, width, kmin, exact=True)
        g = random_radial(rng, p, n, int(rng.integers(1, max_width + 1)), int(rng.integers(-6, 4)), exact=True)
        cf, cg = shells(f), shells(g)
        rep.cases += 1
        lo = min(f.kmin, g.kmin) - 3
        hi = max(f.kmax, g.kmax) + 3
        hf, af, acf = hardy_apply(f), hardy_adjoint_apply(f), hardy_adjoint_apply(f, closed=True)
        for m in range(lo, hi + 1):
            rep.check(hf(m) == naive_hardy(cf, p, n, m), "hardy", p=p, n=n, m=m, f=f.coeffs)
            rep.check(af(m) == naive_adjoint(cf, p, n, m), "adjoint", p=p, n=n, m=m)
            rep.check(acf(m) == naive_adjoint(cf, p, n, m, closed=True), "adjoint_closed", p=p, n=n, m=m)
        if n == 1:
            tf = hlp_apply(f)
            for m in range(lo, hi + 1):
                rep.check(tf(m) == naive_hlp(cf, p, m), "hlp", p=p, m=m)
        # adjointness: the closed adjoint is exact; the open one is off by (1 - p^-n) <f, g>
        lhs = inner_product(g, hf)
        rep.check(lhs == inner_product(f, hardy_adjoint_apply(g, closed=True)), "adjointness", p=p, n=n)
        shift = (1 - Fraction(p) ** -n) * inner_product(f, g)
        rep.check(lhs == inner_product(f, hardy_adjoint_apply(g)) + shift, "adjointness_open", p=p, n=n)
        rep.check(inner_product(f, g) == naive_inner(cf, cg, p, n), "inner_product", p=p, n=n)
        for q, alpha in ((2, 0), (3, 1), (2, -n + 1)):
            rep.check(weighted_lq_norm_pow(f, q, alpha) == naive_lq_pow(cf, p, n, q, alpha), "lq", q=q, alpha=alpha)
            diff = herz_norm_pow(f, Fraction(alpha, q), q, q) - weighted_lq_norm_pow(f, q, alpha)
            rep.check(diff == 0, "herz_lebesgue", q=q, alpha=alpha)
        fabs = RadialShellFunction(p, n, f.kmin, f.kmax, tuple(abs(c) for c in f.coeffs))
        mf = maximal_apply(fabs)
        cabs = shells(fabs)
        for m in range(lo, hi + 1):
            rep.check(mf(m) == naive_maximal(cabs, p, n, m), "maximal", p=p, n=n, m=m)
            rep.check(ball_mean(f, m) == naive_ball_mean(cf, p, n, m), "ball_mean", m=m)
        for q in (1, 2):
            rep.check(cmo_norm_pow(f, q) == naive_cmo_pow(cf, p, n, q), "cmo", q=q, p=p, n=n)
        c1 = cmo_norm_pow(f, 1)
        c2 = cmo_norm_pow(f, 2)
        rep.check(c1 * c1 <= c2, "cmo_monotone", p=p)
        b = random_constant_tail(rng, p, n, int(rng.integers(1, max_width + 1)), int(rng.integers(-6, 4)), exact=True)
        drift = mean_drift_check(b)
        rep.checks += drift.checks - 1
        rep.check(not drift.violations, "mean_drift", p=p, n=n, first=drift.violations[:1])
        sb = random_sb(rng, p, n, pieces=3, span=2)
        rad = radialize(sb)
        hr = hardy_apply(rad)
        for m in range(rad.kmin - 2, rad.kmax + 3):
            rep.check(hr(m) == sb_hardy_direct(sb, m), "radialize_hardy", p=p, n=n, m=m)
        rep.check(weighted_lq_norm_pow(rad, 2, 0) <= sb.lq_norm_pow(2, 0), "radialize_norm", p=p, n=n)
    return rep
