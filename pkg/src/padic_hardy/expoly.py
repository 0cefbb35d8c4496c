"""Exponential-polynomial sequences on shell indices.

Every tail that the operators can produce from zero, constant and power
tails is a finite sum ``E(k) = sum_i c_i k^{d_i} p^{k s_i}``.  The class is
closed under addition, multiplication, index shifts and partial summation,
which is what keeps operator outputs and their norms in closed form.  A
polynomial factor ``k^d`` with ``d > 0`` only appears at a resonance, where a
partial geometric sum has ratio exactly one.

Exponents ``s`` are kept as exact ``Fraction`` so resonances are detected
exactly.  Coefficients live in whatever arithmetic context (see
:class:`padic_hardy._num.Arith`) the caller is running.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from ._num import Arith, NeedsReal, exponent, is_integral, to_mpf
from .errors import DivergentNorm, UnrepresentableTail

MAX_TERMS = 64


@dataclass(frozen=True)
class Term:
    coef: object
    deg: int
    s: Fraction


class ExpPoly:
    """``k -> sum coef * k**deg * p**(k*s)``, an immutable value."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=()):
        merged: dict[tuple[int, Fraction], object] = {}
        for t in terms:
            if not isinstance(t, Term):
                t = Term(*t)
            key = (int(t.deg), exponent(t.s))
            merged[key] = merged[key] + t.coef if key in merged else t.coef
        kept = tuple(
            Term(c, d, s) for (d, s), c in sorted(merged.items(), key=lambda kv: (kv[0][1], kv[0][0])) if c != 0
        )
        if len(kept) > MAX_TERMS:
            raise UnrepresentableTail(f"tail would need {len(kept)} exponential terms (limit {MAX_TERMS})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", kept)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> ExpPoly:
        return cls(p)

    @classmethod
    def constant(cls, p: int, c) -> ExpPoly:
        return cls(p, [Term(c, 0, Fraction(0))])

    @classmethod
    def power(cls, p: int, s, coef=1) -> ExpPoly:
        """``coef * |x|_p^s`` on shell ``k``, i.e. ``coef * p^(k s)``."""
        return cls(p, [Term(coef, 0, exponent(s))])

    # inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def kind(self) -> str:
        if not self.terms:
            return "zero"
        if len(self.terms) == 1 and self.terms[0].deg == 0:
            return "constant" if self.terms[0].s == 0 else "power"
        return "expoly"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.terms))

    def __repr__(self) -> str:
        body = " + ".join(f"{t.coef}*k^{t.deg}*p^({t.s}k)" for t in self.terms) or "0"
        return f"ExpPoly(p={self.p}: {body})"

    def coefficients(self):
        return [t.coef for t in self.terms]

    # algebra -----------------------------------------------------------

    def convert(self, ctx: Arith) -> ExpPoly:
        return ExpPoly(self.p, [Term(ctx.conv(t.coef), t.deg, t.s) for t in self.terms])

    def value(self, k: int, ctx: Arith):
        total = ctx.conv(0)
        for t in self.terms:
            total += ctx.conv(t.coef) * k**t.deg * ctx.pw(self.p, k * t.s)
        return total

    def add(self, other: ExpPoly, ctx: Arith) -> ExpPoly:
        return ExpPoly(self.p, [Term(ctx.conv(t.coef), t.deg, t.s) for t in self.terms + other.terms])

    def scale(self, lam, ctx: Arith) -> ExpPoly:
        lam = ctx.conv(lam)
        return ExpPoly(self.p, [Term(lam * ctx.conv(t.coef), t.deg, t.s) for t in self.terms])

    def neg(self, ctx: Arith) -> ExpPoly:
        return self.scale(-1, ctx)

    def sub(self, other: ExpPoly, ctx: Arith) -> ExpPoly:
        return self.add(other.neg(ctx), ctx)

    def mul(self, other: ExpPoly, ctx: Arith) -> ExpPoly:
        return ExpPoly(
            self.p,
            [
                Term(ctx.conv(a.coef) * ctx.conv(b.coef), a.deg + b.deg, a.s + b.s)
                for a in self.terms
                for b in other.terms
            ],
        )

    def ipow(self, q: int, ctx: Arith) -> ExpPoly:
        out = ExpPoly.constant(self.p, ctx.conv(1))
        for _ in range(q):
            out = out.mul(self, ctx)
        return out

    def times_pk(self, s) -> ExpPoly:
        """Multiply by ``p^(k s)``."""
        s = exponent(s)
        return ExpPoly(self.p, [Term(t.coef, t.deg, t.s + s) for t in self.terms])

    def shift(self, j: int, ctx: Arith) -> ExpPoly:
        """The sequence ``k -> E(k + j)``."""
        out = []
        for t in self.terms:
            c = ctx.conv(t.coef) * ctx.pw(self.p, j * t.s)
            for i in range(t.deg + 1):
                out.append(Term(c * comb(t.deg, i) * j ** (t.deg - i), i, t.s))
        return ExpPoly(self.p, out)

    def reflect(self, ctx: Arith) -> ExpPoly:
        """The sequence ``k -> E(-k)``."""
        return ExpPoly(
            self.p, [Term(ctx.conv(t.coef) * (-1) ** t.deg, t.deg, -t.s) for t in self.terms]
        )

    # summation ---------------------------------------------------------

    def antiderivative(self, ctx: Arith) -> ExpPoly:
        """Some ``F`` with ``F(m) - F(m-1) = E(m)``.

        Terms with ``s != 0`` get no additive constant, so ``F`` vanishes at
        the end of the index line where ``p^(k s)`` decays.
        """
        out = []
        for t in self.terms:
            c = ctx.conv(t.coef)
            if t.s == 0:
                qs = _faulhaber(t.deg)
                out.extend(Term(c * ctx.conv(qi), i, t.s) for i, qi in enumerate(qs) if qi)
            else:
                r = 1 / ctx.pw(self.p, t.s)
                denom = 1 - r
                qs = [ctx.conv(0)] * (t.deg + 1)
                qs[t.deg] = 1 / denom
                for i in range(t.deg - 1, -1, -1):
                    acc = ctx.conv(0)
                    for j in range(i + 1, t.deg + 1):
                        acc += qs[j] * comb(j, i) * (-1) ** (j - i)
                    qs[i] = r * acc / denom
                out.extend(Term(c * qi, i, t.s) for i, qi in enumerate(qs))
        return ExpPoly(self.p, out)

    def sum_range(self, a: int, b: int, ctx: Arith):
        """``sum_{k=a}^{b} E(k)``, zero when ``a > b``."""
        if a > b or self.is_zero:
            return ctx.conv(0)
        if b - a < 8:
            return sum((self.value(k, ctx) for k in range(a, b + 1)), ctx.conv(0))
        f = self.antiderivative(ctx)
        return f.value(b, ctx) - f.value(a - 1, ctx)

    def sum_from(self, k0: int, ctx: Arith, error=DivergentNorm):
        """``sum_{k >= k0} E(k)``; every term must decay as ``k -> +inf``."""
        if self.is_zero:
            return ctx.conv(0)
        if any(t.s >= 0 for t in self.terms):
            raise error("series diverges at +infinity")
        return -self.antiderivative(ctx).value(k0 - 1, ctx)

    def sum_upto(self, k0: int, ctx: Arith, error=DivergentNorm):
        """``sum_{k <= k0} E(k)``; every term must decay as ``k -> -inf``."""
        if self.is_zero:
            return ctx.conv(0)
        if any(t.s <= 0 for t in self.terms):
            raise error("series diverges at -infinity")
        return self.antiderivative(ctx).value(k0, ctx)

    # asymptotics -------------------------------------------------------

    def dominant(self) -> Term:
        """The term that dominates as ``k -> +inf``."""
        return max(self.terms, key=lambda t: (t.s, t.deg))

    def rest_ratio(self, k: int) -> float:
        """Upper bound for ``|E(k)/dominant(k) - 1|`` at ``k >= 1``.

        Valid for every ``k' >= k`` once ``k`` is past :meth:`turning_point`.
        """
        dom = self.dominant()
        cdom = abs(to_mpf(dom.coef))
        total = mpmath.mpf(0)
        for t in self.terms:
            if t is dom:
                continue
            total += (
                abs(to_mpf(t.coef)) / cdom
                * mpmath.mpf(k) ** (t.deg - dom.deg)
                * mpmath.power(self.p, k * to_mpf(t.s - dom.s))
            )
        return total

    def turning_point(self) -> int:
        """Index beyond which every ``k^e p^(k D)`` ratio term decreases."""
        dom = self.dominant()
        k = 1
        for t in self.terms:
            e, d = t.deg - dom.deg, t.s - dom.s
            if e > 0 and d < 0:
                k = max(k, math.ceil(e / (-float(d) * math.log(self.p))) + 1)
        return k

    def certified_start(self, k0: int, target) -> int:
        """Smallest practical ``K >= k0`` with ``rest_ratio(K) <= target``."""
        k = max(k0, self.turning_point(), 1)
        if len(self.terms) == 1 or self.rest_ratio(k) <= target:
            return k
        step = 1
        while self.rest_ratio(k + step) > target:
            step *= 2
            if step > 1 << 40:
                raise DivergentNorm("tail terms do not separate")
        lo, hi = k + step // 2, k + step
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.rest_ratio(mid) <= target:
                hi = mid
            else:
                lo = mid
        return hi


def _faulhaber(d: int) -> list[Fraction]:
    """Coefficients of ``Q`` with ``Q(m) - Q(m-1) = m^d`` and ``Q(0) = 0``."""
    qs = [Fraction(0)] * (d + 2)
    qs[d + 1] = Fraction(1, d + 1)
    for i in range(d - 1, -1, -1):
        acc = Fraction(0)
        for j in range(i + 2, d + 2):
            acc += qs[j] * comb(j, i) * (-1) ** (j - i + 1)
        qs[i + 1] = -acc / (i + 1)
    return qs


def _tolerance(ctx: Arith):
    return mpmath.mpf(10) ** (-(mpmath.mp.dps - 8)) if ctx.kind != "float" else mpmath.mpf("1e-17")


def _single_power_sum(t: Term, p: int, q, w, k0: int, ctx: Arith):
    """``sum_{k >= k0} |c k^d p^(k s)|^q p^(k w)`` for one term, ``k0 >= 1`` if ``d > 0``."""
    c = abs(ctx.conv(t.coef))
    rate = q * t.s + w
    scale = ctx.power(c, q)
    if t.deg == 0:
        return scale * ctx.pw(p, k0 * rate) / (1 - ctx.pw(p, rate))
    if ctx.kind == "exact":
        raise NeedsReal(q)
    rho = mpmath.power(p, to_mpf(rate))
    val = to_mpf(scale) * rho**k0 * mpmath.lerchphi(rho, -t.deg * to_mpf(q), k0)
    return ctx.conv(val)


def tail_power_sum(e: ExpPoly, q, w, k0: int, ctx: Arith, direction: str = "outer"):
    """``sum |E(k)|^q p^(k w)`` over ``k >= k0`` (outer) or ``k <= k0`` (inner).

    Returns ``(value, error)``; the error bound is zero except for
    non-integer ``q`` with several competing terms.
    """
    q = exponent(q)
    w = exponent(w)
    if direction == "inner":
        return tail_power_sum(e.reflect(ctx), q, -w, -k0, ctx, "outer")
    zero = ctx.conv(0)
    if e.is_zero:
        return zero, zero
    dom = e.dominant()
    if q * dom.s + w >= 0:
        raise DivergentNorm(
            f"tail ~ k^{dom.deg} p^({dom.s} k) has infinite {q}-power sum against weight p^({w} k)"
        )
    integral_q = is_integral(q)
    target = mpmath.mpf(1) / 2 if integral_q else _tolerance(ctx)
    if len(e.terms) == 1:
        start = max(k0, 1) if dom.deg > 0 else k0
    else:
        start = e.certified_start(k0, target)
    total = zero
    for k in range(k0, start):
        total += ctx.power(abs(e.value(k, ctx)), q) * ctx.pw(e.p, k * w)
    if len(e.terms) == 1 and (dom.deg == 0 or not integral_q):
        return total + _single_power_sum(dom, e.p, q, w, start, ctx), zero
    if integral_q:
        sign = 1 if dom.coef > 0 else -1
        g = e.scale(sign, ctx).ipow(int(q), ctx).times_pk(w)
        return total + g.sum_from(start, ctx), zero
    delta = ctx.conv(e.rest_ratio(start))
    main = _single_power_sum(dom, e.p, q, w, start, ctx)
    hi = main * ctx.power(1 + delta, q)
    lo = main * ctx.power(1 - delta, q)
    return total + (hi + lo) / 2, (hi - lo) / 2
