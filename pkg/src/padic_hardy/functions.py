"""Radial shell functions, Schwartz-Bruhat functions and their norms.

A radial function on Q_p^n is a sequence ``c_k`` indexed by the shells
``S_k = {|x|_p = p^k}``.  We store it as explicit coefficients on a window
``[kmin, kmax]`` plus an inner tail (``k < kmin``) and an outer tail
(``k > kmax``), each an :class:`~padic_hardy.expoly.ExpPoly` in the absolute
shell index.  Zero, constant and power tails are the one-term special cases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import kernels
from ._num import (
    FLOAT,
    MP,
    Arith,
    exponent,
    fmt_scalar,
    parse_scalar,
    run,
    to_float,
    to_mpf,
)
from .errors import (
    DimensionMismatch,
    DivergentIntegral,
    DivergentNorm,
    InvalidEpsilon,
    InvalidExponent,
    PrimeMismatch,
    UnsupportedTail,
)
from .expoly import ExpPoly, Term, tail_power_sum
from .padic import (
    Ball,
    PAdicScalar,
    Relation,
    ball_relation,
    ball_sphere_intersection_measure,
    check_prime,
    sphere_cover,
    sphere_measure,
    valuation,
)


def Zero(p: int) -> ExpPoly:
    return ExpPoly.zero(p)


def Constant(p: int, c) -> ExpPoly:
    return ExpPoly.constant(p, c)


def Power(p: int, s, coef=1) -> ExpPoly:
    return ExpPoly.power(p, s, coef)


@dataclass(frozen=True)
class Certified:
    """A computed value together with an absolute error bound."""

    value: object
    error: object = 0

    def __iter__(self):
        yield self.value
        yield self.error


@dataclass(frozen=True)
class RadialShellFunction:
    """``x -> c_k`` on ``|x|_p = p^k``.

    ``coeffs[i]`` is the value on shell ``kmin + i``.  An empty window is
    stored as ``kmax == kmin - 1`` so the two tails meet without overlap.
    """

    p: int
    n: int
    kmin: int
    kmax: int
    coeffs: tuple
    inner: ExpPoly = None
    outer: ExpPoly = None

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise DimensionMismatch("dimension must be at least 1")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.inner is None:
            object.__setattr__(self, "inner", ExpPoly.zero(self.p))
        if self.outer is None:
            object.__setattr__(self, "outer", ExpPoly.zero(self.p))
        if self.kmin > self.kmax:
            object.__setattr__(self, "kmax", self.kmin - 1)
        if len(self.coeffs) != self.kmax - self.kmin + 1:
            raise ValueError(
                f"window [{self.kmin}, {self.kmax}] needs {self.kmax - self.kmin + 1} coefficients, got {len(self.coeffs)}"
            )
        for tail in (self.inner, self.outer):
            if tail.p != self.p:
                raise PrimeMismatch(f"tail uses prime {tail.p}, function uses {self.p}")

    # constructors ------------------------------------------------------

    @classmethod
    def from_coeffs(cls, p, n, kmin, coeffs, inner=None, outer=None) -> RadialShellFunction:
        coeffs = tuple(coeffs)
        return cls(p, n, kmin, kmin + len(coeffs) - 1, coeffs, inner, outer)

    @classmethod
    def zero(cls, p: int, n: int) -> RadialShellFunction:
        return cls(p, n, 0, -1, ())

    @classmethod
    def constant(cls, p: int, n: int, c) -> RadialShellFunction:
        return cls(p, n, 0, -1, (), Constant(p, c), Constant(p, c))

    @classmethod
    def ball_indicator(cls, p: int, n: int, gamma: int) -> RadialShellFunction:
        """``chi_{B_gamma(0)}``."""
        return cls(p, n, gamma, gamma, (Fraction(1),), Constant(p, 1))

    @classmethod
    def shell_indicator(cls, p: int, n: int, k: int) -> RadialShellFunction:
        """``chi_{S_k(0)}``."""
        return cls(p, n, k, k, (Fraction(1),))

    # evaluation --------------------------------------------------------

    @property
    def width(self) -> int:
        return self.kmax - self.kmin + 1

    def scalars(self) -> list:
        return list(self.coeffs) + self.inner.coefficients() + self.outer.coefficients()

    def value(self, k: int, ctx: Arith):
        if k < self.kmin:
            return self.inner.value(k, ctx)
        if k > self.kmax:
            return self.outer.value(k, ctx)
        return ctx.conv(self.coeffs[k - self.kmin])

    def __call__(self, k: int, mode: str | None = None):
        return run(lambda ctx: self.value(k, ctx), self.scalars(), mode)

    def values(self, lo: int, hi: int, mode: str | None = None) -> list:
        return run(lambda ctx: [self.value(k, ctx) for k in range(lo, hi + 1)], self.scalars(), mode)

    def rewindow(self, kmin: int, kmax: int, ctx: Arith | None = None) -> RadialShellFunction:
        """Same function, coefficients materialized on a window containing the current one."""
        if self.width and (kmin > self.kmin or kmax < self.kmax):
            raise ValueError("the new window must contain the old one")
        if ctx is None:
            return run(lambda c: self.rewindow(kmin, kmax, c), self.scalars())
        coeffs = tuple(self.value(k, ctx) for k in range(kmin, kmax + 1))
        return RadialShellFunction(self.p, self.n, kmin, kmax, coeffs, self.inner, self.outer)

    def same_function(self, other: RadialShellFunction, mode: str | None = None) -> bool:
        """Value equality on every shell (tails compared as sequences)."""
        if (self.p, self.n) != (other.p, other.n):
            return False
        lo = min(self.kmin, other.kmin)
        hi = max(self.kmax, other.kmax)

        def check(ctx):
            if any(self.value(k, ctx) != other.value(k, ctx) for k in range(lo - 2, hi + 3)):
                return False
            a_in = self.inner.convert(ctx)
            b_in = other.inner.convert(ctx)
            a_out = self.outer.convert(ctx)
            b_out = other.outer.convert(ctx)
            return a_in.sub(b_in, ctx).is_zero and a_out.sub(b_out, ctx).is_zero

        return run(check, self.scalars() + other.scalars(), mode)

    def is_nonnegative(self) -> bool:
        if any(c < 0 for c in self.coeffs):
            return False
        for tail in (self.inner, self.outer):
            if tail.kind in ("zero",):
                continue
            if tail.kind in ("constant", "power") and tail.terms[0].coef >= 0:
                continue
            return False
        return True

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "type": "radial",
            "p": self.p,
            "n": self.n,
            "window": [self.kmin, self.kmax],
            "coeffs": [fmt_scalar(c) for c in self.coeffs],
            "inner": _tail_to_list(self.inner),
            "outer": _tail_to_list(self.outer),
        }

    @classmethod
    def from_dict(cls, d: dict) -> RadialShellFunction:
        if d.get("type") != "radial":
            raise ValueError("not a radial function document")
        p = int(d["p"])
        kmin, kmax = (int(v) for v in d["window"])
        return cls(
            p,
            int(d["n"]),
            kmin,
            kmax,
            tuple(parse_scalar(c) for c in d["coeffs"]),
            _tail_from_list(p, d["inner"]),
            _tail_from_list(p, d["outer"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, s: str) -> RadialShellFunction:
        return cls.from_dict(json.loads(s))


def _tail_to_list(t: ExpPoly) -> list:
    return [{"coef": fmt_scalar(x.coef), "deg": x.deg, "s": str(x.s)} for x in t.terms]


def _tail_from_list(p: int, items: list) -> ExpPoly:
    return ExpPoly(p, [Term(parse_scalar(i["coef"]), int(i["deg"]), Fraction(i["s"])) for i in items])


# Schwartz-Bruhat functions ----------------------------------------------


@dataclass(frozen=True)
class SBFunction:
    """A finite sum of ``value * chi_B`` over pairwise disjoint balls."""

    p: int
    n: int
    pieces: tuple = field(default=())

    def __post_init__(self):
        check_prime(self.p)
        pieces = tuple((b, v) for b, v in self.pieces)
        for b, _ in pieces:
            if b.prime != self.p:
                raise PrimeMismatch(f"piece uses prime {b.prime}, function uses {self.p}")
            if b.dim != self.n:
                raise DimensionMismatch(f"piece has dimension {b.dim}, function has {self.n}")
        for i, (a, _) in enumerate(pieces):
            for b, _ in pieces[i + 1 :]:
                if ball_relation(a, b) is not Relation.DISJOINT:
                    raise ValueError("SB pieces must be pairwise disjoint")
        object.__setattr__(self, "pieces", pieces)

    def __call__(self, x) -> object:
        for b, v in self.pieces:
            if b.contains(x):
                return v
        return 0

    def lq_norm_pow(self, q, alpha) -> object:
        """``int |f|^q |x|_p^alpha dx`` by exact summation over pieces."""
        q, alpha = exponent(q), exponent(alpha)

        def compute(ctx):
            total = ctx.conv(0)
            r = 1 - ctx.pw(self.p, -self.n)
            for b, v in self.pieces:
                vq = ctx.power(abs(ctx.conv(v)), q)
                k = b.shell()
                if k is not None:
                    total += vq * ctx.pw(self.p, k * alpha) * ctx.conv(b.measure())
                else:
                    if alpha + self.n <= 0:
                        raise DivergentNorm("|x|^alpha is not integrable near the origin")
                    g = b.log_radius
                    rate = alpha + self.n
                    total += vq * r * ctx.pw(self.p, g * rate) / (1 - ctx.pw(self.p, -rate))
            return total

        return run(compute, [v for _, v in self.pieces])

    def to_dict(self) -> dict:
        return {
            "type": "sb",
            "p": self.p,
            "n": self.n,
            "pieces": [
                {
                    "center": [_center_digits(c, self.p, b.log_radius) for c in b.center],
                    "log_radius": b.log_radius,
                    "value": fmt_scalar(v),
                }
                for b, v in self.pieces
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SBFunction:
        if d.get("type") != "sb":
            raise ValueError("not an SB function document")
        p, n = int(d["p"]), int(d["n"])
        pieces = []
        for item in d["pieces"]:
            center = tuple(PAdicScalar.parse(s, p).to_fraction() for s in item["center"])
            pieces.append((Ball(p, center, int(item["log_radius"])), parse_scalar(item["value"])))
        return cls(p, n, tuple(pieces))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, s: str) -> SBFunction:
        return cls.from_dict(json.loads(s))


def _center_digits(c: Fraction, p: int, gamma: int) -> str:
    v = valuation(c, p)
    if v is None:
        return PAdicScalar.zero(p).compact()
    return PAdicScalar.from_rational(c, p, precision=-gamma - v).compact()


def radialize(f: SBFunction) -> RadialShellFunction:
    """Average an SB function over every shell."""
    p, n = f.p, f.n
    shells = []
    origin_value = 0
    for b, v in f.pieces:
        k = b.shell()
        if k is None:
            origin_value = v
            shells.append(b.log_radius)
        else:
            shells.append(k)
    if not shells:
        return RadialShellFunction.zero(p, n)
    kmin, kmax = min(shells), max(shells)

    def compute(ctx):
        coeffs = []
        for k in range(kmin, kmax + 1):
            mass = ctx.conv(0)
            for b, v in f.pieces:
                meas = ball_sphere_intersection_measure(b, k)
                if meas:
                    mass += ctx.conv(v) * ctx.conv(meas)
            coeffs.append(mass / ctx.conv(sphere_measure(p, n, k)))
        inner = Constant(p, ctx.conv(origin_value)) if origin_value else Zero(p)
        return RadialShellFunction(p, n, kmin, kmax, tuple(coeffs), inner)

    return run(compute, [v for _, v in f.pieces])


def to_sb(f: RadialShellFunction) -> SBFunction:
    """Write a radial function with zero outer and constant inner tail as SB."""
    if not f.outer.is_zero:
        raise UnsupportedTail("an SB function has compact support; the outer tail must be zero")
    if f.inner.kind not in ("zero", "constant"):
        raise UnsupportedTail("the inner tail must be zero or constant")
    pieces = []
    if f.inner.kind == "constant":
        pieces.append((Ball.at_origin(f.p, f.n, f.kmin - 1), f.inner.terms[0].coef))
    for k, c in zip(range(f.kmin, f.kmax + 1), f.coeffs):
        if c != 0:
            pieces.extend((b, c) for b in sphere_cover(f.p, f.n, k))
    return SBFunction(f.p, f.n, tuple(pieces))


# combination ----------------------------------------------------------


def _check_compatible(f: RadialShellFunction, g: RadialShellFunction) -> None:
    if f.p != g.p:
        raise PrimeMismatch(f"primes differ: {f.p} vs {g.p}")
    if f.n != g.n:
        raise DimensionMismatch(f"dimensions differ: {f.n} vs {g.n}")


def combine(f, g, op: str, ctx: Arith) -> RadialShellFunction:
    """Shellwise ``f op g`` for ``op`` in ``add``, ``sub``, ``mul``, inside ``ctx``."""
    _check_compatible(f, g)
    kmin = min(f.kmin, g.kmin)
    kmax = max(f.kmax, g.kmax)
    fi, fo = f.inner.convert(ctx), f.outer.convert(ctx)
    gi, go = g.inner.convert(ctx), g.outer.convert(ctx)
    if op == "add":
        inner, outer = fi.add(gi, ctx), fo.add(go, ctx)
        fn = lambda a, b: a + b
    elif op == "sub":
        inner, outer = fi.sub(gi, ctx), fo.sub(go, ctx)
        fn = lambda a, b: a - b
    elif op == "mul":
        inner, outer = fi.mul(gi, ctx), fo.mul(go, ctx)
        fn = lambda a, b: a * b
    else:
        raise ValueError(f"unknown operation {op!r}")
    coeffs = tuple(fn(f.value(k, ctx), g.value(k, ctx)) for k in range(kmin, kmax + 1))
    return RadialShellFunction(f.p, f.n, kmin, kmax, coeffs, inner, outer)


def scale(f: RadialShellFunction, lam, ctx: Arith) -> RadialShellFunction:
    lam = ctx.conv(lam)
    return RadialShellFunction(
        f.p,
        f.n,
        f.kmin,
        f.kmax,
        tuple(lam * ctx.conv(c) for c in f.coeffs),
        f.inner.scale(lam, ctx),
        f.outer.scale(lam, ctx),
    )


def pointwise_combine(f: RadialShellFunction, g: RadialShellFunction | None, op: str, lam=None, mode=None):
    """``op`` is ``"add"``, ``"sub"``, ``"mul"`` or ``"scale"`` (uses ``lam``, ignores ``g``)."""
    if op == "scale":
        return run(lambda ctx: scale(f, lam, ctx), f.scalars() + [lam], mode)
    return run(lambda ctx: combine(f, g, op, ctx), f.scalars() + g.scalars(), mode)


# norms ------------------------------------------------------------------


def power_sum(f: RadialShellFunction, q, w, ctx: Arith) -> Certified:
    """``sum_k |c_k|^q p^(k w)`` over every shell, tails in closed form."""
    q, w = exponent(q), exponent(w)
    err = ctx.conv(0)
    lo, e1 = tail_power_sum(f.inner, q, w, f.kmin - 1, ctx, "inner")
    hi, e2 = tail_power_sum(f.outer, q, w, f.kmax + 1, ctx, "outer")
    if ctx is FLOAT and f.width:
        mid = kernels.weighted_power_sum(
            np.array([to_float(c) for c in f.coeffs]),
            float(q),
            ctx.pw(f.p, w),
            ctx.pw(f.p, f.kmin * w),
        )
    else:
        mid = ctx.conv(0)
        for k, c in zip(range(f.kmin, f.kmax + 1), f.coeffs):
            c = ctx.conv(c)
            if c != 0:
                mid += ctx.power(abs(c), q) * ctx.pw(f.p, k * w)
    return Certified(lo + mid + hi, err + e1 + e2)


def _check_q(q, name="q"):
    q = exponent(q)
    if q <= 1:
        raise InvalidExponent(f"{name} must exceed 1, got {q}")
    return q


def weighted_lq_norm_pow(f: RadialShellFunction, q, alpha, mode: str | None = None, certified: bool = False):
    """``||f||^q`` in ``L^q(|x|_p^alpha dx)``; exact for rational data and integer exponents."""
    q, alpha = _check_q(q), exponent(alpha)

    def compute(ctx):
        ps = power_sum(f, q, alpha + f.n, ctx)
        factor = 1 - ctx.pw(f.p, -f.n)
        return Certified(factor * ps.value, factor * ps.error)

    out = run(compute, f.scalars(), mode)
    return out if certified else out.value


def weighted_lq_norm(f: RadialShellFunction, q, alpha, mode: str | None = None):
    q = _check_q(q)
    val = weighted_lq_norm_pow(f, q, alpha, mode)
    return _root(val, q)


def _root(val, q):
    if q == 1:
        return val
    if isinstance(val, float):
        return FLOAT.root(val, q)
    return MP.root(to_mpf(val), q)


def herz_norm_pow(f: RadialShellFunction, alpha, q, r, mode: str | None = None, certified: bool = False):
    """``sum_k p^(k alpha q) ||f chi_k||_{L^r}^q`` with ``||f chi_k||_r = |c_k| |S_k|^(1/r)``."""
    alpha, q, r = exponent(alpha), exponent(q), exponent(r)
    if q <= 0 or r <= 0:
        raise InvalidExponent("Herz exponents must be positive")

    def compute(ctx):
        ps = power_sum(f, q, alpha * q + f.n * q / r, ctx)
        factor = ctx.power(1 - ctx.pw(f.p, -f.n), q / r)
        return Certified(factor * ps.value, factor * ps.error)

    out = run(compute, f.scalars(), mode)
    return out if certified else out.value


def herz_norm(f: RadialShellFunction, alpha, q, r, mode: str | None = None):
    q = exponent(q)
    return _root(herz_norm_pow(f, alpha, q, r, mode), q)


def integral(f: RadialShellFunction, ctx: Arith, error=DivergentIntegral):
    """``int f dx = sum_k c_k |S_k|`` with closed-form tails."""
    factor = 1 - ctx.pw(f.p, -f.n)
    lo = f.inner.convert(ctx).times_pk(f.n).sum_upto(f.kmin - 1, ctx, error)
    hi = f.outer.convert(ctx).times_pk(f.n).sum_from(f.kmax + 1, ctx, error)
    mid = ctx.conv(0)
    for k, c in zip(range(f.kmin, f.kmax + 1), f.coeffs):
        mid += ctx.conv(c) * ctx.pw(f.p, k * f.n)
    return factor * (lo + mid + hi)


def _constant_tail_value(tail: ExpPoly, ctx: Arith, side: str):
    if tail.kind == "zero":
        return ctx.conv(0)
    if tail.kind == "constant":
        return ctx.conv(tail.terms[0].coef)
    raise UnsupportedTail(f"{side} tail must be zero or constant, got {tail.kind}")


def ball_mean_ctx(b: RadialShellFunction, gamma: int, ctx: Arith):
    _constant_tail_value(b.inner, ctx, "inner")
    k0 = min(gamma, b.kmin - 1)
    total = b.inner.convert(ctx).times_pk(b.n).sum_upto(k0, ctx, DivergentIntegral)
    total *= 1 - ctx.pw(b.p, -b.n)
    for k in range(b.kmin, gamma + 1):
        total += b.value(k, ctx) * ctx.conv(sphere_measure(b.p, b.n, k))
    return total / ctx.pw(b.p, gamma * b.n)


def ball_mean(b: RadialShellFunction, gamma: int, mode: str | None = None):
    """Average of ``b`` over ``B_gamma(0)``."""
    return run(lambda ctx: ball_mean_ctx(b, gamma, ctx), b.scalars(), mode)


@dataclass(frozen=True)
class CmoScan:
    """Result of the oscillation scan: the q-th power of the CMO norm."""

    value_pow: object
    argmax: int | None
    gamma_range: tuple[int, int]


def cmo_scan(b: RadialShellFunction, q, ctx: Arith) -> CmoScan:
    q = exponent(q)
    if q < 1:
        raise InvalidExponent("CMO exponent must be at least 1")
    p, n = b.p, b.n
    c_lo = _constant_tail_value(b.inner, ctx, "inner")
    c_hi = _constant_tail_value(b.outer, ctx, "outer")
    coeffs = [ctx.conv(c) for c in b.coeffs]
    head_mass = ctx.pw(p, (b.kmin - 1) * n)
    sizes = [ctx.conv(sphere_measure(p, n, k)) for k in range(b.kmin, b.kmax + 1)]
    best, arg = ctx.conv(0), None
    # gamma < kmin: b is constant on B_gamma, oscillation 0
    if b.width:
        if ctx is FLOAT:
            norm = ctx.pw(p, b.kmax * n)
            osc = kernels.cmo_window(
                np.array(coeffs), np.array(sizes) / norm, head_mass / norm, c_lo, float(q)
            )
            osc = [float(v) for v in osc]
        else:
            osc = []
            mass, integ = head_mass, head_mass * c_lo
            for g in range(b.width):
                mass += sizes[g]
                integ += coeffs[g] * sizes[g]
                mu = integ / mass
                acc = head_mass * ctx.power(abs(c_lo - mu), q)
                for k in range(g + 1):
                    acc += ctx.power(abs(coeffs[k] - mu), q) * sizes[k]
                osc.append(acc / mass)
        for g, v in enumerate(osc):
            if v > best:
                best, arg = v, b.kmin + g
    # gamma > kmax: mu_gamma = c_hi + delta p^(-gamma n)
    top = ctx.pw(p, b.kmax * n)
    a_mass = head_mass * c_lo + sum((c * s for c, s in zip(coeffs, sizes)), ctx.conv(0))
    delta = a_mass - c_hi * top
    big_r = max([abs(c - c_hi) for c in coeffs] + [abs(c_lo - c_hi)])
    big_r += abs(delta) * ctx.pw(p, -(b.kmax + 1) * n)
    shrink = 1 - ctx.conv(Fraction(1, 10**9))
    g = b.kmax + 1
    while True:
        bound = ctx.power(big_r, q) * ctx.pw(p, (b.kmax - g) * n) + ctx.power(abs(delta) * ctx.pw(p, -g * n), q)
        if bound == 0 or bound <= best * shrink:
            break
        mass = ctx.pw(p, g * n)
        mu = c_hi + delta / mass
        acc = head_mass * ctx.power(abs(c_lo - mu), q)
        for c, s in zip(coeffs, sizes):
            acc += ctx.power(abs(c - mu), q) * s
        acc += ctx.power(abs(c_hi - mu), q) * (mass - top)
        v = acc / mass
        if v > best:
            best, arg = v, g
        g += 1
        if g - b.kmax > 100000:
            raise DivergentNorm("oscillation scan did not terminate")
    return CmoScan(best, arg, (b.kmin - 1, g))


def cmo_norm_pow(b: RadialShellFunction, q, mode: str | None = None):
    """``sup_gamma |B_gamma|^-1 int_{B_gamma} |b - b_{B_gamma}|^q``."""
    return run(lambda ctx: cmo_scan(b, q, ctx).value_pow, b.scalars(), mode)


def cmo_norm(b: RadialShellFunction, q, mode: str | None = None):
    q = exponent(q)
    val = cmo_norm_pow(b, q, mode)
    if isinstance(val, Fraction) and q == 1:
        return val
    return _root(val, q)


@dataclass(frozen=True)
class DriftReport:
    checks: int
    violations: tuple


def mean_drift_check(b: RadialShellFunction, margin: int = 3, mode: str | None = None) -> DriftReport:
    """Check the ball-mean drift bound and the chaining inequality built on it.

    For adjacent balls ``|b_{B_i} - b_{B_{i+1}}| <= p^n ||b||_CMO1``; chaining
    gives ``|b(t) - b_{B_k}| <= |b(t) - b_{B_j}| + p^n |j - k| ||b||_CMO1`` for
    every shell of ``t`` and every ``j, k`` in ``[kmin - margin, kmax + margin]``.
    """

    def go(ctx):
        lo, hi = b.kmin - margin, b.kmax + margin
        c1 = cmo_scan(b, 1, ctx).value_pow
        step = ctx.pw(b.p, b.n) * c1
        means = {g: ball_mean_ctx(b, g, ctx) for g in range(lo, hi + 1)}
        vals = {m: b.value(m, ctx) for m in range(lo, hi + 1)}
        bad, checks = [], 0
        for g in range(lo, hi):
            checks += 1
            if abs(means[g] - means[g + 1]) > step:
                bad.append(("drift", g))
        for m, v in vals.items():
            for j in range(lo, hi + 1):
                for k in range(lo, hi + 1):
                    checks += 1
                    if abs(v - means[k]) > abs(v - means[j]) + abs(j - k) * step:
                        bad.append(("chain", m, j, k))
        return DriftReport(checks, tuple(bad))

    return run(go, b.scalars(), mode)


# extremizers --------------------------------------------------------------


@dataclass(frozen=True)
class NormParams:
    q: Fraction
    alpha: Fraction = Fraction(0)
    r: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "q", exponent(self.q))
        object.__setattr__(self, "alpha", exponent(self.alpha))
        if self.r is not None:
            object.__setattr__(self, "r", exponent(self.r))

    @property
    def q_prime(self) -> Fraction:
        return self.q / (self.q - 1)

    def hardy_admissible(self, n: int) -> bool:
        return self.q > 1 and self.alpha < n * (self.q - 1)

    def hlp_admissible(self) -> bool:
        return self.q > 1 and -1 < self.alpha < self.q - 1


@dataclass(frozen=True)
class ExtremizerSpec:
    p: int
    n: int
    q: Fraction
    alpha: Fraction
    eps: Fraction

    def __post_init__(self):
        for name in ("q", "alpha", "eps"):
            object.__setattr__(self, name, exponent(getattr(self, name)))

    @property
    def s(self) -> Fraction:
        return -(self.n + self.alpha) / self.q - self.eps


def make_extremizer(spec: ExtremizerSpec, top: int = 0) -> RadialShellFunction:
    """``f_eps = |x|_p^s`` on ``|x|_p >= 1`` and 0 inside, ``s = -(n+alpha)/q - eps``.

    Shells ``0..top`` are stored explicitly, the rest as a power tail.
    """
    check_prime(spec.p)
    if not 0 < spec.eps < 1:
        raise InvalidEpsilon(f"eps must lie in (0, 1), got {spec.eps}")
    _check_q(spec.q)
    s = spec.s

    def compute(ctx):
        coeffs = tuple(ctx.pw(spec.p, k * s) for k in range(0, top + 1))
        return RadialShellFunction(spec.p, spec.n, 0, top, coeffs, Zero(spec.p), Power(spec.p, s))

    return run(compute)


def random_radial(rng, p: int, n: int, width: int, kmin: int | None = None, exact: bool = False,
                  nonnegative: bool = False, inner=None, outer=None) -> RadialShellFunction:
    """Coefficients i.i.d. uniform on ``[-1, 1]`` (``[0, 1]`` when nonnegative)."""
    if kmin is None:
        kmin = -(width // 2)
    lo = 0 if nonnegative else -1
    if exact:
        den = 64
        coeffs = tuple(Fraction(int(rng.integers(lo * den, den + 1)), den) for _ in range(width))
    else:
        coeffs = tuple(float(x) for x in rng.uniform(lo, 1, width))
    return RadialShellFunction(p, n, kmin, kmin + width - 1, coeffs, inner, outer)


def random_constant_tail(rng, p: int, n: int, width: int, kmin: int | None = None,
                         exact: bool = False) -> RadialShellFunction:
    """Like :func:`random_radial`, with constant tails drawn from the same law."""
    f = random_radial(rng, p, n, width + 2, kmin, exact=exact)
    lo, *mid, hi = f.coeffs
    return RadialShellFunction(p, n, f.kmin + 1, f.kmax - 1, tuple(mid), Constant(p, lo), Constant(p, hi))


def random_sb(rng, p: int, n: int, pieces: int = 4, span: int = 3, exact: bool = True) -> SBFunction:
    """Random disjoint balls with random values near the origin."""
    out: list[tuple[Ball, object]] = []
    attempts = 0
    while len(out) < pieces and attempts < 50 * pieces:
        attempts += 1
        gamma = int(rng.integers(-span, span + 1))
        depth = int(rng.integers(0, span + 1))
        center = tuple(Fraction(int(rng.integers(0, p ** (2 * depth + 1))), p**depth) for _ in range(n))
        ball = Ball(p, center, gamma)
        if all(ball_relation(ball, b) is Relation.DISJOINT for b, _ in out):
            if exact:
                val = Fraction(int(rng.integers(-32, 33)), 16)
            else:
                val = float(rng.uniform(-1, 1))
            if val:
                out.append((ball, val))
    return SBFunction(p, n, tuple(out))
