"""Hardy-type operators acting exactly on radial shell functions.

On shell ``m`` (``r = p^-n``):

* Hardy:   ``(Hf)_m  = (1 - r) p^(-mn) sum_{k <= m} c_k p^(kn)``
* adjoint: ``(H*f)_m = (1 - r) sum_{k > m} c_k``  (``k >= m`` with ``closed=True``)
* HLP:     ``(Tf)_m  = (1 - 1/p) [p^-m sum_{k <= m} c_k p^k + sum_{k > m} c_k]``  (n = 1)

Tails are propagated through these sums in closed form, so outputs are again
radial shell functions with exponential-polynomial tails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._num import FLOAT, Arith, run, to_float
from .errors import (
    DimensionMismatch,
    NegativeInput,
    NonIntegrableAtInfinity,
    NonIntegrableAtZero,
    UnsupportedTail,
)
from .expoly import ExpPoly
from .functions import RadialShellFunction, combine, integral


def _hardy(f: RadialShellFunction, ctx: Arith) -> RadialShellFunction:
    p, n = f.p, f.n
    inner = f.inner.convert(ctx)
    if any(t.s + n <= 0 for t in inner.terms):
        raise NonIntegrableAtZero("inner tail is not integrable at the origin")
    one_minus = 1 - ctx.pw(p, -n)
    # m < kmin: (1 - r) p^(-mn) G(m), G the antiderivative of c_k p^(kn) vanishing at -inf
    g_in = inner.times_pk(n).antiderivative(ctx)
    out_inner = g_in.times_pk(-n).scale(one_minus, ctx)
    head = out_inner.value(f.kmin - 1, ctx)
    r = ctx.pw(p, -n)
    if ctx is FLOAT and f.width:
        window = tuple(float(v) for v in kernels.hardy_recurrence(np.array([to_float(c) for c in f.coeffs]), r, head))
    else:
        acc, window = head, []
        for c in f.coeffs:
            acc = r * acc + one_minus * ctx.conv(c)
            window.append(acc)
        window = tuple(window)
    last = window[-1] if window else head
    # m > kmax: (1 - r) p^(-mn) [P + G(m) - G(kmax)] with P = sum_{k <= kmax} c_k p^(kn)
    g_out = f.outer.convert(ctx).times_pk(n).antiderivative(ctx)
    lead = last * ctx.pw(p, f.kmax * n) - one_minus * g_out.value(f.kmax, ctx)
    out_outer = ExpPoly.power(p, -n, lead).add(g_out.times_pk(-n).scale(one_minus, ctx), ctx)
    return RadialShellFunction(p, n, f.kmin, f.kmax, window, out_inner, out_outer)


def _adjoint(f: RadialShellFunction, ctx: Arith, closed: bool) -> RadialShellFunction:
    p, n = f.p, f.n
    outer = f.outer.convert(ctx)
    if any(t.s >= 0 for t in outer.terms):
        raise NonIntegrableAtInfinity("outer tail is not integrable at infinity")
    one_minus = 1 - ctx.pw(p, -n)
    # m >= kmax: sum_{k > m} E(k) = -F(m), F the antiderivative vanishing at +inf
    f_out = outer.antiderivative(ctx)
    tail_sum = -f_out.value(f.kmax, ctx)
    out_outer = (f_out.shift(-1, ctx) if closed else f_out).scale(-one_minus, ctx)
    if ctx is FLOAT and f.width:
        sums = kernels.suffix_sum(np.array([to_float(c) for c in f.coeffs]), tail_sum, strict=not closed)
        window = tuple(one_minus * float(v) for v in sums)
    else:
        acc, sums = tail_sum, []
        for c in reversed(f.coeffs):
            c = ctx.conv(c)
            if closed:
                acc += c
                sums.append(acc)
            else:
                sums.append(acc)
                acc += c
        window = tuple(one_minus * v for v in reversed(sums))
    total = tail_sum + sum((ctx.conv(c) for c in f.coeffs), ctx.conv(0))
    # m < kmin: sum_{k=m+1}^{kmin-1} I(k) + total = FI(kmin - 1) - FI(m) + total
    f_in = f.inner.convert(ctx).antiderivative(ctx)
    const = f_in.value(f.kmin - 1, ctx) + total
    shifted = f_in.shift(-1, ctx) if closed else f_in
    out_inner = ExpPoly.constant(p, const).sub(shifted, ctx).scale(one_minus, ctx)
    return RadialShellFunction(p, n, f.kmin, f.kmax, window, out_inner, out_outer)


def _hlp(f: RadialShellFunction, ctx: Arith) -> RadialShellFunction:
    if f.n != 1:
        raise DimensionMismatch(f"the HLP operator acts on Q_p (n = 1), got n = {f.n}")
    return combine(_hardy(f, ctx), _adjoint(f, ctx, closed=False), "add", ctx)


def hardy_apply(f: RadialShellFunction, mode: str | None = None) -> RadialShellFunction:
    """``Hf(x) = |x|_p^-n int_{|t|_p <= |x|_p} f(t) dt``."""
    return run(lambda ctx: _hardy(f, ctx), f.scalars(), mode)


def hardy_adjoint_apply(f: RadialShellFunction, closed: bool = False, mode: str | None = None) -> RadialShellFunction:
    """``H*f(x) = int_{|t|_p > |x|_p} f(t) |t|_p^-n dt``.

    ``closed=True`` integrates over ``|t|_p >= |x|_p`` instead; that variant is
    the exact L^2 adjoint of :func:`hardy_apply` (the open one differs from it
    by ``(1 - p^-n) f``).
    """
    return run(lambda ctx: _adjoint(f, ctx, closed), f.scalars(), mode)


def hlp_apply(f: RadialShellFunction, mode: str | None = None) -> RadialShellFunction:
    """``Tf(x) = int f(y) / max(|x|_p, |y|_p) dy`` on Q_p."""
    return run(lambda ctx: _hlp(f, ctx), f.scalars(), mode)


def _maximal(f: RadialShellFunction, ctx: Arith) -> RadialShellFunction:
    for side, tail in (("inner", f.inner), ("outer", f.outer)):
        if tail.kind not in ("zero", "constant"):
            raise UnsupportedTail(f"{side} tail must be zero or constant for the maximal operator")
    if not f.is_nonnegative():
        raise NegativeInput("maximal_apply expects a nonnegative function; pass |f|")
    p, n = f.p, f.n
    zero = ctx.conv(0)
    c_lo = ctx.conv(f.inner.terms[0].coef) if f.inner.terms else zero
    c_hi = ctx.conv(f.outer.terms[0].coef) if f.outer.terms else zero
    # the mean over B_gamma(0) is the Hardy average at shell gamma
    h = _hardy(f, ctx)
    delta = next((t.coef for t in h.outer.terms if t.s == -n and t.deg == 0), zero)
    if delta > 0:
        sup = h.value(f.kmax + 1, ctx)
        out_outer = h.outer
    else:
        sup = c_hi
        out_outer = ExpPoly.constant(p, c_hi)
    window = []
    for k in range(f.kmax, f.kmin - 1, -1):
        sup = max(sup, h.value(k, ctx))
        window.append(max(ctx.conv(f.coeffs[k - f.kmin]), sup))
    window.reverse()
    out_inner = ExpPoly.constant(p, max(c_lo, sup))
    return RadialShellFunction(p, n, f.kmin, f.kmax, tuple(window), out_inner, out_outer)


def maximal_apply(f: RadialShellFunction, mode: str | None = None) -> RadialShellFunction:
    """``Mf(x) = sup_gamma |B_gamma(x)|^-1 int_{B_gamma(x)} f`` for ``f >= 0``.

    Balls smaller than ``|x|_p`` sit inside the shell of ``x`` and average to
    ``c_m``; larger ones are balls around the origin.
    """
    return run(lambda ctx: _maximal(f, ctx), f.scalars(), mode)


def _commutator(op, b: RadialShellFunction, f: RadialShellFunction, ctx: Arith) -> RadialShellFunction:
    left = combine(b, op(f, ctx), "mul", ctx)
    right = op(combine(b, f, "mul", ctx), ctx)
    return combine(left, right, "sub", ctx)


def commutator_hardy(b, f, mode: str | None = None) -> RadialShellFunction:
    """``b Hf - H(bf)``, composed literally."""
    return run(lambda ctx: _commutator(_hardy, b, f, ctx), b.scalars() + f.scalars(), mode)


def commutator_hardy_adjoint(b, f, closed: bool = False, mode: str | None = None) -> RadialShellFunction:
    op = lambda g, ctx: _adjoint(g, ctx, closed)
    return run(lambda ctx: _commutator(op, b, f, ctx), b.scalars() + f.scalars(), mode)


def commutator_hlp(b, f, mode: str | None = None) -> RadialShellFunction:
    return run(lambda ctx: _commutator(_hlp, b, f, ctx), b.scalars() + f.scalars(), mode)


def inner_product(f: RadialShellFunction, g: RadialShellFunction, mode: str | None = None):
    """``int f g dx = sum_k c_k d_k |S_k|``."""
    return run(lambda ctx: integral(combine(f, g, "mul", ctx), ctx), f.scalars() + g.scalars(), mode)


OPERATORS = {
    "hardy": lambda f, ctx: _hardy(f, ctx),
    "hardy_adjoint": lambda f, ctx: _adjoint(f, ctx, False),
    "hardy_adjoint_closed": lambda f, ctx: _adjoint(f, ctx, True),
    "hlp": lambda f, ctx: _hlp(f, ctx),
    "maximal": lambda f, ctx: _maximal(f, ctx),
}


@dataclass(frozen=True)
class ShellOperatorResult:
    output: RadialShellFunction
    operator: str
    input_window: tuple[int, int]

    @property
    def tags(self) -> dict:
        return {
            "operator": self.operator,
            "input_window": list(self.input_window),
            "inner_tail": self.output.inner.kind,
            "outer_tail": self.output.outer.kind,
        }


def apply_operator(name: str, f: RadialShellFunction, mode: str | None = None) -> ShellOperatorResult:
    try:
        op = OPERATORS[name]
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; choose from {sorted(OPERATORS)}") from None
    out = run(lambda ctx: op(f, ctx), f.scalars(), mode)
    return ShellOperatorResult(out, name, (f.kmin, f.kmax))
