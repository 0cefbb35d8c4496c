"""Sharp constants and the numerical evidence around them.

Two independent lower-bound routes are provided: Rayleigh ratios of the
power-law extremizer family, and power iteration on the truncated shell
matrix at ``q = 2``.  Upper bounds are probed with random radial inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import kernels
from ._num import FLOAT, MP, exponent, run, to_float, to_mpf
from .errors import DivergentNorm, InadmissibleParameters, NonconvergedIteration, ZeroInput
from .functions import (
    Constant,
    ExtremizerSpec,
    RadialShellFunction,
    cmo_norm,
    herz_norm_pow,
    make_extremizer,
    power_sum,
    scale,
)
from .operators import _adjoint, _commutator, _hardy, _hlp

OPERATOR_NAMES = ("hardy", "hardy_adjoint", "hlp")


@dataclass(frozen=True)
class SharpConstantQuery:
    p: int
    n: int
    q: Fraction
    alpha: Fraction
    operator: str = "hardy"

    def __post_init__(self):
        object.__setattr__(self, "q", exponent(self.q))
        object.__setattr__(self, "alpha", exponent(self.alpha))
        if self.operator not in OPERATOR_NAMES:
            raise ValueError(f"operator must be one of {OPERATOR_NAMES}")
        if self.operator == "hlp" and self.n != 1:
            raise InadmissibleParameters("the HLP operator lives on Q_p, n must be 1")

    def check(self) -> None:
        if self.operator == "hlp":
            _check_hlp(self.q, self.alpha)
        else:
            _check_hardy(self.n, self.q, self.alpha)

    def constant(self):
        if self.operator == "hlp":
            return hlp_sharp_constant(self.p, self.q, self.alpha)
        return hardy_sharp_constant(self.p, self.n, self.q, self.alpha)


def _check_hardy(n, q, alpha) -> None:
    if not q > 1:
        raise InadmissibleParameters(f"need 1 < q, got q = {q}")
    if not alpha < n * (q - 1):
        raise InadmissibleParameters(f"need alpha < n(q-1) = {n * (q - 1)}, got {alpha}")


def _check_hlp(q, alpha) -> None:
    if not q > 1:
        raise InadmissibleParameters(f"need 1 < q, got q = {q}")
    if not -1 < alpha < q - 1:
        raise InadmissibleParameters(f"need -1 < alpha < q-1 = {q - 1}, got {alpha}")


def hardy_sharp_constant(p: int, n: int, q, alpha):
    """``(1 - p^-n) / (1 - p^(alpha/q - n/q'))``."""
    q, alpha = exponent(q), exponent(alpha)
    _check_hardy(n, q, alpha)
    q_prime = q / (q - 1)
    e = to_mpf(alpha / q - n / q_prime)
    return (1 - mpmath.mpf(p) ** -n) / (1 - mpmath.power(p, e))


def hlp_sharp_constant(p: int, q, alpha):
    """``(1 - 1/p) (1/(1 - p^(a-1)) + p^-a / (1 - p^-a))`` with ``a = (alpha+1)/q``."""
    q, alpha = exponent(q), exponent(alpha)
    _check_hlp(q, alpha)
    a = to_mpf((alpha + 1) / q)
    pa = mpmath.power(p, -a)
    return (1 - mpmath.mpf(1) / p) * (1 / (1 - mpmath.power(p, a - 1)) + pa / (1 - pa))


def adjoint_norm(p: int, n: int, q, alpha, closed: bool = False):
    """Operator norm of the adjoint Hardy operator on ``L^q(|x|^alpha)``.

    With ``d_k = c_k p^(k a)``, ``a = (n+alpha)/q``, the operator is a
    convolution with a positive kernel and its norm is the kernel mass.
    """
    q, alpha = exponent(q), exponent(alpha)
    a = to_mpf((n + alpha) / q)
    if a <= 0:
        raise InadmissibleParameters("the adjoint needs alpha > -n")
    mass = 1 - mpmath.mpf(p) ** -n
    return mass / (1 - mpmath.power(p, -a)) if closed else mass / (mpmath.power(p, a) - 1)


# Rayleigh ratios ----------------------------------------------------------


def _operator(op):
    if callable(op):
        return op
    table = {
        "hardy": _hardy,
        "hardy_adjoint": lambda f, ctx: _adjoint(f, ctx, False),
        "hardy_adjoint_closed": lambda f, ctx: _adjoint(f, ctx, True),
        "hlp": _hlp,
    }
    try:
        return table[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None


@dataclass(frozen=True)
class RayleighResult:
    ratio: object
    error: object
    image_pow: object
    input_pow: object


def rayleigh_ratio(op, f: RadialShellFunction, q, alpha, mode: str | None = None) -> RayleighResult:
    """``||Tf|| / ||f||`` in ``L^q(|x|_p^alpha dx)`` with a certified error bound."""
    q, alpha = exponent(q), exponent(alpha)
    apply = _operator(op)

    def compute(ctx):
        w = alpha + f.n
        den = power_sum(f, q, w, ctx)
        if den.value == 0:
            raise ZeroInput("the input has zero norm")
        num = power_sum(apply(f, ctx), q, w, ctx)
        ratio_pow = num.value / den.value
        ratio = ctx.root(ratio_pow, q)
        rel = num.error / num.value if num.value else 0
        rel = rel + den.error / den.value
        return RayleighResult(ratio, ratio * rel / ctx.conv(q), num.value, den.value)

    values = f.scalars()
    if mode is None and not any(isinstance(v, float) for v in values):
        mode = "mp"
    return run(compute, values, mode)


# extremizer study ---------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceStudy:
    query: SharpConstantQuery
    eps: tuple
    ratios: tuple
    errors: tuple
    target: object
    gaps: tuple
    nondecreasing: bool
    gaps_decreasing: bool
    max_excess: object

    @property
    def final_gap(self):
        return self.gaps[-1]

    def within(self, tol, slack=1e-10) -> bool:
        return self.final_gap < tol and self.max_excess <= slack


def extremizer_spec(query: SharpConstantQuery, eps) -> ExtremizerSpec:
    return ExtremizerSpec(query.p, query.n, query.q, query.alpha, eps)


def extremizer_convergence_study(query: SharpConstantQuery, K: int = 14, schedule=None) -> ConvergenceStudy:
    """Rayleigh ratios of ``f_eps`` along ``eps = p^-k``, ``k = 1..K``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    query.check()
    target = query.constant()
    eps_list = tuple(schedule) if schedule is not None else tuple(Fraction(1, query.p**k) for k in range(1, K + 1))
    ratios, errors = [], []
    for eps in eps_list:
        f = make_extremizer(extremizer_spec(query, eps))
        res = rayleigh_ratio(query.operator, f, query.q, query.alpha, mode="mp")
        ratios.append(res.ratio)
        errors.append(res.error)
    gaps = tuple(target - r for r in ratios)
    return ConvergenceStudy(
        query=query,
        eps=eps_list,
        ratios=tuple(ratios),
        errors=tuple(errors),
        target=target,
        gaps=gaps,
        nondecreasing=all(b >= a for a, b in zip(ratios, ratios[1:])),
        gaps_decreasing=all(b < a for a, b in zip(gaps, gaps[1:])),
        max_excess=max(-g for g in gaps),
    )


# spectral lower bound -----------------------------------------------------


@dataclass(frozen=True)
class SpectralEstimate:
    query: SharpConstantQuery
    window: tuple[int, int]
    iterations: int
    estimate: float
    residual: float
    closed_form: float

    @property
    def gap(self) -> float:
        return self.closed_form - self.estimate


def shell_kernel(query: SharpConstantQuery) -> dict:
    """Toeplitz kernel of the operator after the isometry ``d_k = c_k p^(k a)``, ``a = (n+alpha)/2``."""
    p, n = query.p, query.n
    a = float(query.alpha + n) / 2.0
    mass = 1.0 - float(p) ** -n
    if query.operator == "hardy":
        return dict(lo_w=mass, lo_rho=float(p) ** (a - n), hi_w=0.0, hi_rho=0.0, diag=0.0)
    if query.operator == "hardy_adjoint":
        return dict(lo_w=0.0, lo_rho=0.0, hi_w=mass, hi_rho=float(p) ** -a, diag=0.0)
    return dict(lo_w=mass, lo_rho=float(p) ** (a - 1), hi_w=mass, hi_rho=float(p) ** -a, diag=0.0)


def dense_shell_matrix(query: SharpConstantQuery, lo: int, hi: int) -> np.ndarray:
    """``W^(1/2) A W^(-1/2)`` built entrywise from the shell formulas (test reference)."""
    p, n = query.p, query.n
    ks = np.arange(lo, hi + 1)
    mass = 1.0 - float(p) ** -n
    weight_exp = float(query.alpha + n) / 2.0
    a = np.zeros((len(ks), len(ks)))
    for i, m in enumerate(ks):
        for j, k in enumerate(ks):
            if query.operator == "hardy":
                val = mass * float(p) ** ((k - m) * n) if k <= m else 0.0
            elif query.operator == "hardy_adjoint":
                val = mass if k > m else 0.0
            else:
                val = mass * float(p) ** k / float(p) ** max(m, k)
            a[i, j] = val * float(p) ** ((m - k) * weight_exp)
    return a


def spectral_lower_bound(query: SharpConstantQuery, window=40, iters: int = 200000, tol: float = 1e-9) -> SpectralEstimate:
    """Largest singular value of the truncated shell matrix on ``[lo, hi]``."""
    if query.q != 2:
        raise InadmissibleParameters("the spectral route needs q = 2")
    query.check()
    lo, hi = (-window, window) if isinstance(window, int) else window
    size = hi - lo + 1
    x0 = np.sin(np.pi * np.arange(1, size + 1) / (size + 1))
    sigma, residual, steps = kernels.power_iteration(x0, iters=iters, tol=tol, **shell_kernel(query))
    if residual > tol:
        raise NonconvergedIteration(f"residual {residual:.3e} after {steps} iterations")
    return SpectralEstimate(query, (lo, hi), steps, sigma, residual, float(query.constant()))


# commutator suite -----------------------------------------------------------


COMMUTATOR_OPS = {
    "hardy": _hardy,
    "hardy_adjoint": lambda f, ctx: _adjoint(f, ctx, False),
    "hlp": _hlp,
}


def commutator_admissible(operator: str, n: int, r, alpha) -> None:
    r, alpha = exponent(r), exponent(alpha)
    r_prime = r / (r - 1)
    if operator == "hardy" and not alpha < n / r_prime:
        raise InadmissibleParameters(f"H_b needs alpha < n/r' = {n / r_prime}")
    if operator == "hardy_adjoint" and not alpha > -Fraction(n) / r:
        raise InadmissibleParameters(f"H*_b needs alpha > -n/r = {-Fraction(n) / r}")
    if operator == "hlp":
        if n != 1:
            raise InadmissibleParameters("T_b lives on Q_p, n must be 1")
        if not -1 / r < alpha < 1 / r_prime:
            raise InadmissibleParameters(f"T_b needs {-1 / r} < alpha < {1 / r_prime}")


@dataclass
class CommutatorTrial:
    trial: int
    operator: str
    width: int
    ratio: float
    ratio_doubled: float


@dataclass
class CommutatorSuiteReport:
    params: dict
    seed: int
    trials: list = field(default_factory=list)
    maxima: dict = field(default_factory=dict)
    maxima_doubled: dict = field(default_factory=dict)

    def change(self, op: str) -> float:
        a, b = self.maxima[op], self.maxima_doubled[op]
        return abs(b - a) / a if a else math.inf

    def stable(self, op: str, tol: float = 0.10) -> bool:
        a, b = self.maxima[op], self.maxima_doubled[op]
        return math.isfinite(a) and math.isfinite(b) and a > 0 and self.change(op) < tol

    @property
    def passed(self) -> bool:
        return all(self.stable(op) for op in self.maxima)


POOL = 128


def _suite_functions(rng, p, n, width):
    """Base and doubled windows cut from one coefficient pool.

    The doubled window extends the base one on both sides; coefficients on
    shared shells are identical.
    """
    b_pool = rng.uniform(-1, 1, 2 * POOL + 1)
    f_pool = rng.uniform(-1, 1, 2 * POOL + 1)
    c_lo, c_hi = (float(x) for x in rng.uniform(-1, 1, 2))
    kmin = int(rng.integers(-width // 2 - 4, -width // 2 + 5))
    out = []
    for lo, hi in ((kmin, kmin + width - 1), (kmin - width // 2, kmin + width - 1 + (width - width // 2))):
        coeff = lambda pool: tuple(float(pool[k + POOL]) for k in range(lo, hi + 1))
        b = RadialShellFunction(p, n, lo, hi, coeff(b_pool), Constant(p, c_lo), Constant(p, c_hi))
        f = RadialShellFunction(p, n, lo, hi, coeff(f_pool))
        out.append((b, f))
    return out


def commutator_ratio(op: str, b, f, r, alpha, q1, q2, cmo_exp) -> float:
    """``||[b, T] f||_{K^{alpha,q2}_r} / (||b||_CMO ||f||_{K^{alpha,q1}_r})``."""
    c = cmo_norm(b, cmo_exp, mode="float")
    if c == 0:
        return 0.0
    b = scale(b, 1.0 / c, FLOAT)
    comm = _commutator(COMMUTATOR_OPS[op], b, f, FLOAT)
    top = herz_norm_pow(comm, alpha, q2, r, mode="float")
    bottom = herz_norm_pow(f, alpha, q1, r, mode="float")
    return float(top) ** (1.0 / float(q2)) / float(bottom) ** (1.0 / float(q1))


def commutator_bound_suite(
    p: int,
    n: int,
    r,
    alpha,
    q1,
    q2,
    trials: int = 200,
    seed: int = 0,
    operators=None,
) -> CommutatorSuiteReport:
    """Empirical commutator ratios with random ``b`` and ``f``, at base and doubled windows."""
    r, alpha, q1, q2 = (exponent(x) for x in (r, alpha, q1, q2))
    if not 1 < r:
        raise InadmissibleParameters("need 1 < r")
    if not 0 < q1 <= q2:
        raise InadmissibleParameters("need 0 < q1 <= q2")
    if operators is None:
        operators = ("hardy", "hardy_adjoint", "hlp") if n == 1 else ("hardy", "hardy_adjoint")
    for op in operators:
        commutator_admissible(op, n, r, alpha)
    r_prime = r / (r - 1)
    cmo_exp = max(r, r_prime)
    rng = np.random.default_rng(seed)
    rep = CommutatorSuiteReport(
        params=dict(p=p, n=n, r=str(r), alpha=str(alpha), q1=str(q1), q2=str(q2), trials=trials),
        seed=seed,
    )
    for op in operators:
        rep.maxima[op] = 0.0
        rep.maxima_doubled[op] = 0.0
    for t in range(trials):
        width = int(rng.integers(20, 61))
        (b, f), (b2, f2) = _suite_functions(rng, p, n, width)
        if t == 0:
            # a constant symbol commutes with every operator
            b = RadialShellFunction.constant(p, n, 0.5)
            b2 = b
        for op in operators:
            ratio = commutator_ratio(op, b, f, r, alpha, q1, q2, cmo_exp)
            ratio2 = commutator_ratio(op, b2, f2, r, alpha, q1, q2, cmo_exp)
            rep.trials.append(CommutatorTrial(t, op, width, ratio, ratio2))
            rep.maxima[op] = max(rep.maxima[op], ratio)
            rep.maxima_doubled[op] = max(rep.maxima_doubled[op], ratio2)
    return rep


def random_upper_bound_trials(query: SharpConstantQuery, trials: int, seed: int, slack: float = 1e-10):
    """Rayleigh ratios of random radial inputs against the closed form."""
    query.check()
    target = float(query.constant())
    rng = np.random.default_rng(seed)
    worst, violations = 0.0, 0
    for _ in range(trials):
        width = int(rng.integers(20, 61))
        kmin = int(rng.integers(-width, 1))
        coeffs = tuple(float(x) for x in rng.uniform(-1, 1, width))
        f = RadialShellFunction(query.p, query.n, kmin, kmin + width - 1, coeffs)
        ratio = float(rayleigh_ratio(query.operator, f, query.q, query.alpha, mode="float").ratio)
        worst = max(worst, ratio)
        if ratio > target + slack:
            violations += 1
    return worst, violations, target
