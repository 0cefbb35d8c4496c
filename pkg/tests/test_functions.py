from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_hardy.errors import DivergentNorm, InvalidEpsilon, InvalidExponent, UnsupportedTail
from padic_hardy.functions import (
    Constant,
    ExtremizerSpec,
    Power,
    RadialShellFunction,
    SBFunction,
    ball_mean,
    cmo_norm,
    cmo_norm_pow,
    herz_norm,
    herz_norm_pow,
    make_extremizer,
    mean_drift_check,
    pointwise_combine,
    radialize,
    random_constant_tail,
    random_radial,
    random_sb,
    to_sb,
    weighted_lq_norm,
    weighted_lq_norm_pow,
)
from padic_hardy._num import to_mpf
from padic_hardy.oracle import naive_cmo_pow, shells
from padic_hardy.padic import Ball

R = RadialShellFunction
seeds = st.integers(0, 2**32 - 1)


def radial(seed, exact=True, **kw):
    rng = np.random.default_rng(seed)
    p = int(rng.choice([2, 3, 5]))
    n = int(rng.integers(1, 3))
    return random_radial(rng, p, n, int(rng.integers(1, 13)), int(rng.integers(-6, 4)), exact=exact, **kw)


# radialization


def test_radialize_examples():
    f = SBFunction(2, 1, ((Ball.at_origin(2, 1, 0), Fraction(1)),))
    g = radialize(f)
    assert all(g(k) == 1 for k in range(-10, 1)) and g(1) == 0 and g(5) == 0
    h = radialize(SBFunction(2, 1, ((Ball(2, (1,), -1), Fraction(1)),)))
    assert h(0) == 1 and all(h(k) == 0 for k in range(-6, 6) if k != 0)


def test_overlapping_pieces_rejected():
    with pytest.raises(ValueError):
        SBFunction(2, 1, ((Ball.at_origin(2, 1, 0), 1), (Ball(2, (1,), -1), 2)))


@given(seeds)
def test_radialize_idempotent_and_contractive(seed):
    rng = np.random.default_rng(seed)
    p, n = int(rng.choice([2, 3])), int(rng.integers(1, 3))
    f = random_sb(rng, p, n, pieces=4, span=2)
    g = radialize(f)
    assert radialize(to_sb(g)).same_function(g)
    for q, alpha in ((2, 0), (3, 1)):
        assert weighted_lq_norm_pow(g, q, alpha) <= f.lq_norm_pow(q, alpha)
    # irrational weight: mp mode, equality cases differ by rounding only
    a, b = to_mpf(weighted_lq_norm_pow(g, 2, Fraction(-1, 2))), to_mpf(f.lq_norm_pow(2, Fraction(-1, 2)))
    assert a <= b * (1 + mpmath.mpf(10) ** -40)


# norms


def test_lq_examples():
    f = make_extremizer(ExtremizerSpec(2, 1, 2, 0, Fraction(1, 2)))
    assert weighted_lq_norm_pow(f, 2, 0) == 1
    assert weighted_lq_norm(f, 2, 0) == 1
    s0 = R.shell_indicator(2, 1, 0)
    assert abs(weighted_lq_norm(s0, 2, 0) - mpmath.sqrt(mpmath.mpf(1) / 2)) < mpmath.mpf(10) ** -45
    assert weighted_lq_norm(R.zero(3, 2), 2, 0) == 0


def test_lq_errors():
    with pytest.raises(InvalidExponent):
        weighted_lq_norm(R.shell_indicator(2, 1, 0), 1, 0)
    with pytest.raises(DivergentNorm):
        weighted_lq_norm_pow(R.constant(2, 1, 1), 2, 0)
    with pytest.raises(DivergentNorm):
        # outer power tail needs q s + alpha + n < 0
        weighted_lq_norm_pow(R(2, 1, 0, -1, (), None, Power(2, Fraction(-1, 2))), 2, 0)


@pytest.mark.parametrize("p,n,q,alpha", [(2, 1, 2, 0), (3, 2, 3, 1), (5, 1, Fraction(3, 2), Fraction(1, 4)), (2, 2, 2, 1)])
@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 8), Fraction(1, 100)])
def test_extremizer_norm_formula(p, n, q, alpha, eps):
    f = make_extremizer(ExtremizerSpec(p, n, q, alpha, eps))
    expected = (1 - mpmath.mpf(p) ** -n) / (1 - mpmath.power(p, -to_mpf(eps * q)))
    got = to_mpf(weighted_lq_norm_pow(f, q, alpha))
    assert abs(got - expected) <= mpmath.mpf(10) ** -40 * expected
    assert all(f(k) == 0 for k in range(-8, 0))


def test_extremizer_examples():
    spec = ExtremizerSpec(2, 1, 2, 0, Fraction(1, 2))
    f = make_extremizer(spec)
    assert f(1) == Fraction(1, 2)  # s = -1/2 - 1/2, 2^s exactly
    with pytest.raises(InvalidEpsilon):
        make_extremizer(ExtremizerSpec(2, 1, 2, 0, 1))
    with pytest.raises(InvalidEpsilon):
        make_extremizer(ExtremizerSpec(2, 1, 2, 0, 0))


def test_herz_examples():
    s0 = R.shell_indicator(3, 2, 0)
    for alpha in (0, 1, Fraction(-1, 2)):
        assert herz_norm_pow(s0, alpha, 2, 2) == Fraction(8, 9)
    assert abs(herz_norm(s0, 1, 2, 3) - mpmath.cbrt(mpmath.mpf(8) / 9)) < mpmath.mpf(10) ** -45
    assert herz_norm(R.zero(2, 1), 1, 2, 2) == 0


@given(seeds, st.sampled_from([(2, 0), (3, 1), (2, -1), (Fraction(5, 2), Fraction(1, 3))]))
def test_herz_lebesgue_coincidence(seed, qa):
    q, alpha = qa
    f = radial(seed, exact=False)
    a = herz_norm(f, Fraction(alpha) / q, q, q, mode="float")
    b = weighted_lq_norm(f, q, alpha, mode="float")
    assert abs(a - b) <= 1e-12 * b


@given(seeds)
def test_lq_matches_brute_force(seed):
    f = radial(seed)
    for q, alpha in ((2, 0), (3, 2), (4, -1)):
        expected = sum(
            abs(c) ** q * Fraction(f.p) ** (k * alpha) * Fraction(f.p) ** (k * f.n) * (1 - Fraction(f.p) ** -f.n)
            for k, c in shells(f).items()
        )
        assert weighted_lq_norm_pow(f, q, alpha) == expected


# CMO and ball means


def test_cmo_examples():
    assert cmo_norm(R.constant(3, 1, Fraction(5, 7)), 2) == 0
    assert cmo_norm(R.ball_indicator(2, 1, 0), 1) == Fraction(1, 2)
    with pytest.raises(UnsupportedTail):
        cmo_norm_pow(make_extremizer(ExtremizerSpec(2, 1, 2, 0, Fraction(1, 2))), 2)


def test_ball_mean_examples():
    assert ball_mean(R.ball_indicator(2, 1, 0), 2) == Fraction(1, 4)
    c = R.constant(5, 2, Fraction(-3, 4))
    assert all(ball_mean(c, g) == Fraction(-3, 4) for g in range(-5, 6))


@given(seeds)
def test_cmo_matches_scan_oracle(seed):
    f = radial(seed)
    for q in (1, 2):
        assert cmo_norm_pow(f, q) == naive_cmo_pow(shells(f), f.p, f.n, q)


@given(seeds)
def test_cmo_monotone_in_exponent(seed):
    rng = np.random.default_rng(seed)
    b = random_constant_tail(rng, int(rng.choice([2, 3, 5])), int(rng.integers(1, 3)), int(rng.integers(1, 12)), exact=True)
    c1, c2, c3 = cmo_norm_pow(b, 1), cmo_norm_pow(b, 2), cmo_norm_pow(b, 3)
    assert c1**2 <= c2
    assert c2**3 <= c3**2
    assert cmo_norm(b, Fraction(3, 2), mode="mp") <= cmo_norm(b, 2, mode="mp") * (1 + mpmath.mpf(10) ** -40)


@given(seeds)
def test_mean_drift_and_chaining(seed):
    rng = np.random.default_rng(seed)
    b = random_constant_tail(rng, int(rng.choice([2, 3, 5])), int(rng.integers(1, 3)), int(rng.integers(1, 10)), exact=True)
    rep = mean_drift_check(b)
    assert rep.checks > 0 and rep.violations == ()


# combination and serialization


def test_combine_examples():
    f = radial(3)
    assert pointwise_combine(f, R.zero(f.p, f.n), "add").same_function(f)
    prod = pointwise_combine(R.shell_indicator(2, 1, 0), R.shell_indicator(2, 1, 1), "mul")
    assert prod.same_function(R.zero(2, 1))
    doubled = pointwise_combine(f, None, "scale", 2)
    assert all(doubled(k) == 2 * f(k) for k in range(f.kmin - 2, f.kmax + 3))
    assert weighted_lq_norm_pow(doubled, 2, 0) == 4 * weighted_lq_norm_pow(f, 2, 0)


def test_power_tail_times_constant_is_power():
    f = R(3, 1, 0, 0, (1,), None, Power(3, Fraction(-1, 3)))
    g = pointwise_combine(f, R.constant(3, 1, 5), "mul")
    assert g.outer.kind == "power" and g(4) == 5 * f(4)


@given(seeds)
def test_round_trips(seed):
    f = radial(seed)
    f = R(f.p, f.n, f.kmin, f.kmax, f.coeffs, Constant(f.p, Fraction(1, 3)), Power(f.p, Fraction(-2, 3), Fraction(7, 5)))
    assert R.loads(f.dumps()) == f
    g = radial(seed, exact=False)
    assert R.loads(g.dumps()) == g
    rng = np.random.default_rng(seed)
    sb = random_sb(rng, f.p, f.n, pieces=3, span=2)
    assert SBFunction.loads(sb.dumps()) == sb
    assert SBFunction.loads(sb.dumps()).dumps() == sb.dumps()


def test_empty_window_is_zero():
    z = R(2, 1, 5, 2, ())
    assert z.kmax == 4 and z.width == 0
    assert weighted_lq_norm_pow(z, 2, 0) == 0 and cmo_norm_pow(z, 2) == 0
