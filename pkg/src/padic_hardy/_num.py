"""Scalar plumbing shared by the exact, extended-precision and float paths.

Three scalar kinds flow through the package:

* ``int`` / ``Fraction`` -- exact rational mode,
* ``mpmath.mpf`` -- extended precision (``DEFAULT_DIGITS`` significant digits),
* ``float`` -- the fast path used by large randomized suites.

Powers ``p**e`` stay exact whenever ``e`` is an integer and no float is
involved; otherwise they are promoted to ``mpf`` (or ``float`` in fast mode).
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational

import mpmath

from .errors import PrecisionError

DEFAULT_DIGITS = 50

mpmath.mp.dps = max(mpmath.mp.dps, int(os.environ.get("PADIC_HARDY_DIGITS", DEFAULT_DIGITS)))


@contextmanager
def precision(digits: int):
    """Temporarily run mpmath at ``digits`` significant decimal digits."""
    with mpmath.workdps(digits):
        yield


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def is_float(x) -> bool:
    return isinstance(x, float)


def exponent(x):
    """Normalize an exponent (q, alpha, epsilon, tail exponents).

    Rational inputs are kept as exact ``Fraction`` so that resonances such as
    ``s + n == 0`` are detected exactly; floats are converted exactly too.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite exponent {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, mpmath.mpf):
        return x
    raise TypeError(f"unsupported exponent type {type(x).__name__}")


def to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_float(x) -> float:
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)


def is_integral(e) -> bool:
    return isinstance(e, Fraction) and e.denominator == 1


def ppow(p: int, e, fast: bool = False):
    """``p**e`` exactly when possible.

    Integer ``e`` gives a ``Fraction``; anything else an ``mpf``. With
    ``fast=True`` the result is a plain float.
    """
    if fast:
        return float(p) ** to_float(e)
    if is_integral(e):
        return Fraction(p) ** int(e)
    if isinstance(e, int):
        return Fraction(p) ** e
    return mpmath.power(p, to_mpf(e))


def real_pow(x, q, fast: bool = False):
    """``x**q`` for ``x >= 0``; exact for integer ``q`` and rational ``x``."""
    if fast:
        return to_float(x) ** to_float(q)
    qe = q if isinstance(q, mpmath.mpf) else exponent(q)
    if is_exact(x) and is_integral(qe):
        return Fraction(x) ** int(qe)
    if x == 0:
        return mpmath.mpf(0)
    return mpmath.power(to_mpf(x), to_mpf(qe))


def root(x, q, fast: bool = False):
    """The ``q``-th root of a nonnegative power sum."""
    if q == 1:
        return x
    if fast:
        return to_float(x) ** (1.0 / to_float(q))
    if x == 0:
        return mpmath.mpf(0)
    return mpmath.power(to_mpf(x), 1 / to_mpf(q))


def as_real(x, fast: bool = False):
    return to_float(x) if fast else to_mpf(x)


def log_p(p: int, x) -> float:
    return math.log(to_float(x)) / math.log(p) if to_float(x) > 0 else -math.inf


def fmt_scalar(x) -> str:
    """Serialize a scalar losslessly: ``"n/d"`` for exact, ``"r:<man>,<exp>"``
    for mpf, ``"f:<repr>"`` for float."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return "f:" + repr(x)
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        if not man:
            return "r:0,0"
        return f"r:{-int(man) if sign else int(man)},{int(exp)}"
    raise TypeError(f"unsupported scalar {type(x).__name__}")


def parse_scalar(s: str):
    s = s.strip()
    if s.startswith("f:"):
        return float(s[2:])
    if s.startswith("r:"):
        man, exp = s[2:].split(",")
        return mpmath.ldexp(mpmath.mpf(int(man)), int(exp))
    return Fraction(s)


class NeedsReal(Exception):
    """Raised inside exact arithmetic when an irrational quantity appears."""


class Arith:
    """Arithmetic context for one computation.

    ``kind`` is ``"exact"`` (Fraction), ``"mp"`` (mpmath) or ``"float"``.
    Every scalar entering a computation goes through :meth:`conv`, so the
    three kinds never mix.
    """

    __slots__ = ("kind",)

    def __init__(self, kind: str):
        if kind not in ("exact", "mp", "float"):
            raise ValueError(f"unknown arithmetic kind {kind!r}")
        self.kind = kind

    def __repr__(self) -> str:
        return f"Arith({self.kind!r})"

    @property
    def fast(self) -> bool:
        return self.kind == "float"

    def conv(self, x):
        if self.kind == "exact":
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                return Fraction(x)
            raise NeedsReal(x)
        if self.kind == "mp":
            return to_mpf(x)
        return to_float(x)

    def pw(self, p: int, e):
        """``p**e`` for an exponent ``e`` (Fraction or int)."""
        if self.kind == "exact":
            if isinstance(e, int) or is_integral(e):
                return Fraction(p) ** int(e)
            raise NeedsReal(e)
        if self.kind == "mp":
            if isinstance(e, int) or is_integral(e):
                return mpmath.mpf(p) ** int(e)
            return mpmath.power(p, to_mpf(e))
        return float(p) ** to_float(e)

    def power(self, x, q):
        """``x**q`` for ``x >= 0``."""
        if self.kind == "exact":
            if isinstance(q, int) or is_integral(q):
                return x ** int(q)
            if x == 0:
                return Fraction(0)
            raise NeedsReal(q)
        if x == 0:
            return self.conv(0)
        if self.kind == "mp":
            return mpmath.power(x, to_mpf(q))
        return x ** to_float(q)

    def root(self, x, q):
        if q == 1:
            return x
        if x == 0:
            return self.conv(0)
        if self.kind == "exact":
            raise NeedsReal(q)
        if self.kind == "mp":
            return mpmath.power(x, 1 / to_mpf(q))
        return x ** (1.0 / to_float(q))


EXACT = Arith("exact")
MP = Arith("mp")
FLOAT = Arith("float")


def arith_for(values, mode: str | None = None) -> Arith | None:
    """Pick the context for a computation over ``values``.

    Returns ``None`` for automatic exact-then-mp selection.
    """
    if mode is not None:
        return {"exact": EXACT, "mp": MP, "float": FLOAT}[mode]
    if any(isinstance(v, float) for v in values):
        return FLOAT
    if any(isinstance(v, mpmath.mpf) for v in values):
        return MP
    return None


def run(fn, values=(), mode: str | None = None):
    """Call ``fn(arith)`` with the best context for ``values``.

    Automatic selection tries exact arithmetic first and falls back to mpmath
    as soon as an irrational quantity shows up.
    """
    ctx = arith_for(values, mode)
    if ctx is not None:
        try:
            return fn(ctx)
        except NeedsReal as exc:
            raise PrecisionError(f"exact arithmetic cannot represent {exc.args[0]!r}") from None
    try:
        return fn(EXACT)
    except NeedsReal:
        return fn(MP)
