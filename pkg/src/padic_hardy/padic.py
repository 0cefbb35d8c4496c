"""Exact p-adic scalars, vectors, and the ultrametric ball geometry of Q_p^n.

All Haar measures are returned as ``Fraction`` with the normalization
``|B_0(0)| = 1``; no floating point enters this module.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, PrecisionError, PrimeMismatch

DEFAULT_PRECISION = 64
_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def is_prime(p: int) -> bool:
    """Deterministic trial division up to sqrt(p)."""
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def valuation(x, p: int) -> int | None:
    """v_p of a nonzero rational; ``None`` stands for +infinity at zero."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def norm_of(x, p: int) -> Fraction:
    """|x|_p of a rational number."""
    v = valuation(x, p)
    return Fraction(0) if v is None else Fraction(p) ** (-v)


def reduce_mod(a, p: int, t: int) -> Fraction:
    """Canonical representative of ``a + p^t Z_p``.

    The result has a finite base-p expansion with digits only at positions
    below ``t`` and lies in ``[0, p^t)``.
    """
    a = Fraction(a)
    v = valuation(a, p)
    if v is None or v >= t:
        return Fraction(0)
    e = max(0, -v)
    num, den = a.numerator, a.denominator
    den_unit = den // p**e
    modulus = p ** (t + e)
    residue = (num * pow(den_unit, -1, modulus)) % modulus
    return Fraction(residue, p**e)


@dataclass(frozen=True)
class PAdicScalar:
    """``p^valuation * (d0 + d1 p + d2 p^2 + ...)`` truncated to ``len(digits)``.

    The zero element has ``valuation is None`` and no digits. Otherwise
    ``digits[0] != 0`` and ``len(digits)`` is the relative precision N.
    """

    prime: int
    valuation: int | None
    digits: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.prime)
        if self.valuation is None:
            if self.digits:
                raise ValueError("the zero element carries no digits")
            return
        if not self.digits:
            raise ValueError("a nonzero scalar needs at least one digit")
        if self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if any(not 0 <= d < self.prime for d in self.digits):
            raise ValueError(f"digits must lie in [0, {self.prime - 1}]")

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, prime: int) -> PAdicScalar:
        return cls(prime, None, ())

    @classmethod
    def from_rational(cls, x, prime: int, precision: int = DEFAULT_PRECISION) -> PAdicScalar:
        check_prime(prime)
        if precision < 1:
            raise ValueError("precision must be at least 1")
        x = Fraction(x)
        v = valuation(x, prime)
        if v is None:
            return cls.zero(prime)
        unit = x / Fraction(prime) ** v
        modulus = prime**precision
        u = (unit.numerator * pow(unit.denominator, -1, modulus)) % modulus
        return cls(prime, v, _int_digits(u, prime, precision))

    from_int = from_rational

    @classmethod
    def from_digits(cls, prime: int, valuation: int, digits: Sequence[int]) -> PAdicScalar:
        return cls(prime, valuation, tuple(int(d) for d in digits))

    # basic properties -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def absolute_precision(self) -> float | int:
        """Exponent ``a`` such that the scalar is known modulo ``p^a``."""
        if self.is_zero:
            return math.inf
        return self.valuation + len(self.digits)

    def norm(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.prime) ** (-self.valuation)

    def unit_int(self) -> int:
        return sum(d * self.prime**j for j, d in enumerate(self.digits))

    def to_fraction(self) -> Fraction:
        """The rational whose expansion is exactly the stored digits."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.prime) ** self.valuation * self.unit_int()

    # arithmetic -------------------------------------------------------

    def _check(self, other: PAdicScalar) -> None:
        if not isinstance(other, PAdicScalar):
            raise TypeError(f"cannot combine PAdicScalar with {type(other).__name__}")
        if other.prime != self.prime:
            raise PrimeMismatch(f"primes differ: {self.prime} vs {other.prime}")

    def __neg__(self) -> PAdicScalar:
        if self.is_zero:
            return self
        modulus = self.prime**self.precision
        u = (-self.unit_int()) % modulus
        return PAdicScalar(self.prime, self.valuation, _int_digits(u, self.prime, self.precision))

    def __add__(self, other: PAdicScalar) -> PAdicScalar:
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.prime
        v0 = min(self.valuation, other.valuation)
        top = min(self.absolute_precision, other.absolute_precision)
        total = (
            self.unit_int() * p ** (self.valuation - v0)
            + other.unit_int() * p ** (other.valuation - v0)
        ) % p ** (top - v0)
        if total == 0:
            raise PrecisionError(
                f"sum vanishes modulo p^{top}; its valuation needs digits the operands do not carry"
            )
        shift = 0
        while total % p == 0:
            total //= p
            shift += 1
        v = v0 + shift
        return PAdicScalar(p, v, _int_digits(total, p, top - v))

    def __sub__(self, other: PAdicScalar) -> PAdicScalar:
        return self + (-other)

    def __mul__(self, other: PAdicScalar) -> PAdicScalar:
        self._check(other)
        if self.is_zero or other.is_zero:
            return PAdicScalar.zero(self.prime)
        n = min(self.precision, other.precision)
        u = (self.unit_int() * other.unit_int()) % self.prime**n
        return PAdicScalar(self.prime, self.valuation + other.valuation, _int_digits(u, self.prime, n))

    # text forms -------------------------------------------------------

    def text(self) -> str:
        """``"p^g * (d0 + d1*p + d2*p^2 + ...)"`` with zero digits omitted."""
        if self.is_zero:
            return "0"
        p = self.prime
        parts = []
        for j, d in enumerate(self.digits):
            if d == 0:
                continue
            if j == 0:
                parts.append(str(d))
            elif j == 1:
                parts.append(f"{d}*{p}")
            else:
                parts.append(f"{d}*{p}^{j}")
        return f"{p}^{self.valuation} * ({' + '.join(parts)})"

    def compact(self) -> str:
        """``"g|d0d1d2..."``, all N digits, least significant first."""
        if self.is_zero:
            return "inf|"
        if self.prime <= len(_DIGIT_CHARS):
            body = "".join(_DIGIT_CHARS[d] for d in self.digits)
        else:
            body = ".".join(str(d) for d in self.digits)
        return f"{self.valuation}|{body}"

    @classmethod
    def parse(cls, s: str, prime: int) -> PAdicScalar:
        head, _, body = s.strip().partition("|")
        if head == "inf":
            return cls.zero(prime)
        if "." in body or prime > len(_DIGIT_CHARS):
            digits = tuple(int(d) for d in body.split("."))
        else:
            digits = tuple(_DIGIT_CHARS.index(ch) for ch in body)
        return cls(prime, int(head), digits)

    def __str__(self) -> str:
        return self.text()


def _int_digits(u: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        u, d = divmod(u, p)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class PAdicVector:
    coords: tuple[PAdicScalar, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a vector needs at least one coordinate")
        primes = {c.prime for c in self.coords}
        if len(primes) != 1:
            raise PrimeMismatch(f"coordinates use several primes: {sorted(primes)}")

    @classmethod
    def from_rationals(cls, xs: Iterable, prime: int, precision: int = DEFAULT_PRECISION) -> PAdicVector:
        return cls(tuple(PAdicScalar.from_rational(x, prime, precision) for x in xs))

    @property
    def prime(self) -> int:
        return self.coords[0].prime

    @property
    def n(self) -> int:
        return len(self.coords)

    def norm(self) -> Fraction:
        return max(c.norm() for c in self.coords)

    def shell_index(self) -> int | None:
        """``k`` with ``|x|_p = p^k``; ``None`` at the origin."""
        vals = [c.valuation for c in self.coords if not c.is_zero]
        return -min(vals) if vals else None

    def to_fractions(self) -> tuple[Fraction, ...]:
        return tuple(c.to_fraction() for c in self.coords)


def _center_fractions(center, prime: int, t: int) -> tuple[Fraction, ...]:
    if isinstance(center, PAdicVector):
        if center.prime != prime:
            raise PrimeMismatch(f"center uses prime {center.prime}, ball uses {prime}")
        for c in center.coords:
            if c.absolute_precision < t:
                raise PrecisionError(
                    f"center known modulo p^{c.absolute_precision}, ball needs p^{t}"
                )
        return center.to_fractions()
    return tuple(Fraction(c) for c in center)


def ball_measure(p: int, n: int, gamma: int) -> Fraction:
    return Fraction(p) ** (gamma * n)


def sphere_measure(p: int, n: int, gamma: int) -> Fraction:
    return Fraction(p) ** (gamma * n) * (1 - Fraction(p) ** (-n))


@dataclass(frozen=True, init=False)
class Ball:
    """``B_gamma(a) = {x : |x - a|_p <= p^gamma}`` with a canonical center.

    The stored center is the canonical representative of ``a`` modulo
    ``p^{-gamma}``, so two balls are equal as point sets iff they compare equal.
    """

    prime: int
    dim: int
    center: tuple[Fraction, ...]
    log_radius: int

    def __init__(self, prime: int, center, log_radius: int):
        check_prime(prime)
        t = -int(log_radius)
        coords = _center_fractions(center, prime, t)
        if not coords:
            raise ValueError("a ball needs at least one coordinate")
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "dim", len(coords))
        object.__setattr__(self, "center", tuple(reduce_mod(c, prime, t) for c in coords))
        object.__setattr__(self, "log_radius", int(log_radius))

    @classmethod
    def at_origin(cls, prime: int, dim: int, log_radius: int) -> Ball:
        return cls(prime, (0,) * dim, log_radius)

    def measure(self) -> Fraction:
        return ball_measure(self.prime, self.dim, self.log_radius)

    def center_norm(self) -> Fraction:
        return max(norm_of(c, self.prime) for c in self.center)

    def contains_origin(self) -> bool:
        return all(c == 0 for c in self.center)

    def contains(self, x) -> bool:
        xs = x.to_fractions() if isinstance(x, PAdicVector) else tuple(Fraction(c) for c in x)
        if len(xs) != self.dim:
            raise DimensionMismatch(f"point has {len(xs)} coordinates, ball has {self.dim}")
        bound = Fraction(self.prime) ** self.log_radius
        return max(norm_of(a - c, self.prime) for a, c in zip(xs, self.center)) <= bound

    def shell(self) -> int | None:
        """The unique sphere index ``k`` carrying the whole ball, or ``None``
        when the ball contains the origin (it then meets every ``S_k``,
        ``k <= log_radius``)."""
        if self.contains_origin():
            return None
        return -min(valuation(c, self.prime) for c in self.center if c != 0)


@dataclass(frozen=True)
class Sphere:
    """``S_gamma(a) = B_gamma(a) minus B_{gamma-1}(a)``."""

    prime: int
    center: tuple[Fraction, ...]
    log_radius: int

    @classmethod
    def at_origin(cls, prime: int, dim: int, log_radius: int) -> Sphere:
        return cls(check_prime(prime), (Fraction(0),) * dim, log_radius)

    @property
    def dim(self) -> int:
        return len(self.center)

    def measure(self) -> Fraction:
        return sphere_measure(self.prime, self.dim, self.log_radius)


class Relation(enum.Enum):
    DISJOINT = "Disjoint"
    A_INSIDE_B = "AInsideB"
    B_INSIDE_A = "BInsideA"
    EQUAL = "Equal"


def _check_pair(a: Ball, b: Ball) -> None:
    if a.prime != b.prime:
        raise PrimeMismatch(f"primes differ: {a.prime} vs {b.prime}")
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")


def ball_relation(a: Ball, b: Ball) -> Relation:
    """Classify two balls; ultrametric balls never partially overlap."""
    _check_pair(a, b)
    big, small = (a, b) if a.log_radius >= b.log_radius else (b, a)
    if not big.contains(small.center):
        return Relation.DISJOINT
    if a.log_radius == b.log_radius:
        return Relation.EQUAL
    return Relation.B_INSIDE_A if big is a else Relation.A_INSIDE_B


def intersection_measure(a: Ball, b: Ball) -> Fraction:
    rel = ball_relation(a, b)
    if rel is Relation.DISJOINT:
        return Fraction(0)
    if rel is Relation.B_INSIDE_A:
        return b.measure()
    return a.measure()


def ball_sphere_intersection_measure(ball: Ball, sphere) -> Fraction:
    """``|B cap S_k(0)|`` where ``sphere`` is a ``Sphere`` at the origin or an index ``k``."""
    if isinstance(sphere, Sphere):
        if any(c != 0 for c in sphere.center):
            raise ValueError("only spheres centered at the origin are supported")
        if sphere.prime != ball.prime:
            raise PrimeMismatch(f"primes differ: {ball.prime} vs {sphere.prime}")
        if sphere.dim != ball.dim:
            raise DimensionMismatch(f"dimensions differ: {ball.dim} vs {sphere.dim}")
        k = sphere.log_radius
    else:
        k = int(sphere)
    shell = ball.shell()
    if shell is not None:
        return ball.measure() if k == shell else Fraction(0)
    if k <= ball.log_radius:
        return sphere_measure(ball.prime, ball.dim, k)
    return Fraction(0)


def sphere_cover(p: int, n: int, k: int) -> list[Ball]:
    """The ``p^n - 1`` disjoint balls of radius ``p^(k-1)`` tiling ``S_k(0)``."""
    lead = Fraction(p) ** (-k)
    balls = []
    for digits in itertools.product(range(p), repeat=n):
        if any(digits):
            balls.append(Ball(p, tuple(lead * d for d in digits), k - 1))
    return balls
