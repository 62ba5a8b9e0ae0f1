"""Exact rational and Gaussian-rational arithmetic with p-adic helpers.

Rationals are :class:`fractions.Fraction` throughout; this module adds the
Gaussian extension ``a + b*i``, p-adic valuations, least nonnegative residues
and componentwise congruence testing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction
INF = math.inf

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DomainError(ValueError):
    """Raised when a value is not p-integral where p-integrality is required."""


class PoleError(ZeroDivisionError):
    """Raised when an evaluation hits a zero factor in a denominator."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


def make_rational(num: int, den: int = 1) -> Fraction:
    if den == 0:
        raise ValueError("zero denominator")
    return Fraction(num, den)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Rational")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed interval [lo, hi]."""
    return [q for q in range(max(lo, 3), hi + 1) if q % 2 and is_prime(q)]


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x, p: int) -> float | int:
    """Return ``nu_p(x)``; ``math.inf`` for zero.

    Accepts ints, Fractions and :class:`GaussianRational` (minimum over the
    two components).
    """
    if isinstance(x, GaussianRational):
        return min(padic_valuation(x.re, p), padic_valuation(x.im, p))
    x = as_rational(x)
    if x == 0:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


@dataclass(frozen=True)
class PadicContext:
    """A prime ``p`` and a precision exponent ``n`` (modulus ``p**n``)."""

    p: int
    n: int = 1

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"precision must be >= 1, got {self.n}")

    @property
    def modulus(self) -> int:
        return self.p**self.n

    def with_precision(self, n: int) -> PadicContext:
        return PadicContext(self.p, n)


@dataclass(frozen=True)
class ResidueClass:
    value: int
    context: PadicContext

    def __post_init__(self):
        if not 0 <= self.value < self.context.modulus:
            raise ValueError(f"{self.value} outside [0, {self.context.modulus})")

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other):
        if isinstance(other, ResidueClass):
            return self.value == other.value and self.context == other.context
        if isinstance(other, int):
            return self.value == other % self.context.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.context))

    def __repr__(self):
        return f"ResidueClass({self.value} mod {self.context.p}^{self.context.n})"


def residue_int(x, modulus: int, p: int) -> int:
    """Least nonnegative residue of a p-integral rational modulo ``modulus``."""
    x = as_rational(x)
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def residue(x, ctx: PadicContext) -> ResidueClass:
    return ResidueClass(residue_int(x, ctx.modulus, ctx.p), ctx)


def congruent(a, b, ctx: PadicContext) -> bool:
    """Componentwise congruence ``a == b (mod p**n)`` of Gaussian rationals."""
    d = GaussianRational.coerce(a) - GaussianRational.coerce(b)
    out = True
    for part in (d.re, d.im):
        v = padic_valuation(part, ctx.p)
        if v < 0:
            raise DomainError(f"difference component {part} is not {ctx.p}-integral")
        out = out and v >= ctx.n
    return out


@dataclass(frozen=True)
class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    @classmethod
    def coerce(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(as_rational(x), Fraction(0))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re - other, self.im)
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            nrm = other.norm()
            if nrm == 0:
                raise ZeroDivisionError("division by zero")
            return self * other.conjugate() / nrm
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / self**-k
        out = GaussianRational(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)})"

    def __str__(self):
        return format_gaussian(self)


I = GaussianRational(0, 1)

_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_GAUSS_RE = re.compile(
    rf"^(?:(?P<re>{_RAT})(?=[+-]))?(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?i$"
)


def parse_rational(text: str) -> Fraction:
    """Parse ``[-]digits[/digits]``."""
    s = text.strip()
    if not _RAT_RE.match(s):
        raise ValueError(f"not a rational: {text!r}")
    num, _, den = s.partition("/")
    return make_rational(int(num), int(den) if den else 1)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``a``, ``a+b*i``, ``a-b*i``, ``a+-b*i`` or ``b*i``."""
    s = text.strip().replace(" ", "").replace("+-", "-")
    if _RAT_RE.match(s):
        return GaussianRational(parse_rational(s))
    m = _GAUSS_RE.match(s)
    if not m:
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = parse_rational(m["re"]) if m["re"] else Fraction(0)
    im_text = m["im"]
    if im_text in ("", "+"):
        im_part = Fraction(1)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = parse_rational(im_text)
    return GaussianRational(re_part, im_part)


def format_rational(x) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_gaussian(z) -> str:
    z = GaussianRational.coerce(z)
    if z.im == 0:
        return format_rational(z.re)
    sign = "-" if z.im < 0 else "+"
    return f"{format_rational(z.re)}{sign}{format_rational(abs(z.im))}*i"
