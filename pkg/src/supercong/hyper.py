"""Pochhammer symbols and truncated hypergeometric series over Q(i)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exactnum import (
    GaussianRational,
    I,
    PoleError,
    as_rational,
    padic_valuation,
    residue_int,
)
from .pgamma import harmonic_power_sum


def _g(x) -> GaussianRational:
    return GaussianRational.coerce(x)


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``.

    Rationals stay rationals; Gaussian input gives a :class:`GaussianRational`.
    """
    if k < 0:
        raise ValueError("k must be natural")
    if isinstance(a, GaussianRational):
        out = GaussianRational(1)
    else:
        a = as_rational(a)
        out = Fraction(1)
    for j in range(k):
        out = out * (a + j)
    return out


@dataclass(frozen=True)
class HyperSpec:
    """Parameters of a truncated ``{r+1}F_r`` sum ``sum_{k=0}^{truncation}``."""

    upper: tuple
    lower: tuple
    argument: GaussianRational = field(default_factory=lambda: GaussianRational(1))
    truncation: int = 0

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(_g(u) for u in self.upper))
        object.__setattr__(self, "lower", tuple(_g(b) for b in self.lower))
        object.__setattr__(self, "argument", _g(self.argument))
        if len(self.upper) != len(self.lower) + 1:
            raise ValueError("upper must have exactly one more entry than lower")
        if self.truncation < 0:
            raise ValueError("truncation must be natural")


def hyper_terms(spec: HyperSpec) -> list[GaussianRational]:
    """Terms ``k = 0..N`` by the ratio recurrence.

    A zero lower factor raises :class:`PoleError` even when the numerator also
    vanishes; terminating series must be truncated by the caller.
    """
    term = GaussianRational(1)
    terms = [term]
    for k in range(spec.truncation):
        num = spec.argument
        for a in spec.upper:
            num = num * (a + k)
        den = GaussianRational(k + 1)
        for b in spec.lower:
            factor = b + k
            if not factor:
                raise PoleError(f"lower parameter {b} hits zero at term {k + 1}", index=k + 1)
            den = den * factor
        term = term * num / den
        terms.append(term)
    return terms


def truncated_hyper(spec: HyperSpec) -> GaussianRational:
    total = GaussianRational(0)
    for t in hyper_terms(spec):
        total = total + t
    return total


def hyper(upper: Sequence, lower: Sequence, truncation: int, z=1) -> GaussianRational:
    return truncated_hyper(HyperSpec(tuple(upper), tuple(lower), _g(z), truncation))


class Kind(enum.Enum):
    QUINTIC = 5
    SEXTIC = 3


@dataclass(frozen=True)
class SeriesFamily:
    """``QUINTIC``: weight ``10k+r`` with fifth powers of ``(r/5)_k/k!``;
    ``SEXTIC``: weight ``6k+r`` with sixth powers of ``(r/3)_k/k!``."""

    kind: Kind
    r: int

    def __post_init__(self):
        if self.r > 1:
            raise ValueError(f"r must be <= 1, got {self.r}")
        if self.kind is Kind.QUINTIC:
            if self.r % 2 == 0 or gcd(self.r, 5) != 1:
                raise ValueError(f"QUINTIC needs odd r coprime to 5, got {self.r}")
        elif gcd(self.r, 3) != 1:
            raise ValueError(f"SEXTIC needs r coprime to 3, got {self.r}")

    @property
    def d(self) -> int:
        return self.kind.value

    @property
    def power(self) -> int:
        return 5 if self.kind is Kind.QUINTIC else 6

    @property
    def base(self) -> Fraction:
        """The Pochhammer parameter ``r/d``."""
        return Fraction(self.r, self.d)

    @property
    def rhs_length(self) -> int:
        """Upper summation index of the finite closed-form sum."""
        return (1 - self.r) // 2 if self.kind is Kind.QUINTIC else 1 - self.r

    def weight(self, k: int) -> int:
        return 2 * self.d * k + self.r


def admissible_families(kind: Kind, r_min: int, r_max: int = 1) -> list[SeriesFamily]:
    out = []
    for r in range(min(r_max, 1), r_min - 1, -1):
        try:
            out.append(SeriesFamily(kind, r))
        except ValueError:
            pass
    return out


def series_ratios(family: SeriesFamily, N: int) -> list[Fraction]:
    """``((r/d)_k / k!) ** power`` for ``k = 0..N``."""
    base = family.base
    ratio = Fraction(1)
    out = [Fraction(1)]
    for k in range(N):
        ratio = ratio * (base + k) / (k + 1)
        out.append(ratio**family.power)
    return out


def weighted_series(family: SeriesFamily, N: int) -> Fraction:
    return sum(
        (family.weight(k) * c for k, c in enumerate(series_ratios(family, N))),
        Fraction(0),
    )


def rhs_terms(family: SeriesFamily) -> list[Fraction]:
    """Summands of the finite closed-form sum.

    QUINTIC: ``((r-1)/2)_k (r/5)_k^3 / ((1)_k (2r/5)_k^2 (1/2 + 3r/10)_k)``.
    SEXTIC: ``(r-1)_k (r/3)_k^3 / ((1)_k (2r/3)_k^3)``.
    """
    r = family.r
    if family.kind is Kind.QUINTIC:
        upper = [Fraction(r - 1, 2)] + [Fraction(r, 5)] * 3
        lower = [Fraction(2 * r, 5)] * 2 + [Fraction(1, 2) + Fraction(3 * r, 10)]
    else:
        upper = [Fraction(r - 1)] + [Fraction(r, 3)] * 3
        lower = [Fraction(2 * r, 3)] * 3
    spec = HyperSpec(tuple(upper), tuple(lower), GaussianRational(1), family.rhs_length)
    return [t.re for t in hyper_terms(spec)]


def symmetrized_rhs_sum(family: SeriesFamily) -> Fraction:
    return sum(rhs_terms(family), Fraction(0))


def verify_pochhammer_product(u, v, p: int, k: int) -> bool:
    """Four-fold product ``(u+vp)_k (u-vp)_k (u+ivp)_k (u-ivp)_k`` against
    ``(u)_k**4 (1 - v**4 p**4 sum_{j<k} 1/(u+j)**4)`` modulo ``p**5``.

    Expanding ``(x^2 - v^2p^2)(x^2 + v^2p^2) = x^4 - v^4p^4`` fixes the sign
    of the correction term.  The product must also be exactly real.
    """
    u, v = as_rational(u), as_rational(v)
    for name, val in (("u", u), ("v", v)):
        if padic_valuation(val, p) < 0:
            raise ValueError(f"{name}={val} is not {p}-integral")
    limit = residue_int(-u, p, p)
    if not 0 <= k <= limit:
        raise ValueError(f"k={k} outside [0, <-u>_p = {limit}]")
    vp = v * p
    product = GaussianRational(1)
    for shift in (vp, -vp, I * vp, -(I * vp)):
        product = product * pochhammer(u + shift, k)
    if product.im != 0:
        return False
    rhs = pochhammer(u, k) ** 4 * (1 - v**4 * p**4 * harmonic_power_sum(u, k, 4))
    return padic_valuation(product.re - rhs, p) >= 5
