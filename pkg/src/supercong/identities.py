"""Exact checks of terminating hypergeometric transformations.

Each ``check_*`` evaluates both sides of an identity at concrete rational
parameters and compares them exactly.  :func:`run_identity_suite` drives the
checks from a seeded sampler.
"""

from __future__ import annotations

import enum
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .exactnum import GaussianRational, I, PoleError, as_rational, format_rational
from .hyper import (
    Kind,
    SeriesFamily,
    admissible_families,
    hyper,
    hyper_terms,
    HyperSpec,
    pochhammer,
    rhs_terms,
)
from .pgamma import harmonic_power_sum


class IdentityId(str, enum.Enum):
    WHIPPLE_4F3 = "WHIPPLE_4F3"
    LIU_7F6 = "LIU_7F6"
    NEW_7F6 = "NEW_7F6"
    A1_REFLECT = "A1_REFLECT"
    SYM_QUINTIC = "SYM_QUINTIC"
    SYM_SEXTIC = "SYM_SEXTIC"


class SamplerExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    samples: int = 50
    max_n: int = 6
    max_m: int = 6
    num_bound: int = 6
    den_bound: int = 6
    r_min: int = -9

    def __post_init__(self):
        if self.samples < 1 or self.num_bound < 1 or self.den_bound < 1:
            raise ValueError("samples and bounds must be >= 1")


@dataclass
class SuiteReport:
    identity: str
    passed: int = 0
    failed: list = field(default_factory=list)
    skipped_poles: int = 0

    @property
    def ok(self) -> bool:
        return not self.failed and self.passed > 0

    def to_dict(self) -> dict:
        return asdict(self)


def _ratio(num, den):
    num, den = GaussianRational.coerce(num), GaussianRational.coerce(den)
    if not den:
        raise PoleError("zero factor in a Pochhammer quotient")
    return num / den


def _pochhammer_quotient(upper, lower, n: int):
    num = GaussianRational(1)
    den = GaussianRational(1)
    for u in upper:
        num = num * pochhammer(GaussianRational.coerce(u), n)
    for b in lower:
        den = den * pochhammer(GaussianRational.coerce(b), n)
    return _ratio(num, den)


# -- Whipple 4F3 ---------------------------------------------------------------------


def whipple_sides(n: int, a, b, c, d, e, f):
    a, b, c, d, e, f = map(as_rational, (a, b, c, d, e, f))
    if a + b + c - n + 1 != d + e + f:
        raise ValueError("balance condition a+b+c-n+1 = d+e+f violated")
    lhs = hyper([-n, a, b, c], [d, e, f], n)
    pref = _pochhammer_quotient([e - a, f - a], [e, f], n)
    rhs = pref * hyper([-n, a, d - b, d - c], [d, a + 1 - n - e, a + 1 - n - f], n)
    return lhs, rhs


def check_whipple(n: int, a, b, c, d, e, f) -> bool:
    lhs, rhs = whipple_sides(n, a, b, c, d, e, f)
    return lhs == rhs


# -- 7F6 transformations -------------------------------------------------------------


def very_well_poised_7f6(n: int, m: int, t, a, b, c) -> GaussianRational:
    """The common left side, with ``(1+t/2)_k/(t/2)_k`` written as ``(t+2k)/t``."""
    t, a, b, c = map(as_rational, (t, a, b, c))
    if t == 0:
        raise PoleError("t = 0")
    upper = [t, -n, t - a, t - b, t - c, 1 - t - m + n + a + b + c]
    lower = [1 + t + n, 1 + a, 1 + b, 1 + c, 2 * t + m - n - a - b - c]
    terms = hyper_terms(HyperSpec(tuple(upper), tuple(lower), GaussianRational(1), n))
    total = GaussianRational(0)
    for k, term in enumerate(terms):
        total = total + term * ((t + 2 * k) / t)
    return total


def liu_sides(n: int, m: int, t, a, b, c):
    t, a, b, c = map(as_rational, (t, a, b, c))
    lhs = very_well_poised_7f6(n, m, t, a, b, c)
    s = a + b + c
    series = hyper(
        [-m, -n, s + 1 - m - 2 * t, s + 1 + n - m - t],
        [a + b + 1 - m - t, a + c + 1 - m - t, b + c + 1 - m - t],
        min(m, n),
    )
    pref = _pochhammer_quotient(
        [1 + t, a + b + 1 - m - t, a + c + 1 - m - t, b + c + 1 - m - t],
        [1 + a, 1 + b, 1 + c, s + 1 - m - 2 * t],
        n,
    )
    return lhs, series * pref


def check_liu_7f6(n: int, m: int, t, a, b, c) -> bool:
    lhs, rhs = liu_sides(n, m, t, a, b, c)
    return lhs == rhs


def new_7f6_sides(n: int, m: int, t, a, b, c):
    t, a, b, c = map(as_rational, (t, a, b, c))
    lhs = very_well_poised_7f6(n, m, t, a, b, c)
    s = a + b + c
    series = hyper(
        [-m, -n, t - b, -n - b],
        [a + c + 1 - m - t, t - n - a - b, t - n - b - c],
        min(m, n),
    )
    pref = _pochhammer_quotient(
        [1 + t, a + b + 1 - t, a + c + 1 - m - t, b + c + 1 - t],
        [1 + a, 1 + b, 1 + c, s + 1 - m - 2 * t],
        n,
    )
    return lhs, series * pref


def check_new_7f6(n: int, m: int, t, a, b, c) -> bool:
    lhs, rhs = new_7f6_sides(n, m, t, a, b, c)
    return lhs == rhs


# -- x-parametrised Whipple instance -------------------------------------------------


def a1_sides(r: int, x):
    SeriesFamily(Kind.QUINTIC, r)
    x = as_rational(x)
    n = (1 - r) // 2
    half = Fraction(1, 2)
    t5, t25, d = Fraction(r, 5), Fraction(2 * r, 5), half + Fraction(3 * r, 10)
    ix = I * x
    lhs = hyper([Fraction(r - 1, 2), t5, t5 - ix, t5 + ix], [d, t25 - x, t25 + x], n)
    pref = _pochhammer_quotient([t5 - x, t5 + x], [t25 - x, t25 + x], n)
    mid = half + Fraction(r, 10)
    rhs = pref * hyper([Fraction(r - 1, 2), t5, mid + ix, mid - ix], [d, d + x, d - x], n)
    return lhs, rhs


def check_a1_reflection(r: int, x) -> bool:
    lhs, rhs = a1_sides(r, x)
    return lhs.is_real and rhs.is_real and lhs == rhs


# -- finite symmetrisation ---------------------------------------------------------


def symmetrization_sides(family: SeriesFamily) -> tuple[Fraction, Fraction]:
    """``sum_k T_k (H_k(alpha) + H_k(beta))`` and ``sum_k T_k * C`` where
    ``H_k(x) = sum_{j<k} 1/(x+j)**2``."""
    r = family.r
    terms = rhs_terms(family)
    if family.kind is Kind.QUINTIC:
        alpha, beta = Fraction(r, 5), Fraction(2 * r, 5)
        const = harmonic_power_sum(Fraction(1, 2) + Fraction(r, 10), (-r - 1) // 2 + 1, 2)
    else:
        alpha, beta = Fraction(r, 3), Fraction(2 * r, 3)
        const = harmonic_power_sum(alpha, -r + 1, 2)
    lhs = Fraction(0)
    inner = Fraction(0)
    for k, tk in enumerate(terms):
        if k:
            inner += 1 / (alpha + k - 1) ** 2 + 1 / (beta + k - 1) ** 2
        lhs += tk * inner
    return lhs, sum(terms, Fraction(0)) * const


def check_symmetrization(family: SeriesFamily) -> bool:
    lhs, rhs = symmetrization_sides(family)
    return lhs == rhs


# -- sampling ------------------------------------------------------------------------

A1_X_GRID = (Fraction(1, 2), Fraction(1), Fraction(2))


def _rat(rng: random.Random, cfg: SampleConfig) -> Fraction:
    return Fraction(rng.randint(-cfg.num_bound, cfg.num_bound), rng.randint(1, cfg.den_bound))


def _draw(identity: IdentityId, rng: random.Random, cfg: SampleConfig) -> dict:
    if identity is IdentityId.WHIPPLE_4F3:
        n = rng.randint(0, cfg.max_n)
        a, b, c, d, e = (_rat(rng, cfg) for _ in range(5))
        return dict(n=n, a=a, b=b, c=c, d=d, e=e, f=a + b + c - n + 1 - d - e)
    n, m = rng.randint(0, cfg.max_n), rng.randint(0, cfg.max_m)
    t, a, b, c = (_rat(rng, cfg) for _ in range(4))
    return dict(n=n, m=m, t=t, a=a, b=b, c=c)


_CHECKS = {
    IdentityId.WHIPPLE_4F3: check_whipple,
    IdentityId.LIU_7F6: check_liu_7f6,
    IdentityId.NEW_7F6: check_new_7f6,
}


def _fmt_params(params: dict) -> dict:
    return {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in params.items()}


def _grid(identity: IdentityId, cfg: SampleConfig) -> list[dict]:
    if identity is IdentityId.A1_REFLECT:
        rng = random.Random(cfg.seed)
        extra = [_rat(rng, cfg) for _ in range(cfg.samples)]
        xs = list(A1_X_GRID) + [x for x in extra if x not in A1_X_GRID]
        return [
            dict(r=fam.r, x=x)
            for fam in admissible_families(Kind.QUINTIC, cfg.r_min)
            for x in xs
        ]
    kind = Kind.QUINTIC if identity is IdentityId.SYM_QUINTIC else Kind.SEXTIC
    return [dict(r=fam.r) for fam in admissible_families(kind, cfg.r_min)]


def _run_grid_check(identity: IdentityId, params: dict) -> bool:
    if identity is IdentityId.A1_REFLECT:
        return check_a1_reflection(params["r"], params["x"])
    kind = Kind.QUINTIC if identity is IdentityId.SYM_QUINTIC else Kind.SEXTIC
    return check_symmetrization(SeriesFamily(kind, params["r"]))


def run_identity_suite(identity, cfg: SampleConfig | None = None) -> SuiteReport:
    """Run one identity over seeded samples (or its fixed grid for the
    reflection and symmetrisation identities)."""
    identity = IdentityId(identity)
    cfg = cfg or SampleConfig()
    report = SuiteReport(identity.value)
    if identity in _CHECKS:
        rng = random.Random(cfg.seed)
        check = _CHECKS[identity]
        index = 0
        attempts = 0
        while index < cfg.samples:
            attempts += 1
            if attempts > 100 * cfg.samples:
                raise SamplerExhausted(f"{identity.value}: too many pole rejections")
            params = _draw(identity, rng, cfg)
            try:
                ok = check(**params)
            except PoleError:
                report.skipped_poles += 1
                continue
            if ok:
                report.passed += 1
            else:
                report.failed.append({"index": index, **_fmt_params(params)})
            index += 1
        return report
    for index, params in enumerate(_grid(identity, cfg)):
        try:
            ok = _run_grid_check(identity, params)
        except PoleError:
            report.skipped_poles += 1
            continue
        if ok:
            report.passed += 1
        else:
            report.failed.append({"index": index, **_fmt_params(params)})
    return report
