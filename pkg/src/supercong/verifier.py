"""Registry of the supercongruences and their exact verification.

Every statement is ``LHS == RHS (mod p**target)``.  LHS is always an exact
rational.  RHS is either exact, or ``coefficient * prod Gamma_p(arg)**e``
whose Gamma factors are residues; the difference is then known modulo
``p**(prec + nu_p(coefficient))`` where ``prec`` is the Gamma precision.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .exactnum import INF, is_prime, odd_primes, padic_valuation, residue_int
from .hyper import Kind, SeriesFamily, series_ratios, symmetrized_rhs_sum, weighted_series
from .pgamma import gamma_p_int, harmonic_power_sum, prime_free_inverse_squares

MAX_GAMMA_PRECISION = 12


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INADMISSIBLE = "INADMISSIBLE"


@dataclass(frozen=True)
class ClosedForm:
    """``coefficient * prod(Gamma_p(arg) ** exponent)``."""

    coefficient: Fraction
    gammas: tuple[tuple[Fraction, int], ...] = ()


@dataclass(frozen=True)
class Statement:
    tag: str
    kind: Kind
    target: int
    proven: bool
    admissible: Callable[[int, int], bool]
    lhs: Callable[[int, int], Fraction]
    rhs: Callable[[int, int], "ClosedForm | Fraction"]
    fixed_r: int | None = None
    description: str = ""


@dataclass(frozen=True)
class CaseReport:
    statement: str
    p: int
    r: int
    target_exponent: int
    lhs_minus_rhs_valuation: float | int | None
    verdict: Verdict
    at_least: bool = False
    elapsed_ms: int = 0

    def to_dict(self, timings: bool = True) -> dict:
        v = self.lhs_minus_rhs_valuation
        return {
            "statement": self.statement,
            "p": self.p,
            "r": self.r,
            "target": self.target_exponent,
            "valuation": "inf" if v == INF else v,
            "at_least": self.at_least,
            "verdict": self.verdict.value,
            "elapsed_ms": self.elapsed_ms if timings else 0,
        }


# -- admissibility ------------------------------------------------------------------


def _family_ok(kind: Kind, r: int) -> bool:
    try:
        SeriesFamily(kind, r)
    except ValueError:
        return False
    return True


def _gls_ok(p: int, r: int) -> bool:
    # odd r <= 1 coprime to 5, p >= (5-r)/2, p == 2r (mod 5)
    return _family_ok(Kind.QUINTIC, r) and 2 * p >= 5 - r and (p - 2 * r) % 5 == 0


def _thm1_ok(p: int, r: int) -> bool:
    # odd r <= 1 coprime to 5, p >= (5-3r)/2, p == r (mod 5)
    return _family_ok(Kind.QUINTIC, r) and 2 * p >= 5 - 3 * r and (p - r) % 5 == 0


def _conj_i_ok(p: int, r: int) -> bool:
    # r <= 1 coprime to 3, p >= 5, p == -r (mod 3), p >= 3-r
    return _family_ok(Kind.SEXTIC, r) and p >= 5 and (p + r) % 3 == 0 and p >= 3 - r


def _conj_ii_ok(p: int, r: int) -> bool:
    # r <= 1 coprime to 3, p >= 7, p == r (mod 3), p >= 3-2r
    return _family_ok(Kind.SEXTIC, r) and p >= 7 and (p - r) % 3 == 0 and p >= 3 - 2 * r


def _fixed(r0: int, min_p: int = 5):
    return lambda p, r: r == r0 and p >= min_p


# -- left-hand sides ------------------------------------------------------------------


@lru_cache(maxsize=1024)
def full_series(kind: Kind, r: int, p: int) -> Fraction:
    return weighted_series(SeriesFamily(kind, r), p - 1)


def _lhs_full(kind: Kind):
    return lambda p, r: full_series(kind, r, p)


def _short_length(kind: Kind, p: int, r: int) -> int:
    return (p - r) // kind.value


def _lhs_short(kind: Kind):
    def lhs(p: int, r: int) -> Fraction:
        return weighted_series(SeriesFamily(kind, r), _short_length(kind, p, r))

    return lhs


def _lhs_quartic_harmonic(kind: Kind):
    """``sum_k w_k c_k (sum_{j<k} 1/(r/d+j)^4 - sum_{j<k} 1/(1+j)^4)``."""

    def lhs(p: int, r: int) -> Fraction:
        fam = SeriesFamily(kind, r)
        n = _short_length(kind, p, r)
        base = fam.base
        total = Fraction(0)
        inner = Fraction(0)
        for k, c in enumerate(series_ratios(fam, n)):
            if k:
                inner += 1 / (base + k - 1) ** 4 - Fraction(1, k**4)
            total += fam.weight(k) * c * inner
        return total

    return lhs


# -- right-hand sides -----------------------------------------------------------------


def _zero(p: int, r: int) -> Fraction:
    return Fraction(0)


def _quintic_gammas(r: int) -> tuple[tuple[Fraction, int], ...]:
    half = Fraction(1, 2)
    return (
        (Fraction(r, 5), 4),
        (Fraction(2 * r, 5), -2),
        (half + Fraction(3 * r, 10), -1),
        (half - Fraction(r, 10), -3),
    )


def _sextic_gammas(r: int) -> tuple[tuple[Fraction, int], ...]:
    return ((Fraction(r, 3), 6), (Fraction(2 * r, 3), -3))


def _quintic_rhs(scale: Callable[[int], Fraction]):
    def rhs(p: int, r: int) -> ClosedForm:
        s = symmetrized_rhs_sum(SeriesFamily(Kind.QUINTIC, r))
        return ClosedForm(scale(p) * s, _quintic_gammas(r))

    return rhs


def _sextic_rhs(scale: Callable[[int, int], Fraction]):
    def rhs(p: int, r: int) -> ClosedForm:
        s = symmetrized_rhs_sum(SeriesFamily(Kind.SEXTIC, r))
        return ClosedForm(scale(p, r) * s, _sextic_gammas(r))

    return rhs


def _sextic_r1_p4_rhs(p: int, r: int) -> ClosedForm | Fraction:
    if p % 6 == 1:
        return ClosedForm(Fraction(-p), ((Fraction(1, 3), 9),))
    return Fraction(0)


def _sextic_r1_p6_rhs(p: int, r: int) -> ClosedForm:
    coeff = Fraction(-p) if p % 6 == 1 else Fraction(-10 * p**4, 27)
    return ClosedForm(coeff, ((Fraction(1, 3), 9),))


def _sextic_rm1_rhs(p: int, r: int) -> ClosedForm:
    coeff = Fraction(140 * p**4) if p % 6 == 1 else Fraction(378 * p)
    return ClosedForm(coeff, ((Fraction(2, 3), 9),))


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _harmonic_identity(kind: Kind):
    """Both sides of the mod ``p**2`` harmonic-sum lemmas, as ``(lhs, rhs)``."""

    def sides(p: int, r: int) -> tuple[Fraction, Fraction]:
        d = kind.value
        n = _short_length(kind, p, r)
        shifted = harmonic_power_sum(Fraction(2 * r, d), n, 2)
        plain = harmonic_power_sum(1, n, 2)
        tail = prime_free_inverse_squares(p, residue_int(Fraction(-r, d), p * p, p))
        if kind is Kind.QUINTIC:
            half = Fraction(1, 2)
            extra = prime_free_inverse_squares(p, residue_int(Fraction(r, 10) - half, p * p, p))
            lhs = shifted - plain + 2 * tail - extra
            rhs = harmonic_power_sum(half + Fraction(r, 10), (-r - 1) // 2 + 1, 2)
        else:
            lhs = shifted - plain + 3 * tail
            rhs = harmonic_power_sum(Fraction(r, 3), -r + 1, 2)
        return lhs, rhs

    return sides


def _split(sides_fn, which: int):
    return lambda p, r: sides_fn(p, r)[which]


_L33 = _harmonic_identity(Kind.QUINTIC)
_L43 = _harmonic_identity(Kind.SEXTIC)

Q, S = Kind.QUINTIC, Kind.SEXTIC

STATEMENTS: dict[str, Statement] = {
    s.tag: s
    for s in [
        Statement("GLS_P4", Q, 4, True, _gls_ok, _lhs_full(Q), _zero,
                  description="quintic sum == 0 mod p^4, p == 2r (mod 5)"),
        Statement("WANG_P5", Q, 5, True, _gls_ok, _lhs_full(Q),
                  _quintic_rhs(lambda p: Fraction(12 * p**4, 25)),
                  description="quintic sum == 12p^4/25 * Gamma quotient * S mod p^5"),
        Statement("T1_P5", Q, 5, True, _thm1_ok, _lhs_full(Q),
                  _quintic_rhs(lambda p: Fraction(p)),
                  description="quintic sum == p * Gamma quotient * S mod p^5, p == r (mod 5)"),
        Statement("VH_P4", S, 4, True, _fixed(1), _lhs_full(S), _sextic_r1_p4_rhs, fixed_r=1,
                  description="(6k+1)(1/3)_k^6 sum, mod p^4"),
        Statement("LR_P6", S, 6, True, _fixed(1), _lhs_full(S), _sextic_r1_p6_rhs, fixed_r=1,
                  description="(6k+1)(1/3)_k^6 sum, mod p^6"),
        Statement("LIU_P5", S, 5, True, _fixed(-1), _lhs_full(S), _sextic_rm1_rhs, fixed_r=-1,
                  description="(6k-1)(-1/3)_k^6 sum, mod p^5"),
        Statement("C1I_P5", S, 5, True, _conj_i_ok, _lhs_full(S),
                  _sextic_rhs(lambda p, r: Fraction(_sign(r) * 10 * p**4, 27)),
                  description="sextic sum, p == -r (mod 3), mod p^5"),
        Statement("C1I_P6", S, 6, False, _conj_i_ok, _lhs_full(S),
                  _sextic_rhs(lambda p, r: Fraction(_sign(r) * 10 * p**4, 27)),
                  description="sextic sum, p == -r (mod 3), conjectural mod p^6"),
        Statement("T2_P5", S, 5, True, _conj_ii_ok, _lhs_full(S),
                  _sextic_rhs(lambda p, r: Fraction(_sign(r + 1) * p)),
                  description="sextic sum, p == r (mod 3), mod p^5"),
        Statement("C1II_P6", S, 6, False, _conj_ii_ok, _lhs_full(S),
                  _sextic_rhs(lambda p, r: Fraction(_sign(r + 1) * p)),
                  description="sextic sum, p == r (mod 3), conjectural mod p^6"),
        Statement("L31", Q, 1, True, _thm1_ok, _lhs_short(Q), _zero,
                  description="quintic sum to (p-r)/5 == 0 mod p"),
        Statement("L32", Q, 1, True, _thm1_ok, _lhs_quartic_harmonic(Q), _zero,
                  description="quartic-harmonic weighted quintic sum == 0 mod p"),
        Statement("L33", Q, 2, True, _thm1_ok, _split(_L33, 0), _split(_L33, 1),
                  description="inverse-square harmonic identity mod p^2"),
        Statement("L41", S, 1, True, _conj_ii_ok, _lhs_short(S), _zero,
                  description="sextic sum to (p-r)/3 == 0 mod p"),
        Statement("L42", S, 1, True, _conj_ii_ok, _lhs_quartic_harmonic(S), _zero,
                  description="quartic-harmonic weighted sextic sum == 0 mod p"),
        Statement("L43", S, 2, True, _conj_ii_ok, _split(_L43, 0), _split(_L43, 1),
                  description="inverse-square harmonic identity mod p^2"),
    ]
}

THEOREM_TAGS = ("GLS_P4", "WANG_P5", "T1_P5", "VH_P4", "LR_P6", "LIU_P5",
                "C1I_P5", "C1I_P6", "T2_P5", "C1II_P6")
LEMMA_TAGS = ("L31", "L32", "L33", "L41", "L42", "L43")
PROVEN_TAGS = tuple(t for t, s in STATEMENTS.items() if s.proven)


def get_statement(tag: str) -> Statement:
    try:
        return STATEMENTS[tag]
    except KeyError:
        raise ValueError(f"unknown statement {tag!r}; known: {', '.join(STATEMENTS)}") from None


def is_admissible(statement: Statement, p: int, r: int) -> bool:
    return p >= 3 and is_prime(p) and statement.admissible(p, r)


# -- operations -------------------------------------------------------------------


def enumerate_cases(statement, p_max: int, r_min: int, p_min: int = 3,
                    r_max: int = 1) -> list[tuple[int, int]]:
    st = _coerce(statement)
    if st.fixed_r is not None:
        rs = [st.fixed_r]
    else:
        rs = range(r_min, min(r_max, 1) + 1)
    return sorted(
        (p, r) for p in odd_primes(p_min, p_max) for r in rs if st.admissible(p, r)
    )


def _coerce(statement) -> Statement:
    return statement if isinstance(statement, Statement) else get_statement(statement)


def _gamma_product(gammas, p: int, prec: int) -> int:
    mod = p**prec
    out = 1
    for arg, e in gammas:
        g = gamma_p_int(residue_int(arg, mod, p), p, prec)
        out = out * pow(g, e, mod) % mod
    return out


def _difference(st: Statement, p: int, r: int, gamma_prec: int | None):
    """Return ``(D, known)``: the difference ``LHS - RHS`` as an exact rational
    and the exponent up to which it is exact (``None`` if fully exact)."""
    lhs = st.lhs(p, r)
    rhs = st.rhs(p, r)
    if isinstance(rhs, Fraction) or not rhs.gammas or rhs.coefficient == 0:
        value = rhs if isinstance(rhs, Fraction) else rhs.coefficient
        return lhs - value, None
    coeff = rhs.coefficient
    v = padic_valuation(coeff, p)
    # full target precision even when the coefficient already carries p
    prec = gamma_prec if gamma_prec is not None else st.target
    mod = p**prec
    unit = coeff / Fraction(p) ** v
    w = residue_int(unit, mod, p) * _gamma_product(rhs.gammas, p, prec) % mod
    return lhs - Fraction(p) ** v * w, prec + v


def _measure(st: Statement, p: int, r: int, probe: bool):
    v0 = None
    if probe:
        rhs = st.rhs(p, r)
        if isinstance(rhs, ClosedForm) and rhs.gammas and rhs.coefficient:
            v0 = padic_valuation(rhs.coefficient, p)
    prec = None
    while True:
        diff, known = _difference(st, p, r, prec)
        val = padic_valuation(diff, p)
        if known is None:
            return val, False
        if val < known:
            return val, False
        if not probe:
            return known, True
        cur = known - v0
        if cur >= MAX_GAMMA_PRECISION:
            return known, True
        prec = min(MAX_GAMMA_PRECISION, cur + 2)


def verify_case(statement, p: int, r: int, probe: bool = False) -> CaseReport:
    """Verify one ``(p, r)`` case; ``probe`` escalates Gamma precision to find
    the exact valuation of ``LHS - RHS`` (capped at precision 12)."""
    st = _coerce(statement)
    if not is_admissible(st, p, r):
        return CaseReport(st.tag, p, r, st.target, None, Verdict.INADMISSIBLE)
    t0 = time.perf_counter()
    val, at_least = _measure(st, p, r, probe)
    elapsed = int((time.perf_counter() - t0) * 1000)
    verdict = Verdict.HOLDS if val >= st.target else Verdict.FAILS
    return CaseReport(st.tag, p, r, st.target, val, verdict, at_least, elapsed)


def verify_lemma(statement, p: int, r: int) -> CaseReport:
    st = _coerce(statement)
    if st.tag not in LEMMA_TAGS:
        raise ValueError(f"{st.tag} is not a lemma statement")
    return verify_case(st, p, r)


def probe_valuation(statement, p: int, r: int) -> float | int:
    """Exact ``nu_p(LHS - RHS)``; a lower bound only if Gamma precision 12 is exhausted."""
    st = _coerce(statement)
    if not is_admissible(st, p, r):
        raise ValueError(f"({p}, {r}) is not admissible for {st.tag}")
    return _measure(st, p, r, True)[0]


def _run_one(args) -> CaseReport:
    tag, p, r, probe = args
    return verify_case(tag, p, r, probe)


def run_cases(jobs_list, probe: bool = False, jobs: int = 1) -> list[CaseReport]:
    """Verify ``(tag, p, r)`` triples, optionally in ``jobs`` worker processes."""
    work = [(tag, p, r, probe) for tag, p, r in jobs_list]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, work, chunksize=1))
    else:
        reports = [_run_one(w) for w in work]
    return sorted(reports, key=lambda c: (c.statement, c.p, c.r))


def run_statement(statement, p_max: int, r_min: int, probe: bool = False, *,
                  p_min: int = 3, r_max: int = 1, jobs: int = 1) -> list[CaseReport]:
    st = _coerce(statement)
    cases = enumerate_cases(st, p_max, r_min, p_min=p_min, r_max=r_max)
    return run_cases([(st.tag, p, r) for p, r in cases], probe=probe, jobs=jobs)


def tail_valuation(kind: Kind, p: int, r: int) -> float | int:
    """Min valuation of ``weight * ratio`` over ``(p-r)/d < k <= p-1``."""
    fam = SeriesFamily(kind, r)
    n = _short_length(kind, p, r)
    ratios = series_ratios(fam, p - 1)
    return min(
        (padic_valuation(fam.weight(k) * ratios[k], p) for k in range(n + 1, p)),
        default=INF,
    )
