from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supercong.exactnum import (
    INF,
    DomainError,
    GaussianRational,
    I,
    PadicContext,
    congruent,
    format_gaussian,
    is_prime,
    make_rational,
    odd_primes,
    padic_valuation,
    parse_gaussian,
    parse_rational,
    residue,
)

PRIMES = [3, 5, 7, 11, 13, 31]
nonzero = st.fractions().filter(lambda x: x != 0)


@pytest.mark.parametrize(
    "num, den, expected",
    [(2, 4, Fraction(1, 2)), (0, 5, Fraction(0)), (-3, -6, Fraction(1, 2))],
)
def test_make_rational(num, den, expected):
    x = make_rational(num, den)
    assert x == expected
    assert x.denominator > 0


def test_make_rational_zero_denominator():
    with pytest.raises(ValueError):
        make_rational(1, 0)


def test_valuation_examples():
    assert padic_valuation(50, 5) == 2
    assert padic_valuation(Fraction(3, 7), 7) == -1
    assert padic_valuation(0, 11) == INF


def test_residue_examples():
    assert residue(Fraction(1, 3), PadicContext(7, 1)).value == 5
    assert residue(Fraction(-1, 5), PadicContext(7, 1)).value == 4
    assert residue(0, PadicContext(13, 4)).value == 0


def test_residue_rejects_non_integral():
    with pytest.raises(DomainError):
        residue(Fraction(1, 7), PadicContext(7, 2))


def test_congruent_examples():
    assert congruent(Fraction(1, 3), 5, PadicContext(7, 1))
    assert congruent(I, I, PadicContext(11, 3))
    assert congruent(1, 50, PadicContext(7, 2))
    assert not congruent(1, 50, PadicContext(7, 3))
    # componentwise: imaginary parts must agree too
    assert not congruent(GaussianRational(1, 1), GaussianRational(1, 2), PadicContext(7, 1))
    with pytest.raises(DomainError):
        congruent(Fraction(1, 7), 0, PadicContext(7, 1))


def test_context_validation():
    with pytest.raises(ValueError):
        PadicContext(9, 1)
    with pytest.raises(ValueError):
        PadicContext(2, 1)
    with pytest.raises(ValueError):
        PadicContext(7, 0)


def test_miller_rabin_against_sieve():
    limit = 5000
    sieve = [True] * (limit + 1)
    sieve[0] = sieve[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    assert [n for n in range(limit + 1) if is_prime(n)] == [n for n in range(limit + 1) if sieve[n]]
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_prime(n)
    assert is_prime(2**61 - 1)
    assert odd_primes(1, 13) == [3, 5, 7, 11, 13]


@given(nonzero, nonzero, st.sampled_from(PRIMES))
def test_valuation_is_additive(x, y, p):
    assert padic_valuation(x * y, p) == padic_valuation(x, p) + padic_valuation(y, p)


def _integral(p):
    return st.builds(
        Fraction,
        st.integers(-10**6, 10**6),
        st.integers(1, 10**4).filter(lambda d: d % p),
    )


@st.composite
def integral_pair(draw):
    p = draw(st.sampled_from(PRIMES))
    n = draw(st.integers(1, 6))
    return PadicContext(p, n), draw(_integral(p)), draw(_integral(p))


@given(integral_pair())
def test_residue_round_trip_and_multiplicative(data):
    ctx, x, y = data
    rx, ry = residue(x, ctx).value, residue(y, ctx).value
    assert 0 <= rx < ctx.modulus
    assert padic_valuation(x - rx, ctx.p) >= ctx.n
    assert residue(x * y, ctx).value == rx * ry % ctx.modulus


@given(integral_pair(), st.integers(-50, 50))
def test_congruence_is_an_equivalence(data, k):
    ctx, x, y = data
    z = x + k * ctx.modulus
    gx, gy, gz = GaussianRational(x, y), GaussianRational(y, x), GaussianRational(z, y)
    assert congruent(gx, gx, ctx)
    assert congruent(gx, gy, ctx) == congruent(gy, gx, ctx)
    # x == z componentwise, so relations with gz mirror those with gx
    assert congruent(gx, gz, ctx)
    assert congruent(gz, gy, ctx) == congruent(gx, gy, ctx)


@given(st.fractions(), st.fractions(), st.fractions(), st.fractions())
def test_gaussian_field_arithmetic(a, b, c, d):
    z, w = GaussianRational(a, b), GaussianRational(c, d)
    assert z * w == w * z
    assert (z + w) - w == z
    if w:
        assert (z / w) * w == z
    assert (z * z.conjugate()).is_real


def test_gaussian_mixed_operands():
    z = Fraction(1, 5) + I * 3
    assert z == GaussianRational(Fraction(1, 5), 3)
    assert 2 - z == GaussianRational(Fraction(9, 5), -3)
    assert I * I == -1
    assert GaussianRational(4) == 4


@pytest.mark.parametrize(
    "text, value",
    [
        ("-3/10", GaussianRational(Fraction(-3, 10))),
        ("1/2+3*i", GaussianRational(Fraction(1, 2), 3)),
        ("1/2-3/4*i", GaussianRational(Fraction(1, 2), Fraction(-3, 4))),
        ("0+-1*i", GaussianRational(0, -1)),
        ("i", I),
        ("-2*i", GaussianRational(0, -2)),
    ],
)
def test_parse_gaussian(text, value):
    assert parse_gaussian(text) == value
    assert parse_gaussian(format_gaussian(value)) == value


@pytest.mark.parametrize("bad", ["", "1/", "abc", "1.5", "1+2", "1/2+"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_gaussian(bad)


def test_parse_rational_format():
    assert parse_rational("-3/10") == Fraction(-3, 10)
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational("3/0")
