"""Morita's p-adic Gamma function at finite precision.

Two independent evaluation routes are provided:

* :class:`GammaTable` sweeps the defining product once over ``[0, p**n)``
  and can persist the result to a binary cache file.  It is only built when
  ``p**n`` is small (see ``TABLE_LIMIT``).
* :func:`gamma_p_nat` evaluates a single value through products of the
  length-``p`` block polynomial ``F(z) = prod_{t=1}^{p-1} (p*z + t)``.
  Its ``z**k`` coefficient is divisible by ``p**k``, so modulo ``p**n`` only
  degrees below ``n`` matter and a product over ``q`` consecutive blocks
  costs ``O(n**2 log q)``.
"""

from __future__ import annotations

import os
import struct
import tempfile
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path

from .exactnum import (
    DomainError,
    PadicContext,
    PoleError,
    ResidueClass,
    as_rational,
    is_prime,
    padic_valuation,
    residue_int,
)

MAGIC = b"PGAMMA01"
TABLE_LIMIT = 1 << 18

__all__ = [
    "GammaTable",
    "gamma_p_nat",
    "gamma_p",
    "gamma_p_int",
    "verify_reflection",
    "verify_shift",
    "harmonic_power_sum",
    "verify_gamma_product",
    "unit_inverse_square_sum",
]


# -- block-product evaluation -------------------------------------------------


def _poly_mul(a: list[int], b: list[int], n: int, mod: int) -> list[int]:
    out = [0] * n
    for i, ai in enumerate(a):
        if ai:
            for j in range(n - i):
                out[i + j] += ai * b[j]
    return [c % mod for c in out]


def _poly_shift(a: list[int], s: int, n: int, mod: int) -> list[int]:
    """Coefficients of ``a(z + s)`` truncated to degree ``< n``."""
    out = [0] * n
    for k, ak in enumerate(a):
        if ak:
            spow = 1
            for i in range(k, -1, -1):
                out[i] += ak * comb(k, i) * spow
                spow *= s
    return [c % mod for c in out]


@lru_cache(maxsize=None)
def _block_poly(p: int, n: int) -> tuple[int, ...]:
    mod = p**n
    poly = [1] + [0] * (n - 1)
    for t in range(1, p):
        # multiply by (t + p z)
        nxt = [0] * n
        for i, c in enumerate(poly):
            nxt[i] += c * t
            if i + 1 < n:
                nxt[i + 1] += c * p
        poly = [c % mod for c in nxt]
    return tuple(poly)


def _block_product(q: int, p: int, n: int) -> int:
    """``prod_{j<q} prod_{t=1}^{p-1} (j*p + t) mod p**n``."""
    mod = p**n
    if q == 0:
        return 1 % mod
    base = list(_block_poly(p, n))
    acc = base  # acc(z) = prod_{j<length} F(z + j)
    length = 1
    for bit in bin(q)[3:]:
        acc = _poly_mul(acc, _poly_shift(acc, length, n, mod), n, mod)
        length *= 2
        if bit == "1":
            acc = _poly_mul(acc, _poly_shift(base, length, n, mod), n, mod)
            length += 1
    return acc[0] % mod


@lru_cache(maxsize=65536)
def gamma_p_int(m: int, p: int, n: int) -> int:
    """``Gamma_p(m) mod p**n`` for an integer ``0 <= m < p**n``."""
    mod = p**n
    if not 0 <= m < mod:
        raise ValueError(f"argument {m} outside [0, {p}^{n}); reduce it first")
    if m == 0:
        return 1 % mod
    q, s = divmod(m - 1, p)
    prod = _block_product(q, p, n)
    base = q * p
    for t in range(1, s + 1):
        prod = prod * (base + t) % mod
    return (-prod if m % 2 else prod) % mod


# -- sweep table ----------------------------------------------------------------


class GammaTable:
    """All values ``Gamma_p(m) mod p**n`` for ``0 <= m < p**n``.

    Parameters
    ----------
    context : PadicContext
    cache_dir : path, optional
        Directory holding ``gamma_p<p>_n<n>.bin``.  A missing or malformed
        file is silently rebuilt.
    """

    _locks: dict[tuple[int, int], threading.Lock] = {}
    _locks_guard = threading.Lock()

    def __init__(self, context: PadicContext, cache_dir: str | os.PathLike | None = None):
        if context.modulus > TABLE_LIMIT:
            raise ValueError(
                f"table for p={context.p}, n={context.n} has {context.modulus} "
                f"entries (limit {TABLE_LIMIT}); use gamma_p instead"
            )
        self.context = context
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._values: list[int] | None = None

    @property
    def path(self) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"gamma_p{self.context.p}_n{self.context.n}.bin"

    @property
    def values(self) -> list[int]:
        if self._values is None:
            key = (self.context.p, self.context.n)
            with GammaTable._locks_guard:
                lock = GammaTable._locks.setdefault(key, threading.Lock())
            with lock:
                if self._values is None:
                    self._values = self._load() or self._build_and_store()
        return self._values

    def __len__(self):
        return self.context.modulus

    def __getitem__(self, m: int) -> int:
        return self.values[m]

    def _build(self) -> list[int]:
        p, mod = self.context.p, self.context.modulus
        vals = [0] * mod
        vals[0] = 1 % mod
        prod = 1
        for m in range(1, mod):
            # prod = prod_{1 <= k < m, p !| k} k
            vals[m] = -prod % mod if m % 2 else prod % mod
            if m % p:
                prod = prod * m % mod
        return vals

    def _build_and_store(self) -> list[int]:
        vals = self._build()
        if self.path is not None:
            try:
                write_table(self.path, self.context.p, self.context.n, vals)
            except OSError:
                pass
        return vals

    def _load(self) -> list[int] | None:
        if self.path is None or not self.path.exists():
            return None
        try:
            return read_table(self.path, self.context.p, self.context.n)
        except (OSError, ValueError):
            return None


def write_table(path: Path, p: int, n: int, values: list[int]) -> None:
    """Write a table atomically: magic, ``p`` and ``n`` as little-endian u64,
    then per entry a big-endian u16 byte length and big-endian magnitude."""
    path.parent.mkdir(parents=True, exist_ok=True)
    chunks = [MAGIC, struct.pack("<QQ", p, n)]
    for v in values:
        raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
        chunks.append(struct.pack(">H", len(raw)))
        chunks.append(raw)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(b"".join(chunks))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table(path: Path, p: int, n: int) -> list[int]:
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise ValueError("bad magic")
    if len(data) < 24 or struct.unpack_from("<QQ", data, 8) != (p, n):
        raise ValueError("header mismatch")
    count, mod = p**n, p**n
    out = []
    pos = 24
    for _ in range(count):
        if pos + 2 > len(data):
            raise ValueError("truncated")
        (ln,) = struct.unpack_from(">H", data, pos)
        pos += 2
        if pos + ln > len(data):
            raise ValueError("truncated")
        v = int.from_bytes(data[pos : pos + ln], "big")
        if v >= mod:
            raise ValueError("entry out of range")
        out.append(v)
        pos += ln
    if pos != len(data):
        raise ValueError("trailing bytes")
    return out


# -- public operations ---------------------------------------------------------


def gamma_p_nat(m: int, ctx: PadicContext) -> ResidueClass:
    """``Gamma_p(m) mod p**n`` for a natural number ``m``."""
    if m < 0:
        raise ValueError(f"natural argument expected, got {m}")
    return ResidueClass(gamma_p_int(m % ctx.modulus, ctx.p, ctx.n), ctx)


def gamma_p(x, ctx: PadicContext) -> ResidueClass:
    """``Gamma_p(x) mod p**n`` for p-integral rational ``x``.

    By continuity the value only depends on ``x mod p**n``.
    """
    m = residue_int(x, ctx.modulus, ctx.p)
    return gamma_p_nat(m, ctx)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def verify_reflection(x, ctx: PadicContext) -> bool:
    x = as_rational(x)
    lhs = gamma_p(x, ctx).value * gamma_p(1 - x, ctx).value
    exponent = residue_int(-x, ctx.p, ctx.p) - 1
    return (lhs - _sign(exponent)) % ctx.modulus == 0


def verify_shift(x, ctx: PadicContext) -> bool:
    x = as_rational(x)
    g0 = gamma_p(x, ctx).value
    g1 = gamma_p(x + 1, ctx).value
    if padic_valuation(x, ctx.p) == 0:
        expected = -residue_int(x, ctx.modulus, ctx.p) * g0
    else:
        expected = -g0
    return (g1 - expected) % ctx.modulus == 0


def harmonic_power_sum(start, count: int, e: int, skip_p: int | None = None) -> Fraction:
    """Exact ``sum_{j<count} 1/(start+j)**e``, omitting terms divisible by ``skip_p``."""
    start = as_rational(start)
    if e < 1:
        raise ValueError("exponent must be positive")
    if skip_p is not None and start.denominator != 1:
        raise ValueError("skip_p only applies to an integer start")
    total = Fraction(0)
    for j in range(count):
        term = start + j
        if skip_p is not None and term.numerator % skip_p == 0:
            continue
        if term == 0:
            raise PoleError(f"zero term at j={j}", index=j)
        total += 1 / term**e
    return total


@lru_cache(maxsize=None)
def _inverse_square_prefix(p: int, upto: int) -> Fraction:
    return harmonic_power_sum(1, upto, 2, skip_p=p)


def prime_free_inverse_squares(p: int, upto: int) -> Fraction:
    """``sum_{1 <= j <= upto, p !| j} 1/j**2``."""
    return _inverse_square_prefix(p, upto)


def unit_inverse_square_sum(p: int) -> Fraction:
    return prime_free_inverse_squares(p, p * p)


def verify_gamma_product(a, m, p: int) -> bool:
    """Check ``Gamma_p(a+mp) Gamma_p(a-mp) == Gamma_p(a)**2 (1 + m**2 p**2 H)``
    modulo ``p**4``, where ``H`` runs over ``1 <= j <= <-a>_{p^2}``, ``p !| j``."""
    if not is_prime(p) or p < 7:
        raise ValueError("requires a prime p >= 7")
    a, m = as_rational(a), as_rational(m)
    for name, val in (("a", a), ("m", m)):
        if padic_valuation(val, p) < 0:
            raise DomainError(f"{name}={val} is not {p}-integral")
    ctx = PadicContext(p, 4)
    mod = ctx.modulus
    lhs = gamma_p(a + m * p, ctx).value * gamma_p(a - m * p, ctx).value
    harmonic = prime_free_inverse_squares(p, residue_int(-a, p * p, p))
    correction = residue_int(1 + m * m * p * p * harmonic, mod, p)
    rhs = gamma_p(a, ctx).value ** 2 * correction
    return (lhs - rhs) % mod == 0
