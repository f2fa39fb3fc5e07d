"""Segmented sieves and the Piatetski-Shapiro membership test.

Tables are produced over half-open ranges (lo, hi]: a PrimeTable carries
primality, von Mangoldt Lambda, and Moebius mu for every n in the range.
Membership in the Piatetski-Shapiro sequence for exponent gamma is the
indicator [-n^gamma] - [-(n+1)^gamma], i.e. whether [y1, y2) with
y1 = n^gamma, y2 = (n+1)^gamma contains an integer; the fast path decides it
in pair arithmetic and anything within 1e-9 of an integer goes through an
escalating-precision certification that never guesses.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ddmath as dm
from .errors import BoundaryError, PreconditionError

DEFAULT_SEGMENT = 1 << 22
_NEAR_INT = 1e-9


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as int64, by a plain boolean sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass
class PrimeTable:
    """Primality / Lambda / mu over (lo, hi]; index i holds n = lo + 1 + i."""

    lo: int
    hi: int
    is_prime: np.ndarray
    lam: np.ndarray
    mu: np.ndarray | None

    def n_values(self) -> np.ndarray:
        return np.arange(self.lo + 1, self.hi + 1, dtype=np.int64)

    def primes(self) -> np.ndarray:
        return self.lo + 1 + np.flatnonzero(self.is_prime).astype(np.int64)


def sieve_range(lo: int, hi: int, mobius: bool = True) -> PrimeTable:
    """Sieve the half-open range (lo, hi].

    Cost is O((hi - lo) log log hi) plus one pass per base prime for mu; the
    range is materialized in full, so callers wanting bounded memory should
    go through iter_segments.
    """
    if not (0 <= lo < hi):
        raise PreconditionError(f"need 0 <= lo < hi, got ({lo}, {hi})")
    if hi > (1 << 52):
        raise PreconditionError(f"hi = {hi} too large for exact float indexing")
    size = hi - lo
    base = primes_up_to(math.isqrt(hi))
    n0 = lo + 1

    is_p = np.ones(size, dtype=bool)
    if n0 == 1:
        is_p[0] = False
    for p in base:
        p = int(p)
        start = max(p * p, ((n0 + p - 1) // p) * p)
        if start <= hi:
            is_p[start - n0:: p] = False
    # base primes inside the range were knocked out by their own squares only
    # if p*p <= hi; re-mark p itself when it lies in (lo, hi]
    for p in base:
        if lo < p <= hi:
            is_p[int(p) - n0] = True

    n = np.arange(n0, hi + 1, dtype=np.int64)
    lam = np.where(is_p, np.log(n.astype(np.float64)), 0.0)
    for p in base:
        p = int(p)
        pk = p * p
        while pk <= hi:
            if pk > lo:
                lam[pk - n0] = math.log(p)
            pk *= p

    mu = None
    if mobius:
        mu = np.ones(size, dtype=np.int8)
        residual = n.copy()
        for p in base:
            p = int(p)
            start = ((n0 + p - 1) // p) * p
            if start <= hi:
                sl = slice(start - n0, None, p)
                mu[sl] = -mu[sl]
                residual[sl] //= p
            p2 = p * p
            start2 = ((n0 + p2 - 1) // p2) * p2
            if start2 <= hi:
                mu[start2 - n0:: p2] = 0
        big = residual > 1          # exactly one prime factor > sqrt(hi) left
        mu = np.where(big & (mu != 0), -mu, mu).astype(np.int8)
        if n0 == 1:
            mu[0] = 1
    return PrimeTable(lo, hi, is_p, lam, mu)


def iter_segments(lo: int, hi: int, segment: int = DEFAULT_SEGMENT,
                  mobius: bool = False, cache_dir: str | None = None):
    """Yield PrimeTables covering (lo, hi] in slices of at most `segment`."""
    if segment < 2:
        raise PreconditionError(f"segment size must be >= 2, got {segment}")
    a = lo
    while a < hi:
        b = min(a + segment, hi)
        if cache_dir is not None and not mobius:
            yield _cached_segment(cache_dir, a, b)
        else:
            yield sieve_range(a, b, mobius=mobius)
        a = b


def tau_k(N: int, k: int) -> np.ndarray:
    """tau_k(n) for 1 <= n <= N (index n); tau_1 = 1, Dirichlet powers of 1."""
    if k < 1 or N < 1:
        raise PreconditionError(f"need k >= 1, N >= 1, got k={k}, N={N}")
    t = np.ones(N + 1, dtype=np.int64)
    t[0] = 0
    for _ in range(k - 1):
        nxt = np.zeros(N + 1, dtype=np.int64)
        for d in range(1, N + 1):
            nxt[d::d] += t[d]
        t = nxt
    return t


def euler_phi(d: int) -> int:
    if d < 1:
        raise PreconditionError(f"euler_phi needs d >= 1, got {d}")
    result, m = d, d
    p = 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def primes_in_ap(x: float, d: int, a: int) -> np.ndarray:
    """Primes p <= x with p = a (mod d); gcd(a, d) = 1 required."""
    if d < 1 or math.gcd(a, d) != 1:
        raise PreconditionError(f"need d >= 1 and gcd(a, d) = 1, got a={a}, d={d}")
    ps = primes_up_to(int(math.floor(x)))
    return ps[ps % d == a % d] if d > 1 else ps


# ---------------------------------------------------------------------------
# Piatetski-Shapiro membership
# ---------------------------------------------------------------------------

def _gamma_as_dyadic(gamma: float) -> Fraction:
    return Fraction(*float(gamma).as_integer_ratio())


def _exact_integer_power(m: int, gamma: float):
    """Return m^gamma as an exact int if it is one, else None.

    For dyadic gamma = k/2^s in lowest terms (k odd), m^gamma is an integer
    iff m is a perfect 2^s-th power; then m^gamma = root^k.
    """
    g = _gamma_as_dyadic(gamma)
    s = g.denominator.bit_length() - 1     # denominator is 2^s, numerator odd
    if s == 0:
        return m ** g.numerator
    if s > 6:
        # a perfect 2^s-th power is >= 2^(2^s) >= 2^128, beyond any table
        return 1 if m == 1 else None
    root = round(m ** (1.0 / 2 ** s))
    for r in (root - 1, root, root + 1):
        if r >= 1 and r ** (2 ** s) == m:
            return r ** g.numerator
    return None


def _ceil_certified(m: int, gamma: float) -> int:
    """ceil(m^gamma), certified.  Escalates precision near integers."""
    import mpmath

    exact = _exact_integer_power(m, gamma)
    if exact is not None:
        return exact
    for prec in (80, 160, 320, 640, 1280, 2048):
        with mpmath.workprec(prec):
            y = mpmath.mpf(m) ** mpmath.mpf(gamma)
            k = mpmath.nint(y)
            err = abs(y) * mpmath.mpf(2.0) ** (8 - prec)
            if abs(y - k) > err:
                return int(mpmath.ceil(y))
    raise BoundaryError(
        f"boundary: cannot certify ceil({m}^{gamma}) at 2048 bits")


def is_ps_prime(p: int, gamma: float) -> bool:
    """Whether p = [n^(1/gamma)] for some integer n.

    Equals the indicator [-p^gamma] - [-(p+1)^gamma], i.e. whether the
    interval [p^gamma, (p+1)^gamma) contains an integer.  Exact at gamma = 1.
    The name follows usage: p is typically prime, but any integer >= 1 works.
    """
    if not (isinstance(p, (int, np.integer)) and p >= 1):
        raise PreconditionError(f"need integer p >= 1, got {p!r}")
    if not (0.0 < gamma <= 1.0):
        raise PreconditionError(f"need 0 < gamma <= 1, got {gamma}")
    if gamma == 1.0:
        return True
    return _ceil_certified(int(p) + 1, gamma) - _ceil_certified(int(p), gamma) >= 1


def ps_mask(n: np.ndarray, gamma: float) -> np.ndarray:
    """Vectorized is_ps_prime over an int array.

    Pair arithmetic settles every n whose endpoint fractional parts are
    farther than 1e-9 from an integer; the rare rest go through the certified
    scalar path.
    """
    n = np.asarray(n, dtype=np.int64)
    if n.size == 0:
        return np.zeros(0, dtype=bool)
    if np.any(n < 1):
        raise PreconditionError("ps_mask needs n >= 1")
    if not (0.0 < gamma <= 1.0):
        raise PreconditionError(f"need 0 < gamma <= 1, got {gamma}")
    if gamma == 1.0:
        return np.ones(n.shape, dtype=bool)

    y1h, y1l = dm.dd_pow_int(n, gamma)
    y2h, y2l = dm.dd_pow_int(n + 1, gamma)
    f1h, f1l = dm.dd_frac(y1h, y1l)
    f2h, f2l = dm.dd_frac(y2h, y2l)
    d1 = np.minimum(f1h + f1l, 1.0 - (f1h + f1l))
    d2 = np.minimum(f2h + f2l, 1.0 - (f2h + f2l))
    fl1 = dm.dd_to_float(*dm.dd_floor(y1h, y1l))
    fl2 = dm.dd_to_float(*dm.dd_floor(y2h, y2l))
    out = (fl2 - fl1) >= 1.0            # ceil difference for non-integer ends

    risky = np.flatnonzero((d1 <= _NEAR_INT) | (d2 <= _NEAR_INT))
    for i in risky:
        out[i] = is_ps_prime(int(n[i]), gamma)
    return out


# ---------------------------------------------------------------------------
# binary segment cache: little-endian, length-prefixed bitset, keyed (lo, hi)
# ---------------------------------------------------------------------------

_CACHE_HEADER = struct.Struct("<qqQ")


def segment_cache_path(cache_dir: str, lo: int, hi: int) -> str:
    return os.path.join(cache_dir, f"seg_{lo}_{hi}.bits")


def write_segment(cache_dir: str, table: PrimeTable) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    packed = np.packbits(table.is_prime, bitorder="little").tobytes()
    path = segment_cache_path(cache_dir, table.lo, table.hi)
    with open(path, "wb") as fh:
        fh.write(_CACHE_HEADER.pack(table.lo, table.hi, len(packed)))
        fh.write(packed)
    return path


def read_segment(cache_dir: str, lo: int, hi: int) -> np.ndarray:
    """The cached primality bitset for (lo, hi]; raises if absent/corrupt."""
    path = segment_cache_path(cache_dir, lo, hi)
    with open(path, "rb") as fh:
        head = fh.read(_CACHE_HEADER.size)
        if len(head) != _CACHE_HEADER.size:
            raise PreconditionError(f"cache file {path} truncated")
        flo, fhi, nbytes = _CACHE_HEADER.unpack(head)
        if (flo, fhi) != (lo, hi):
            raise PreconditionError(
                f"cache key mismatch in {path}: file says ({flo}, {fhi}]")
        packed = fh.read(nbytes)
        if len(packed) != nbytes:
            raise PreconditionError(f"cache file {path} truncated")
    bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8),
                         bitorder="little")[: hi - lo]
    return bits.astype(bool)


def _cached_segment(cache_dir: str, lo: int, hi: int) -> PrimeTable:
    path = segment_cache_path(cache_dir, lo, hi)
    if os.path.exists(path):
        is_p = read_segment(cache_dir, lo, hi)
        n = np.arange(lo + 1, hi + 1, dtype=np.int64)
        lam = np.where(is_p, np.log(n.astype(np.float64)), 0.0)
        base = primes_up_to(math.isqrt(hi))
        for p in base:
            p = int(p)
            pk = p * p
            while pk <= hi:
                if pk > lo:
                    lam[pk - lo - 1] = math.log(p)
                pk *= p
        return PrimeTable(lo, hi, is_p, lam, None)
    table = sieve_range(lo, hi, mobius=False)
    write_segment(cache_dir, table)
    return table
