"""Double-width ("double-double") floating point, vectorized over numpy arrays.

A value is carried as an unevaluated pair (hi, lo) of float64 with
hi = fl(hi + lo) and |lo| <= ulp(hi)/2, giving roughly 106 significant bits.
That is enough to resolve {t * n^c} to well below 1e-9 while the integer part
of t * n^c stays under the 2^70 working cap: the fractional part of a pair of
magnitude 2^70 is still known to ~2^-35.

All kernels below are branch-free elementwise operations, so they accept and
return numpy arrays (or scalars) of matching shape.  Error-free transforms:

    two_sum   Knuth/Moller, exact for any ordering of magnitudes
    two_prod  Dekker split (no fma on this platform); exact absent overflow

The transcendental layer computes log2 of exact integers and exp2 of pairs:
log2(n) = k + 2*atanh(z)/ln2 with the mantissa normalized into [sqrt(1/2),
sqrt(2)) so |z| <= 0.1716 and a 22-term odd series reaches 2^-107; exp2
rounds to the nearest integer exponent and applies a 27-term Taylor series of
exp on |u| <= ln(2)/2.  Powers of two round-trip exactly (z = 0, f = 0).
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0            # 2^27 + 1, Dekker
_SQRT_HALF = 0.7071067811865476

# ln 2 and 1/ln 2 as double-double constants (hi + lo, correctly rounded).
LN2_HI, LN2_LO = 0.6931471805599453, 2.3190468138462996e-17
INV_LN2_HI, INV_LN2_LO = 1.4426950408889634, 2.0355273740931033e-17


def two_sum(a, b):
    """Exact sum: returns (s, e) with s = fl(a+b), s + e = a + b."""
    s = a + b
    v = s - a
    e = (a - (s - v)) + (b - v)
    return s, e


def quick_two_sum(a, b):
    # requires |a| >= |b| (or a == 0); one branch cheaper than two_sum
    s = a + b
    e = b - (s - a)
    return s, e


def two_prod(a, b):
    """Exact product: (p, e) with p = fl(a*b), p + e = a*b."""
    p = a * b
    aa = _SPLITTER * a
    ahi = aa - (aa - a)
    alo = a - ahi
    bb = _SPLITTER * b
    bhi = bb - (bb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


# ---------------------------------------------------------------------------
# pair arithmetic
# ---------------------------------------------------------------------------

def dd_add(xhi, xlo, yhi, ylo):
    s1, s2 = two_sum(xhi, yhi)
    t1, t2 = two_sum(xlo, ylo)
    s2 = s2 + t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 = s2 + t2
    return quick_two_sum(s1, s2)


def dd_add_d(xhi, xlo, d):
    s1, s2 = two_sum(xhi, d)
    s2 = s2 + xlo
    return quick_two_sum(s1, s2)


def dd_neg(xhi, xlo):
    return -xhi, -xlo


def dd_sub(xhi, xlo, yhi, ylo):
    return dd_add(xhi, xlo, -yhi, -ylo)


def dd_mul(xhi, xlo, yhi, ylo):
    p, e = two_prod(xhi, yhi)
    e = e + (xhi * ylo + xlo * yhi)
    return quick_two_sum(p, e)


def dd_mul_d(xhi, xlo, d):
    p, e = two_prod(xhi, d)
    e = e + xlo * d
    return quick_two_sum(p, e)


def dd_sqr(xhi, xlo):
    p, e = two_prod(xhi, xhi)
    e = e + 2.0 * (xhi * xlo)
    return quick_two_sum(p, e)


def dd_div(xhi, xlo, yhi, ylo):
    """Quotient with three corrections (QD-style), ~1 ulp of the pair."""
    q1 = xhi / yhi
    rhi, rlo = dd_add(xhi, xlo, *dd_neg(*dd_mul_d(yhi, ylo, q1)))
    q2 = rhi / yhi
    rhi, rlo = dd_add(rhi, rlo, *dd_neg(*dd_mul_d(yhi, ylo, q2)))
    q3 = rhi / yhi
    s1, s2 = quick_two_sum(q1, q2)
    return dd_add_d(s1, s2, q3)


def dd_floor(xhi, xlo):
    """Componentwise floor of the pair; exact."""
    fhi = np.floor(xhi)
    hi_is_int = xhi == fhi
    # where hi is already integral the fractional information lives in lo
    flo = np.where(hi_is_int, np.floor(xlo), 0.0)
    return quick_two_sum(fhi, flo)


def dd_frac(xhi, xlo):
    """{x} in [0, 1); exact 0.0 for integer pairs."""
    fhi, flo = dd_floor(xhi, xlo)
    rhi, rlo = dd_add(xhi, xlo, -fhi, -flo)
    # guard the half-open range against rounding at either end
    too_hi = rhi >= 1.0
    rhi = np.where(too_hi, rhi - 1.0, rhi)
    neg = rhi < 0.0
    rhi = np.where(neg, rhi + 1.0, rhi)
    return rhi, rlo


def dd_to_float(xhi, xlo):
    return xhi + xlo


def dd_from_int(n):
    """Exact pair for integer input; exact up to |n| < 2^106.

    Accepts python ints, int64 arrays, or float64 arrays holding integers.
    """
    arr = np.asarray(n)
    if arr.dtype.kind in "iu" or arr.dtype == object:
        hi = arr.astype(np.float64)
        lo = (arr - hi.astype(arr.dtype if arr.dtype.kind in "iu" else object)).astype(np.float64)
    else:
        hi = arr.astype(np.float64)
        lo = np.zeros_like(hi)
    return quick_two_sum(hi, lo)


# ---------------------------------------------------------------------------
# log2 / exp2
# ---------------------------------------------------------------------------

def _inv_odd_coeffs(jmax):
    # 1/(2j+1) as pairs, via pair division of exact integers
    out = []
    for j in range(jmax + 1):
        hi, lo = dd_div(1.0, 0.0, float(2 * j + 1), 0.0)
        out.append((float(hi), float(lo)))
    return out


def _inv_fact_coeffs(kmax):
    out = [(1.0, 0.0), (1.0, 0.0)]
    hi, lo = 1.0, 0.0
    for k in range(2, kmax + 1):
        hi, lo = dd_div(hi, lo, float(k), 0.0)
        out.append((float(hi), float(lo)))
    return out


_ATANH_C = _inv_odd_coeffs(21)      # z^43 / 0.1716^43 ~ 2^-109
_EXP_C = _inv_fact_coeffs(26)       # 0.347^26/26! ~ 1e-38


def dd_log2_int(n):
    """log2 of positive integers (int64 array / scalar), integer part exact.

    n = m * 2^k with m in [sqrt(1/2), sqrt(2)); log(m) = 2 atanh(z),
    z = (m-1)/(m+1).  Both m-1 (Sterbenz) and m+1 (two_sum) are exact.
    """
    nf = np.asarray(n, dtype=np.float64)
    m, k = np.frexp(nf)                      # m in [0.5, 1)
    shift = m < _SQRT_HALF
    m = np.where(shift, 2.0 * m, m)          # exact scaling
    k = (k - shift).astype(np.float64)

    num_hi, num_lo = m - 1.0, np.zeros_like(m)
    den_hi, den_lo = two_sum(m, 1.0)
    zhi, zlo = dd_div(num_hi, num_lo, den_hi, den_lo)
    z2hi, z2lo = dd_sqr(zhi, zlo)

    phi, plo = np.full_like(m, _ATANH_C[-1][0]), np.full_like(m, _ATANH_C[-1][1])
    for chi, clo in _ATANH_C[-2::-1]:
        phi, plo = dd_mul(phi, plo, z2hi, z2lo)
        phi, plo = dd_add(phi, plo, chi, clo)
    lnm_hi, lnm_lo = dd_mul(zhi, zlo, phi, plo)
    lnm_hi, lnm_lo = 2.0 * lnm_hi, 2.0 * lnm_lo          # exact
    lg_hi, lg_lo = dd_mul(lnm_hi, lnm_lo, INV_LN2_HI, INV_LN2_LO)
    return dd_add_d(lg_hi, lg_lo, k)


def dd_exp2(whi, wlo):
    """2^w for a pair w; |w| up to ~1000.  Exact when w is an integer pair."""
    W = np.rint(whi)
    fhi, flo = dd_add_d(whi, wlo, -W)        # |f| <= 0.5 + eps
    uhi, ulo = dd_mul(fhi, flo, LN2_HI, LN2_LO)

    ehi = np.full_like(np.asarray(whi, dtype=np.float64), _EXP_C[-1][0])
    elo = np.full_like(ehi, _EXP_C[-1][1])
    for chi, clo in _EXP_C[-2::-1]:
        ehi, elo = dd_mul(ehi, elo, uhi, ulo)
        ehi, elo = dd_add(ehi, elo, chi, clo)
    Wi = W.astype(np.int64)
    return np.ldexp(ehi, Wi), np.ldexp(elo, Wi)          # exact scaling


def dd_pow_int(n, c):
    """n^c as a pair, n positive integer array/scalar, c float64.

    Computed as exp2(c * log2 n); c = 1 and c = 2 short-circuit to exact
    pairs so that degenerate parameter choices stay exact.
    """
    if c == 1.0:
        return dd_from_int(np.asarray(n, dtype=np.int64))
    if c == 2.0:
        return dd_sqr(*dd_from_int(np.asarray(n, dtype=np.int64)))
    lg_hi, lg_lo = dd_log2_int(n)
    return dd_exp2(*dd_mul_d(lg_hi, lg_lo, c))


class DD:
    """Scalar convenience wrapper over the pair kernels.

    Mainly for boundary logic (floors, fractional parts) where per-element
    control flow is clearer than masked arrays; the heavy paths use the
    vector kernels directly.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=0.0):
        s, e = quick_two_sum(float(hi), float(lo))
        self.hi, self.lo = float(s), float(e)

    @classmethod
    def _raw(cls, hi, lo):
        d = cls.__new__(cls)
        d.hi, d.lo = float(hi), float(lo)
        return d

    @classmethod
    def from_int(cls, n: int) -> "DD":
        hi = float(n)
        return cls._raw(*quick_two_sum(hi, float(n - int(hi))))

    def __add__(self, other):
        if isinstance(other, DD):
            return DD._raw(*dd_add(self.hi, self.lo, other.hi, other.lo))
        return DD._raw(*dd_add_d(self.hi, self.lo, float(other)))

    __radd__ = __add__

    def __neg__(self):
        return DD._raw(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, DD) else -float(other))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        if isinstance(other, DD):
            return DD._raw(*dd_mul(self.hi, self.lo, other.hi, other.lo))
        return DD._raw(*dd_mul_d(self.hi, self.lo, float(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, DD) else DD(float(other))
        return DD._raw(*dd_div(self.hi, self.lo, o.hi, o.lo))

    def __float__(self):
        return self.hi + self.lo

    def floor(self) -> "DD":
        return DD._raw(*dd_floor(self.hi, self.lo))

    def frac(self) -> "DD":
        return DD._raw(*dd_frac(self.hi, self.lo))

    def __repr__(self):
        return f"DD({self.hi!r}, {self.lo!r})"


def dd_pow(n: int, c: float) -> DD:
    """Scalar n^c through the vector kernel."""
    hi, lo = dd_pow_int(np.int64(n), float(c))
    return DD._raw(float(hi), float(lo))
