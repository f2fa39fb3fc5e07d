"""Sum evaluators: pi, pi_gamma, the Gamma family, and trend reports.

Everything here is a finite complex sum over primes or integers with phases
e(t n^c + h n^gamma + k n / d).  The fractional parts come from numerics
(pair arithmetic, ~1e-10 per term), accumulation is Neumaier-compensated,
and ranges are processed in fixed-size blocks combined in index order, so
repeated runs are bit-identical.

The decomposition engine evaluates pi_gamma, Gamma_1 and Gamma_2 from shared
per-prime fractional parts; the bracket identity

    [-p^g] - [-(p+1)^g] = ((p+1)^g - p^g) + (psi(-(p+1)^g) - psi(-p^g))

then holds term by term up to a single rounding, which is what makes the
decomposition check a meaningful 1e-8 assertion at a million terms.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import sieve
from .errors import PrecisionError, PreconditionError
from .numerics import Parameters, e_of_frac_vec, phase_mod1_vec

BLOCK = 1 << 16
PHASE_BUDGET = 1e-9         # documented |{t n^c}| error per phase evaluation
_NEAR_INT = 1e-9            # fractional parts closer than this get certified


class ComplexAccumulator:
    """Neumaier-compensated complex sum, deterministic for a fixed add order."""

    __slots__ = ("_re", "_im", "_cre", "_cim", "count")

    def __init__(self):
        self._re = self._im = self._cre = self._cim = 0.0
        self.count = 0

    @staticmethod
    def _step(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    def add(self, z: complex, terms: int = 1):
        self._re, self._cre = self._step(self._re, self._cre, z.real)
        self._im, self._cim = self._step(self._im, self._cim, z.imag)
        self.count += terms

    def add_array(self, zs: np.ndarray):
        if zs.size:
            self.add(complex(np.sum(zs)), zs.size)

    @property
    def value(self) -> complex:
        return complex(self._re + self._cre, self._im + self._cim)


@dataclass
class SumReport:
    """A finished sum: value, term count, precision budget, wall time.

    weight_bound is the sum of |weights| (= n_terms for unit-modulus sums);
    the triangle inequality |value| <= weight_bound + phase_error_bound is
    checked by invariant_ok.
    """

    value: complex
    n_terms: int
    phase_error_bound: float
    elapsed: float
    weight_bound: float = None

    def __post_init__(self):
        if self.weight_bound is None:
            self.weight_bound = float(self.n_terms)

    @property
    def invariant_ok(self) -> bool:
        return abs(self.value) <= self.weight_bound + self.phase_error_bound + 1e-9


def _blocks(arr: np.ndarray):
    for i in range(0, arr.size, BLOCK):
        yield arr[i:i + BLOCK]


def _phase_bound(n_terms: int, phases_per_term: int, weight_bound: float) -> float:
    # |e(y+eps) - e(y)| <= 2 pi |eps|, one budget per phase evaluation
    return 2.0 * math.pi * PHASE_BUDGET * phases_per_term * max(weight_bound, float(n_terms))


# ---------------------------------------------------------------------------
# pi and pi_gamma
# ---------------------------------------------------------------------------

def pi_sum(params: Parameters) -> SumReport:
    """pi(x,d,a,t,c) = sum over primes p <= x, p = a (mod d) of e(t p^c)."""
    t0 = time.perf_counter()
    ps = sieve.primes_in_ap(params.x, params.d, params.a)
    acc = ComplexAccumulator()
    for blk in _blocks(ps):
        acc.add_array(e_of_frac_vec(phase_mod1_vec(params.t, blk, params.c_float)))
    return SumReport(acc.value, int(ps.size), _phase_bound(ps.size, 1, ps.size),
                     time.perf_counter() - t0)


def pi_gamma_sum(params: Parameters) -> SumReport:
    """pi_gamma: the same sum restricted to p = [n^(1/gamma)] for some n."""
    t0 = time.perf_counter()
    ps = sieve.primes_in_ap(params.x, params.d, params.a)
    keep = ps[sieve.ps_mask(ps, params.gamma_float)] if ps.size else ps
    acc = ComplexAccumulator()
    for blk in _blocks(keep):
        acc.add_array(e_of_frac_vec(phase_mod1_vec(params.t, blk, params.c_float)))
    return SumReport(acc.value, int(keep.size), _phase_bound(keep.size, 1, keep.size),
                     time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# the Gamma_1 + Gamma_2 decomposition
# ---------------------------------------------------------------------------

def _certified_floor_frac(m: int, gamma: float):
    """(floor(m^gamma), {m^gamma}) certified by precision escalation."""
    import mpmath

    exact = sieve._exact_integer_power(m, gamma)
    if exact is not None:
        return exact, 0.0
    for prec in (80, 160, 320, 640, 1280, 2048):
        with mpmath.workprec(prec):
            y = mpmath.mpf(m) ** mpmath.mpf(gamma)
            fl = mpmath.floor(y)
            f = y - fl
            err = abs(y) * mpmath.mpf(2.0) ** (8 - prec)
            if f > err and (1 - f) > err:
                return int(fl), float(f)
    raise PrecisionError(f"precision: cannot certify floor({m}^{gamma}) at 2048 bits")


def _floor_frac_arrays(n: np.ndarray, gamma: float):
    """Vectorized (floor(n^gamma), {n^gamma}) with certified risky entries."""
    f = phase_mod1_vec(1.0, n, gamma)
    fl = np.round(np.power(n.astype(np.float64), gamma) - f)
    risky = np.flatnonzero(np.minimum(f, 1.0 - f) <= _NEAR_INT)
    for i in risky:
        fl[i], f[i] = _certified_floor_frac(int(n[i]), gamma)
    return fl, f


def _psi_of_minus(f: np.ndarray) -> np.ndarray:
    """psi(-y) from f = {y}: equals 1/2 - f, except -1/2 at integer y."""
    return np.where(f > 0.0, 0.5 - f, -0.5)


@dataclass
class DecompositionReport:
    """pi_gamma, Gamma_1, Gamma_2 from one pass, plus the identity residue."""

    pi_gamma: SumReport
    gamma1: complex
    gamma2: complex
    identity_gap: float
    weight_sum: float
    mask_mismatches: int
    elapsed: float

    @property
    def tolerance(self) -> float:
        return 1e-8 * (1.0 + self.weight_sum)

    @property
    def identity_ok(self) -> bool:
        return self.identity_gap <= self.tolerance


def gamma_decomposition(params: Parameters) -> DecompositionReport:
    """Evaluate pi_gamma = Gamma_1 + Gamma_2 with shared per-prime values.

    The indicator route floor((p+1)^g) - floor(p^g) is cross-checked against
    sieve.ps_mask; disagreements are re-certified and counted.
    """
    t0 = time.perf_counter()
    ps = sieve.primes_in_ap(params.x, params.d, params.a)
    gf = params.gamma_float
    acc_pg = ComplexAccumulator()
    acc_g1 = ComplexAccumulator()
    acc_g2 = ComplexAccumulator()
    weight_sum = 0.0
    mismatches = 0
    n_kept = 0
    for blk in _blocks(ps):
        fl0, f0 = _floor_frac_arrays(blk, gf)
        fl1, f1 = _floor_frac_arrays(blk + 1, gf)
        pos0 = (f0 > 0.0).astype(np.float64)
        pos1 = (f1 > 0.0).astype(np.float64)
        ind = fl1 - fl0 + pos1 - pos0               # [-p^g] - [-(p+1)^g]
        mask = sieve.ps_mask(blk, gf)
        bad = np.flatnonzero(mask != (ind >= 1.0))
        for i in bad:
            mismatches += 1
            ind[i] = 1.0 if sieve.is_ps_prime(int(blk[i]), gf) else 0.0
        w1 = ind + ((f1 - f0) - (pos1 - pos0))
        w2 = _psi_of_minus(f1) - _psi_of_minus(f0)
        z = e_of_frac_vec(phase_mod1_vec(params.t, blk, params.c_float))
        acc_pg.add_array(z[ind >= 1.0])
        acc_g1.add_array(w1 * z)
        acc_g2.add_array(w2 * z)
        weight_sum += float(np.sum(np.abs(w1)) + np.sum(np.abs(w2)) + np.sum(ind))
        n_kept += int(np.sum(ind >= 1.0))
    elapsed = time.perf_counter() - t0
    pg = SumReport(acc_pg.value, n_kept, _phase_bound(n_kept, 1, n_kept), elapsed)
    gap = abs(pg.value - acc_g1.value - acc_g2.value)
    return DecompositionReport(pg, acc_g1.value, acc_g2.value, gap,
                               weight_sum, mismatches, elapsed)


def gamma1_sum(params: Parameters) -> complex:
    """Gamma_1 = sum of ((p+1)^gamma - p^gamma) e(t p^c) over the progression."""
    return gamma_decomposition(params).gamma1


def gamma2_sum(params: Parameters) -> complex:
    """Gamma_2 = sum of (psi(-(p+1)^gamma) - psi(-p^gamma)) e(t p^c)."""
    return gamma_decomposition(params).gamma2


# ---------------------------------------------------------------------------
# the main term, by quadrature and in closed form
# ---------------------------------------------------------------------------

@dataclass
class MainTermPair:
    """The theorem's main term both ways; they must agree to ~1e-6 relative."""

    quadrature: complex
    closed_form: complex
    rel_gap: float
    flagged: bool

    @property
    def value(self) -> complex:
        return self.closed_form


_GL8 = np.polynomial.legendre.leggauss(8)
_GL16 = np.polynomial.legendre.leggauss(16)


def _gl_pieces(lo: np.ndarray, hi: np.ndarray, expo: float, nodes, weights):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    ys = mid[:, None] + half[:, None] * nodes[None, :]
    return half * (np.power(ys, expo) @ weights)


def _gl_adaptive(lo: float, hi: float, expo: float, depth: int = 0) -> float:
    if depth > 40:
        raise PrecisionError("precision: quadrature failed to converge")
    i8 = _gl_pieces(np.array([lo]), np.array([hi]), expo, *_GL8)[0]
    i16 = _gl_pieces(np.array([lo]), np.array([hi]), expo, *_GL16)[0]
    if abs(i16 - i8) <= 1e-13 * (1.0 + abs(i16)):
        return i16
    mid = 0.5 * (lo + hi)
    return (_gl_adaptive(lo, mid, expo, depth + 1)
            + _gl_adaptive(mid, hi, expo, depth + 1))


def rhs_main(params: Parameters) -> MainTermPair:
    """gamma x^(gamma-1) pi(x) + gamma(1-gamma) integral of y^(gamma-2) pi(y).

    Method A integrates the step function piecewise (pi(y) is constant
    between consecutive primes of the progression) with Gauss-Legendre rules,
    refining any piece where the 8- and 16-node answers disagree.  Method B
    exchanges sum and integral: gamma * sum of p^(gamma-1) e(t p^c).
    """
    gf, cf = params.gamma_float, params.c_float
    x = params.x
    ps = sieve.primes_in_ap(x, params.d, params.a)
    if ps.size == 0:
        return MainTermPair(0j, 0j, 0.0, False)

    acc = ComplexAccumulator()
    for blk in _blocks(ps):
        z = e_of_frac_vec(phase_mod1_vec(params.t, blk, cf))
        acc.add_array(gf * np.power(blk.astype(np.float64), gf - 1.0) * z)
    closed = acc.value

    # step-function pieces [p_i, p_{i+1}) and the tail [p_last, x]
    z_all = e_of_frac_vec(phase_mod1_vec(params.t, ps, cf))
    prefix = np.cumsum(z_all)
    lo = ps.astype(np.float64)
    hi = np.append(lo[1:], float(x))
    keep = hi > lo
    lo, hi, prefix = lo[keep], hi[keep], prefix[keep]
    expo = gf - 2.0
    i8 = _gl_pieces(lo, hi, expo, *_GL8)
    i16 = _gl_pieces(lo, hi, expo, *_GL16)
    shaky = np.flatnonzero(np.abs(i16 - i8) > 1e-13 * (1.0 + np.abs(i16)))
    for j in shaky:
        i16[j] = _gl_adaptive(float(lo[j]), float(hi[j]), expo)
    acc_int = ComplexAccumulator()
    acc_int.add_array(prefix * i16)
    total_pi = prefix[-1]
    quad = gf * x ** (gf - 1.0) * total_pi + gf * (1.0 - gf) * acc_int.value

    top = max(abs(quad), abs(closed))
    gap = abs(quad - closed) / top if top > 0 else 0.0
    return MainTermPair(quad, closed, gap, gap > 1e-6)


# ---------------------------------------------------------------------------
# theorem reports and the trend table
# ---------------------------------------------------------------------------

@dataclass
class TheoremReport:
    """One x: left side pi_gamma, main term, and their difference."""

    lhs: complex
    main: complex
    err: complex
    x: float
    params: Parameters
    claimed_exponent: float

    @property
    def abs_err(self) -> float:
        return abs(self.err)

    @property
    def ratio_err_main(self) -> float:
        return self.abs_err / abs(self.main) if self.main != 0 else math.inf

    @property
    def err_over_x_gamma(self) -> float:
        return self.abs_err / self.x ** self.params.gamma_float

    @property
    def log_err_over_log_x(self) -> float:
        if self.abs_err == 0.0:
            return -math.inf
        return math.log(self.abs_err) / math.log(self.x)


def theorem_check(params: Parameters, allow_outside: bool = False) -> TheoremReport:
    """lhs, main (closed form), err = lhs - main at params.x."""
    if not params.region_ok and not allow_outside:
        raise PreconditionError(
            f"region: 19(c-1) + 171(1-gamma) < 9 fails at c={params.c_float}, "
            f"gamma={params.gamma_float}")
    lhs = pi_gamma_sum(params).value
    main = rhs_main(params).closed_form
    return TheoremReport(lhs, main, lhs - main, params.x, params,
                         float(params.claimed_exponent()))


def geometric_schedule(x_lo: float, x_hi: float, factor: float = math.sqrt(10.0)):
    """x_lo, x_lo*factor, ... climbing past x_hi's lower neighbor, ending at x_hi."""
    if not (x_lo >= 2 and x_hi >= x_lo and factor > 1):
        raise PreconditionError(
            f"schedule needs 2 <= x_lo <= x_hi and factor > 1, "
            f"got ({x_lo}, {x_hi}, {factor})")
    xs = [float(x_lo)]
    while xs[-1] * factor < x_hi * (1.0 - 1e-12):
        xs.append(xs[-1] * factor)
    if xs[-1] < x_hi:
        xs.append(float(x_hi))
    return xs


@dataclass
class TrendReport:
    """theorem_check along a schedule, with the |err|/|main| trajectory."""

    rows: list
    params: Parameters

    @property
    def ratios(self):
        return [r.ratio_err_main for r in self.rows]

    @property
    def err_over_x_gamma(self):
        return [r.err_over_x_gamma for r in self.rows]

    @property
    def monotone_increasing(self) -> bool:
        r = self.ratios
        return len(r) >= 2 and all(b > a for a, b in zip(r, r[1:]))

    def write_csv(self, path: str, header_comments=()):
        with open(path, "w", newline="") as fh:
            for line in header_comments:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["x", "re_lhs", "im_lhs", "re_main", "im_main",
                        "abs_err", "ratio_err_main", "log_err_over_log_x"])
            for r in self.rows:
                w.writerow([repr(r.x), repr(r.lhs.real), repr(r.lhs.imag),
                            repr(r.main.real), repr(r.main.imag),
                            repr(r.abs_err), repr(r.ratio_err_main),
                            repr(r.log_err_over_log_x)])


def theorem_trend(params: Parameters, xs, allow_outside: bool = False) -> TrendReport:
    """Run theorem_check at each x of the schedule (other parameters fixed)."""
    rows = []
    for x in xs:
        if x < 2:
            raise PreconditionError(f"schedule x must be >= 2, got {x}")
        rows.append(theorem_check(replace(params, x=float(x)), allow_outside))
    return TrendReport(rows, params)


# ---------------------------------------------------------------------------
# the Gamma_3 .. Gamma_5 family and the dyadic window sums
# ---------------------------------------------------------------------------

def _psi_weights(n: np.ndarray, gamma: float) -> np.ndarray:
    """psi(-(n+1)^gamma) - psi(-n^gamma), certified near integers."""
    _, f0 = _floor_frac_arrays(n, gamma)
    _, f1 = _floor_frac_arrays(n + 1, gamma)
    return _psi_of_minus(f1) - _psi_of_minus(f0)


def gamma3_sum(x: float, params: Parameters) -> complex:
    """log-weighted psi-difference sum over primes <= x in the progression."""
    ps = sieve.primes_in_ap(x, params.d, params.a)
    acc = ComplexAccumulator()
    for blk in _blocks(ps):
        w = _psi_weights(blk, params.gamma_float)
        z = e_of_frac_vec(phase_mod1_vec(params.t, blk, params.c_float))
        acc.add_array(np.log(blk.astype(np.float64)) * w * z)
    return acc.value


def _lambda_window(lo: int, hi: int, d: int, a: int):
    """(n, Lambda(n)) blocks over (lo, hi], n = a (mod d), Lambda(n) != 0."""
    for tab in sieve.iter_segments(lo, hi, mobius=False):
        n = tab.n_values()
        lam = tab.lam
        if d > 1:
            sel = n % d == a % d
            n, lam = n[sel], lam[sel]
        nz = lam != 0.0
        yield n[nz], lam[nz]


def gamma4_sum(x: float, params: Parameters) -> complex:
    """Lambda-weighted psi-difference sum over n <= x in the progression."""
    acc = ComplexAccumulator()
    for n, lam in _lambda_window(0, int(math.floor(x)), params.d, params.a):
        w = _psi_weights(n, params.gamma_float)
        z = e_of_frac_vec(phase_mod1_vec(params.t, n, params.c_float))
        acc.add_array(lam * w * z)
    return acc.value


@dataclass
class Gamma34Report:
    """|Gamma_3 - Gamma_4| against the prime-power budget 3 sqrt(x) log x."""

    gamma3: complex
    gamma4: complex
    x: float

    @property
    def gap(self) -> float:
        return abs(self.gamma3 - self.gamma4)

    @property
    def bound(self) -> float:
        return 3.0 * math.sqrt(self.x) * math.log(self.x)

    @property
    def within(self) -> bool:
        return self.gap <= self.bound


def gamma34_gap(x: float, params: Parameters) -> Gamma34Report:
    """Reportable comparison; callers should record, not fail, on a breach."""
    return Gamma34Report(gamma3_sum(x, params), gamma4_sum(x, params), float(x))


def gamma5_sum(x: float, params: Parameters) -> complex:
    """Lambda-weighted psi-difference sum over the window (x/2, x].

    Identically zero at gamma = 1, where both psi arguments are integers.
    """
    if x < 4:
        raise PreconditionError(f"gamma5_sum needs x >= 4, got {x}")
    acc = ComplexAccumulator()
    lo, hi = int(math.floor(x / 2)), int(math.floor(x))
    for n, lam in _lambda_window(lo, hi, params.d, params.a):
        w = _psi_weights(n, params.gamma_float)
        z = e_of_frac_vec(phase_mod1_vec(params.t, n, params.c_float))
        acc.add_array(lam * w * z)
    return acc.value


@dataclass
class Gamma5Schedule:
    """|Gamma_5| down a dyadic ladder x, x/2, x/4, ... against the claim."""

    xs: list
    values: list
    claimed: list

    def write_csv(self, path: str, header_comments=()):
        with open(path, "w", newline="") as fh:
            for line in header_comments:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["x", "abs_gamma5", "claimed_bound"])
            for x, v, b in zip(self.xs, self.values, self.claimed):
                w.writerow([repr(x), repr(abs(v)), repr(b)])


def gamma5_schedule(params: Parameters, levels: int | None = None) -> Gamma5Schedule:
    """Evaluate gamma5_sum at x, x/2, x/4, ... (stops below 4)."""
    expo = float(params.claimed_exponent())
    xs, values, claimed = [], [], []
    x = params.x
    while x >= 4 and (levels is None or len(xs) < levels):
        xs.append(x)
        values.append(gamma5_sum(x, params))
        claimed.append(x ** expo)
        x = x / 2.0
    return Gamma5Schedule(xs, values, claimed)


# ---------------------------------------------------------------------------
# Gamma_10 / Gamma_11 window sums
# ---------------------------------------------------------------------------

def gamma11_sum(x: float, H: int, params: Parameters) -> float:
    """Sum over 1 <= |h| <= H of |sum of Lambda(n) e(-h n^gamma)| on (x/2, x]."""
    if not (isinstance(H, (int, np.integer)) and H >= 0):
        raise PreconditionError(f"H must be a nonnegative integer, got {H!r}")
    if x < 4:
        raise PreconditionError(f"gamma11_sum needs x >= 4, got {x}")
    lo, hi = int(math.floor(x / 2)), int(math.floor(x))
    blocks = list(_lambda_window(lo, hi, params.d, params.a))
    total = 0.0
    for h in range(1, H + 1):
        for hh in (h, -h):
            acc = ComplexAccumulator()
            for n, lam in blocks:
                z = e_of_frac_vec(phase_mod1_vec(float(-hh), n, params.gamma_float))
                acc.add_array(lam * z)
            total += abs(acc.value)
    return total


def weighted_lambda_expsum(x1: float, h: int, params: Parameters, k: int) -> complex:
    """sum over x/2 < n <= x1 of Lambda(n) e(t n^c + h n^gamma + k n / d).

    No congruence restriction: the character e(k n / d) replaces it.  The
    rational phase (k n mod d) / d is exact.
    """
    if not isinstance(h, (int, np.integer)):
        raise PreconditionError(f"h must be an integer, got {h!r}")
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= params.d):
        raise PreconditionError(f"need 1 <= k <= d = {params.d}, got k={k!r}")
    if x1 > params.x:
        raise PreconditionError(f"x1 = {x1} exceeds x = {params.x}")
    lo, hi = int(math.floor(params.x / 2)), int(math.floor(x1))
    if hi <= lo:
        return 0j
    acc = ComplexAccumulator()
    d = params.d
    for n, lam in _lambda_window(lo, hi, 1, 0):
        fr = phase_mod1_vec(params.t, n, params.c_float)
        if h:
            fr = fr + phase_mod1_vec(float(h), n, params.gamma_float)
        if d > 1:
            fr = fr + ((int(k) % d) * (n % d) % d) / float(d)
        acc.add_array(lam * e_of_frac_vec(np.mod(fr, 1.0)))
    return acc.value


def gamma10_sum(x1: float, H: int, params: Parameters, k: int) -> float:
    """Sum over 1 <= |h| <= H of |weighted_lambda_expsum(x1, h, ., k)|."""
    if not (isinstance(H, (int, np.integer)) and H >= 0):
        raise PreconditionError(f"H must be a nonnegative integer, got {H!r}")
    total = 0.0
    for h in range(1, H + 1):
        total += abs(weighted_lambda_expsum(x1, h, params, k))
        total += abs(weighted_lambda_expsum(x1, -h, params, k))
    return total
