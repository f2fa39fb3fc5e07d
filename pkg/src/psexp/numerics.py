"""Shared numeric kernel: parameter bundle, {x}, psi, e(x), and {t n^c}.

Notation follows the classical conventions: e(y) = exp(2*pi*i*y), psi(y) =
{y} - 1/2, and the phase of interest is the fractional part of t * n^c for
integer n.  The fractional part is the only thing trig functions ever see, so
large arguments never reach sin/cos; accuracy is delegated to the pair
arithmetic in ddmath, which resolves {t n^c} to ~1e-10 while |t n^c| < 2^70.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Union

import numpy as np

from . import ddmath as dm
from .ddmath import DD
from .errors import PrecisionError, PreconditionError, ScaleError

PHASE_CAP = 2.0 ** 70       # |t * n^c| must stay under this
T_CAP = 1.0e6               # |t| cap for phase evaluation
_FRAC_CAP = 2.0 ** 100      # pair magnitude beyond which {x} is unresolvable

Rational = Union[Fraction, int]
Real = Union[float, Fraction, int]

# region boundary 19(c-1) + 171(1-gamma) < 9, and the open parameter box
C_SUP = Fraction(28, 19)
GAMMA_INF = Fraction(18, 19)


def _as_fraction(v: Real) -> Fraction:
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    return Fraction(*v.as_integer_ratio())


@dataclass(frozen=True)
class Parameters:
    """Immutable run parameters (x; c, gamma; t; progression a mod d; delta).

    c and gamma may be passed as Fraction for exact region arithmetic; floats
    are converted to their exact dyadic values, so region_ok is always an
    exact rational statement about the numbers actually used.
    """

    x: float
    c: Real
    gamma: Real
    t: float = 0.0
    d: int = 1
    a: int = 0
    delta: float = 0.01

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x > 0):
            raise PreconditionError(f"x must be positive and finite, got {self.x}")
        cf, gf = self.c_float, self.gamma_float
        if not (0.0 < gf <= 1.0):
            raise PreconditionError(f"gamma must lie in (0, 1], got {gf}")
        if not (1.0 <= cf <= 2.0):
            raise PreconditionError(f"c must lie in [1, 2], got {cf}")
        if not (isinstance(self.d, int) and self.d >= 1):
            raise PreconditionError(f"modulus d must be a positive integer, got {self.d}")
        if not isinstance(self.a, int):
            raise PreconditionError(f"residue a must be an integer, got {self.a}")
        if math.gcd(self.a, self.d) != 1:
            raise PreconditionError(f"need gcd(a, d) = 1, got gcd({self.a}, {self.d})")
        if not (math.isfinite(self.t) and abs(self.t) <= T_CAP):
            raise PreconditionError(f"|t| must be finite and <= {T_CAP:g}, got {self.t}")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise PreconditionError(f"delta must be positive, got {self.delta}")

    @property
    def c_float(self) -> float:
        return float(self.c)

    @property
    def gamma_float(self) -> float:
        return float(self.gamma)

    @property
    def region_ok(self) -> bool:
        """Exact test of 19(c - 1) + 171(1 - gamma) < 9."""
        c, g = _as_fraction(self.c), _as_fraction(self.gamma)
        return 19 * (c - 1) + 171 * (1 - g) < 9

    @property
    def in_theorem_box(self) -> bool:
        """Strict box 0 < gamma < 1 < c < 28/19 (degenerate edges excluded)."""
        c, g = _as_fraction(self.c), _as_fraction(self.gamma)
        return 0 < g < 1 < c < C_SUP

    def t_within_cap(self, x: float | None = None) -> bool:
        x = self.x if x is None else x
        return abs(self.t) <= x ** self.delta

    def claimed_exponent(self) -> Fraction:
        """Error exponent c/18 + gamma/2 + 143/342 (delta excluded)."""
        c, g = _as_fraction(self.c), _as_fraction(self.gamma)
        return c / 18 + g / 2 + Fraction(143, 342)


class UnitComplex(complex):
    """A complex number constructed on the unit circle."""

    def __new__(cls, re: float, im: float):
        z = super().__new__(cls, re, im)
        if abs(re * re + im * im - 1.0) > 1e-12:
            raise PreconditionError(f"({re}, {im}) is not on the unit circle")
        return z


def frac(y) -> float:
    """Fractional part {y} in [0, 1); frac(-0.25) = 0.75, exact at integers."""
    if isinstance(y, DD):
        if not math.isfinite(y.hi):
            raise PreconditionError(f"frac of non-finite value {y.hi}")
        if abs(y.hi) >= _FRAC_CAP:
            raise ScaleError(f"scale too large: |{y.hi:.6g}| >= 2^100, fractional part unresolvable")
        return _wrap_unit(float(y.frac()))
    if isinstance(y, int):
        return 0.0
    yf = float(y)
    if not math.isfinite(yf):
        raise PreconditionError(f"frac of non-finite value {yf}")
    # y - floor(y) rounds up to 1.0 when y sits just below an integer
    return _wrap_unit(yf - math.floor(yf))


def _wrap_unit(v: float) -> float:
    if v < 0.0:
        v += 1.0
    if v >= 1.0:
        v = 0.0
    return v


def psi(y) -> float:
    """Sawtooth psi(y) = {y} - 1/2."""
    return frac(y) - 0.5


def e_of(y) -> UnitComplex:
    """e(y) = exp(2 pi i y), with the argument reduced mod 1 before trig."""
    r = frac(y)
    return UnitComplex(math.cos(2.0 * math.pi * r), math.sin(2.0 * math.pi * r))


def _check_phase_args(t: float, c: float) -> None:
    if not (math.isfinite(t) and abs(t) <= T_CAP):
        raise PreconditionError(f"|t| must be finite and <= {T_CAP:g}, got {t}")
    if not (0.0 < c <= 2.0):
        raise PreconditionError(f"c must lie in (0, 2], got {c}")


def phase_mod1(t: float, n: int, c: float) -> float:
    """{t * n^c} for integer n >= 1, via pair arithmetic.

    Raises PrecisionError once |t| * n^c reaches 2^70, where the pair can no
    longer pin the fractional part to the documented 1e-9.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise PreconditionError(f"n must be a positive integer, got {n!r}")
    _check_phase_args(float(t), float(c))
    vhi, vlo = dm.dd_mul_d(*dm.dd_pow_int(np.int64(n), float(c)), float(t))
    if abs(float(vhi)) >= PHASE_CAP:
        raise PrecisionError(
            f"precision: |t * n^c| ~ {float(vhi):.3e} >= 2^70 for t={t}, n={n}, c={c}")
    return _wrap_unit(float(dm.dd_to_float(*dm.dd_frac(vhi, vlo))))


def phase_mod1_vec(t: float, n: np.ndarray, c: float) -> np.ndarray:
    """Vectorized {t * n^c} over an integer array n (same cap semantics)."""
    _check_phase_args(float(t), float(c))
    n = np.asarray(n)
    if n.size == 0:
        return np.zeros(0)
    if np.any(n < 1):
        raise PreconditionError("n must contain positive integers only")
    vhi, vlo = dm.dd_mul_d(*dm.dd_pow_int(n.astype(np.int64), float(c)), float(t))
    peak = float(np.max(np.abs(vhi)))
    if peak >= PHASE_CAP:
        raise PrecisionError(f"precision: max |t * n^c| ~ {peak:.3e} >= 2^70")
    fhi, flo = dm.dd_frac(vhi, vlo)
    out = np.asarray(fhi + flo, dtype=np.float64)
    out[out < 0.0] += 1.0
    out[out >= 1.0] = 0.0
    return out


def e_of_frac_vec(fracs: np.ndarray) -> np.ndarray:
    """complex128 e(y) from precomputed fractional parts in [0, 1)."""
    ang = (2.0 * math.pi) * np.asarray(fracs)
    return np.cos(ang) + 1j * np.sin(ang)


# ---------------------------------------------------------------------------
# reference fixture
# ---------------------------------------------------------------------------

def default_fixture_path() -> str:
    return str(resources.files("psexp").joinpath("data/phase_reference.csv"))


def verify_phase_fixture(path: str | None = None, tol: float = 1e-9):
    """Compare phase_mod1 against the stored high-precision table.

    Returns (n_rows, worst_error, failures) where failures lists
    (t, n, c, expected, got) for rows off by more than tol, measured on the
    circle (wraparound-aware).
    """
    path = path or default_fixture_path()
    failures = []
    worst = 0.0
    n_rows = 0
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip() == "t":
                continue
            t, n, c, expect = float(row[0]), int(row[1]), float(row[2]), float(row[3])
            n_rows += 1
            got = phase_mod1(t, n, c)
            err = abs(got - expect)
            err = min(err, 1.0 - err)
            worst = max(worst, err)
            if err > tol:
                failures.append((t, n, c, expect, got))
    if n_rows == 0:
        raise PreconditionError(f"fixture {path} contains no data rows")
    return n_rows, worst, failures
