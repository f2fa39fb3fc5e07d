"""Trigonometric approximation of psi(x) = {x} - 1/2 with a Fejer majorant.

The degree-H approximant is

    psi*(x) = sum_{1 <= |h| <= H} a(h) e(hx),
    a(h)    = i * Phi(|h|/(H+1)) / (2 pi h),
    Phi(t)  = pi t (1 - t) cot(pi t) + t,

i.e. psi*(x) = -(1/pi) sum_{h=1}^{H} (Phi(h/(H+1))/h) sin(2 pi h x).  The
Phi damping is what makes the pointwise error controllable: psi* interpolates
psi at the Fejer-kernel zeros k/(H+1), and

    |psi(x) - psi*(x)| <= M(x) = sum_{|h| <= H} b(h) e(hx),
    b(h) = (1 - |h|/(H+1)) / (H+1),

where M is (1/(H+1)) times the Fejer kernel, hence nonnegative with mean
1/(H+1).  This b is twice the sharp choice; the factor-two slack keeps the
inequality strict at integer x where the sharp version is an equality.
Dropping Phi (plain Fejer smoothing of the psi series) breaks the bound near
integers by a factor ~ H * dist(x, Z), which the tests demonstrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ddmath as dm
from .errors import PreconditionError

H_MAX = 10 ** 6


@dataclass(frozen=True)
class VaalerCoefficients:
    """Coefficients for degree H: a[h-1] = a(h) for h = 1..H; b[h] for 0..H.

    a(-h) = conj(a(h)) is implied; b is even in h.
    """

    H: int
    a: np.ndarray
    b: np.ndarray

    def a_abs_cap(self) -> float:
        """max over h of |a(h)| * |h| (must stay <= 1/(2 pi) * kappa)."""
        return float(np.max(np.abs(self.a) * np.arange(1, self.H + 1)))


def phi_damping(t: float) -> float:
    """Phi(t) = pi t (1-t) cot(pi t) + t on [0, 1); Phi(0) = 1, Phi(1-) = 0."""
    if not 0.0 <= t < 1.0:
        raise PreconditionError(f"Phi domain is [0, 1), got {t}")
    if t == 0.0:
        return 1.0
    return math.pi * t * (1.0 - t) / math.tan(math.pi * t) + t


def build_coefficients(H: int) -> VaalerCoefficients:
    if not (isinstance(H, (int, np.integer)) and 1 <= H <= H_MAX):
        raise PreconditionError(f"need integer 1 <= H <= {H_MAX}, got {H!r}")
    h = np.arange(1, H + 1, dtype=np.float64)
    phi = np.array([phi_damping(v) for v in h / (H + 1.0)])
    a = 1j * phi / (2.0 * math.pi * h)
    b = (1.0 - np.arange(0, H + 1, dtype=np.float64) / (H + 1.0)) / (H + 1.0)
    return VaalerCoefficients(int(H), a, b)


def approx_psi(x, coeffs: VaalerCoefficients):
    """psi*(x); scalar or ndarray x, reduced mod 1 before the sine series."""
    x = np.asarray(x, dtype=np.float64)
    r = x - np.floor(x)
    h = np.arange(1, coeffs.H + 1, dtype=np.float64)
    phi_over_h = (2.0 * coeffs.a.imag)          # Phi_h / (pi h)
    s = np.sin(2.0 * math.pi * np.multiply.outer(r, h)) @ phi_over_h
    return -s if s.shape else float(-s)


def majorant(x, coeffs: VaalerCoefficients):
    """M(x) = sum_{|h|<=H} b(h) e(hx), evaluated from the coefficients.

    Scaled Fejer kernel; the closed form is available separately as an
    independent oracle (fejer_closed_form).
    """
    x = np.asarray(x, dtype=np.float64)
    r = x - np.floor(x)
    h = np.arange(1, coeffs.H + 1, dtype=np.float64)
    m = coeffs.b[0] + 2.0 * (np.cos(2.0 * math.pi * np.multiply.outer(r, h)) @ coeffs.b[1:])
    return m if m.shape else float(m)


def fejer_closed_form(x, H: int):
    """(sin(pi(H+1)x) / ((H+1) sin(pi x)))^2, = 1 at integers; oracle for M.

    |sin(pi y)| is evaluated as sin(pi * min({y}, 1-{y})) so the value stays
    accurate when {y} is close to 0 or 1.
    """
    x = np.asarray(x, dtype=np.float64)

    def abs_sin_pi_pair(yhi, ylo):
        # distance of y to the nearest integer, at pair accuracy
        rhi, rlo = dm.dd_frac(yhi, ylo)
        d = np.minimum(rhi + rlo, (1.0 - rhi) - rlo)
        return np.sin(math.pi * d)

    s = abs_sin_pi_pair(x, np.zeros_like(x))
    num = abs_sin_pi_pair(*dm.two_prod(float(H + 1), x))
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(s == 0.0, 1.0, (num / ((H + 1) * np.where(s == 0.0, 1.0, s))) ** 2)
    return v if v.shape else float(v)


def naive_fejer_psi(x, H: int):
    """Undamped comparison: Fejer-weighted partial sum of the psi series.

    -(1/pi) sum (1 - h/(H+1)) sin(2 pi h x)/h.  Kept as a foil: it fails the
    pointwise inequality against M near integers.
    """
    x = np.asarray(x, dtype=np.float64)
    r = x - np.floor(x)
    h = np.arange(1, H + 1, dtype=np.float64)
    w = (1.0 - h / (H + 1.0)) / h
    s = np.sin(2.0 * math.pi * np.multiply.outer(r, h)) @ w
    return (-s / math.pi) if s.shape else float(-s / math.pi)


def pointwise_check(xs: np.ndarray, coeffs: VaalerCoefficients, slack: float = 1e-10):
    """max over xs of |psi - psi*| - M; the inequality holds iff <= slack.

    Returns (worst_violation, worst_x).
    """
    xs = np.asarray(xs, dtype=np.float64)
    psi_vals = (xs - np.floor(xs)) - 0.5
    err = np.abs(psi_vals - approx_psi(xs, coeffs))
    gap = err - majorant(xs, coeffs)
    i = int(np.argmax(gap))
    return float(gap[i]), float(xs[i])


def dump_coefficients_csv(coeffs: VaalerCoefficients, path: str,
                          header: list[str] | None = None) -> None:
    """CSV of (h, re_a, im_a, b) for h = 0..H (a(0) = 0 by convention)."""
    with open(path, "w", newline="") as fh:
        for line in header or []:
            fh.write(f"# {line}\n")
        fh.write("h,re_a,im_a,b\n")
        fh.write(f"0,{0.0!r},{0.0!r},{float(coeffs.b[0])!r}\n")
        for i in range(coeffs.H):
            fh.write(f"{i+1},{float(coeffs.a[i].real)!r},{float(coeffs.a[i].imag)!r},"
                     f"{float(coeffs.b[i+1])!r}\n")
