"""Derivative-test bounds and the Weyl shift ("square-out") inequality.

For a real phase f on an interval (a, b] the classical bounds read

    second derivative: |sum e(f(n))| <= C ((b-a) lam^(1/2) + lam^(-1/2)),
    third derivative:  |sum e(f(n))| <= C ((b-a) lam^(1/6) + lam^(-1/3)),

valid when |f''| (resp. |f'''|) is comparable to lam throughout.  compare()
samples the derivative over the interval, takes lam as the geometric mean of
the sampled bracket, and reports the empirical-to-bound ratio; a ratio well
below the constant's reach (<= 10 across the monomial sweeps used in tests)
is the desk-scale sanity that the formulas are transcribed right.

square_out_check verifies the unconditional inequality

    |sum_{n in I} z_n|^2 <= (1 + X/Q) sum_{|q|<Q} (1-|q|/Q) sum_n z_{n+q} conj(z_n)

(X = |I| by default; the exact Cauchy-Schwarz factor is (|I|+Q-1)/Q, so the
stated factor is slightly generous and the inequality holds for every complex
sequence, which makes it a sharp self-test of the correlation bookkeeping).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PreconditionError

_C_DEFAULT = 1.0


@dataclass
class PhaseFunction:
    """A phase f on (a, b] with optional second/third derivative callables."""

    f: Callable[[np.ndarray], np.ndarray]
    a: float
    b: float
    d2: Callable[[np.ndarray], np.ndarray] | None = None
    d3: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise PreconditionError(f"need finite a < b, got ({self.a}, {self.b})")

    def n_values(self) -> np.ndarray:
        return np.arange(math.floor(self.a) + 1, math.floor(self.b) + 1, dtype=np.int64)

    def bracket(self, order: int, samples: int = 1000) -> tuple[float, float]:
        """(min, max) of |f''| or |f'''| over a uniform sample of [a, b]."""
        fn = self.d2 if order == 2 else self.d3 if order == 3 else None
        if fn is None:
            raise PreconditionError(f"derivative of order {order} not supplied")
        ys = np.abs(np.asarray(fn(np.linspace(self.a, self.b, samples))))
        return float(np.min(ys)), float(np.max(ys))


@dataclass
class BoundReport:
    kind: str                 # "second" or "third"
    interval: tuple[float, float]
    lam: float
    bound: float
    empirical: float
    ratio: float
    constant: float = _C_DEFAULT
    bracket: tuple[float, float] = field(default=(0.0, 0.0))
    label: str = ""


def second_derivative_bound(length: float, lam: float, C: float = _C_DEFAULT) -> float:
    """C ((b-a) sqrt(lam) + 1/sqrt(lam)); needs lam > 0."""
    if not (lam > 0 and math.isfinite(lam)):
        raise PreconditionError(f"second-derivative test needs lam > 0, got {lam}")
    if length < 0:
        raise PreconditionError(f"interval length must be >= 0, got {length}")
    return C * (length * math.sqrt(lam) + 1.0 / math.sqrt(lam))


def third_derivative_bound(length: float, lam: float, C: float = _C_DEFAULT) -> float:
    """C ((b-a) lam^(1/6) + lam^(-1/3)); needs lam > 0."""
    if not (lam > 0 and math.isfinite(lam)):
        raise PreconditionError(f"third-derivative test needs lam > 0, got {lam}")
    if length < 0:
        raise PreconditionError(f"interval length must be >= 0, got {length}")
    return C * (length * lam ** (1.0 / 6.0) + lam ** (-1.0 / 3.0))


def empirical_sum(pf: PhaseFunction) -> float:
    """|sum_{a < n <= b} e(f(n))| by direct evaluation."""
    n = pf.n_values()
    if n.size == 0:
        return 0.0
    r = np.mod(np.asarray(pf.f(n.astype(np.float64))), 1.0)
    z = np.exp((2j * math.pi) * r)
    return float(abs(z.sum()))


def compare(pf: PhaseFunction, kind: str = "second", C: float = _C_DEFAULT,
            samples: int = 1000) -> BoundReport:
    """Empirical |sum e(f(n))| against the derivative-test bound.

    lam is the geometric mean of the sampled |f''| (or |f'''|) bracket; a
    degenerate bracket (vanishing derivative somewhere) is a precondition
    failure since the tests assume one-signed curvature.
    """
    if kind not in ("second", "third"):
        raise PreconditionError(f"kind must be 'second' or 'third', got {kind!r}")
    order = 2 if kind == "second" else 3
    lo, hi = pf.bracket(order, samples)
    if lo <= 0.0:
        raise PreconditionError(
            f"|f^({order})| vanishes on the interval (bracket [{lo}, {hi}])")
    lam = math.sqrt(lo * hi)
    length = pf.b - pf.a
    bound = (second_derivative_bound(length, lam, C) if order == 2
             else third_derivative_bound(length, lam, C))
    emp = empirical_sum(pf)
    return BoundReport(kind, (pf.a, pf.b), lam, bound, emp, emp / bound, C,
                       (lo, hi), pf.label)


def square_out_check(z: np.ndarray, Q: int, X: float | None = None,
                     rel_tol: float = 1e-6):
    """Check the shift inequality for one sequence and shift cap Q.

    Returns (lhs, rhs, ok, imag_residual): lhs = |sum z|^2, rhs the weighted
    autocorrelation bound, ok = lhs <= rhs * (1 + rel_tol); imag_residual is
    the size of the imaginary part of the symmetrized correlation sum, which
    is zero in exact arithmetic.
    """
    z = np.asarray(z, dtype=np.complex128)
    N = z.size
    if N == 0:
        return 0.0, 0.0, True, 0.0
    if not (isinstance(Q, (int, np.integer)) and 1 <= Q):
        raise PreconditionError(f"need integer Q >= 1, got {Q!r}")
    X = float(N) if X is None else float(X)
    if X <= 0:
        raise PreconditionError(f"need X > 0, got {X}")

    lhs = abs(z.sum()) ** 2
    # full autocorrelation: corr[N-1+q] = sum_n z[n+q] conj(z[n])
    corr = np.correlate(z, z, mode="full")
    qs = np.arange(-(N - 1), N)
    w = np.clip(1.0 - np.abs(qs) / Q, 0.0, None)
    acc = complex((w * corr).sum())
    rhs = (1.0 + X / Q) * acc.real
    ok = lhs <= rhs * (1.0 + rel_tol) + 1e-12
    return float(lhs), float(rhs), bool(ok), abs(acc.imag)


def monomial_phase(theta: float, power: float, a: float, b: float,
                   label: str = "") -> PhaseFunction:
    """f(n) = theta * n^power with exact symbolic derivatives."""
    if not (theta != 0 and math.isfinite(theta)):
        raise PreconditionError(f"need finite nonzero theta, got {theta}")

    def f(n):
        return theta * n ** power

    def d2(n):
        return theta * power * (power - 1.0) * n ** (power - 2.0)

    def d3(n):
        return theta * power * (power - 1.0) * (power - 2.0) * n ** (power - 3.0)

    return PhaseFunction(f, a, b, d2, d3,
                         label or f"{theta:g}*n^{power:g} on ({a:g},{b:g}]")


def standard_sweep(C: float = _C_DEFAULT) -> list[BoundReport]:
    """The desk-scale (phase, interval) sweep used by the acceptance gate.

    Monomial families theta*n^2 (second test), theta*n^3 (third test) and
    theta*n^1.5 (both tests), 42 pairs in total.
    """
    reports = []
    for theta in (1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1):
        for N in (1000.0, 3000.0):
            reports.append(compare(monomial_phase(theta, 2.0, N, 2 * N), "second", C))
            reports.append(compare(monomial_phase(theta / N, 3.0, N, 2 * N), "third", C))
    for theta in (1e-3, 1e-2, 1e-1):
        for N in (1000.0, 5000.0):
            pf = monomial_phase(theta, 1.5, N, 2 * N)
            reports.append(compare(pf, "second", C))
            reports.append(compare(pf, "third", C))
    for theta in (0.5e-3, 2e-3):
        reports.append(compare(monomial_phase(theta, 1.5, 1000.0, 2000.0), "second", C))
    return reports
