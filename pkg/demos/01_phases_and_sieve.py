"""Exact phase reduction and floor-sequence primes.

The sums downstream need the fractional part of t * n^c for n up to 1e7 or
so.  Plain double arithmetic loses the fractional part long before that:
at n = 1e9 the value 0.5 * n^1.9 is ~6e16, where one ulp is ~7.  The
double-double path keeps the phase exact until |t n^c| reaches 2^70.
"""

import math

from psexp import sieve
from psexp.numerics import e_of, phase_mod1

n, t, c = 10 ** 9, 0.5, 1.9
naive = (t * float(n) ** c) % 1.0
exact = phase_mod1(t, n, c)
print(f"t n^c at n = {n:g}, c = {c}: value ~ {t * float(n) ** c:.3e}")
print(f"  naive float frac  : {naive:.15f}")
print(f"  double-double frac: {exact:.15f}")
print(f"  e(frac) on the unit circle: {complex(e_of(exact)):.6f}")
print()

# [n^(1/gamma)] hits about x^gamma integers below x; membership is decided
# per candidate, either scalar or vectorized over a prime table
gamma = 0.9
ps = sieve.primes_up_to(200)
members = [int(p) for p in ps[sieve.ps_mask(ps, gamma)]]
print(f"primes p <= 200 of the form [n^(1/{gamma})]: {members}")

x = 100_000
ps = sieve.primes_up_to(x)
count = int(sieve.ps_mask(ps, 0.95).sum())
print(f"counts at x = {x:g}, gamma = 0.95: {len(ps)} primes, "
      f"{count} floor-sequence primes "
      f"(density ~ x^(gamma-1) = {x ** -0.05:.3f})")
print()

# segmented sieving gives the same tables as one monolithic pass
whole = sieve.sieve_range(1, 30_000)
joined = []
for seg in sieve.iter_segments(1, 30_000, segment=7_000):
    joined.extend(seg.lam)
drift = max(abs(a - b) for a, b in zip(whole.lam, joined))
print(f"segmented vs monolithic Lambda table on [1, 30000]: "
      f"max difference {drift:g}, pi = {sieve.primes_up_to(30_000).size}")
