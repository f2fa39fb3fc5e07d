"""From the von Mangoldt identity to classified bilinear blocks.

hb_identity_value(n, J, z) reproduces Lambda(n) exactly once z >= n^(1/J);
grouping the resulting convolutions over dyadic boxes M x L and sorting each
box by where its long variable L falls relative to the cutoffs U, V, Z is
what turns a prime sum into Type I / Type II estimates.
"""

import math

from psexp import heathbrown, sieve
from psexp.numerics import Parameters

tab = sieve.sieve_range(0, 5000)
for n in (97, 64, 360, 4913):
    got = heathbrown.hb_identity_value(n, 3, n ** (1.0 / 3.0))
    lam = float(tab.lam[n - 1])
    print(f"n = {n:<6} identity = {got:.12f}   Lambda = {lam:.12f}")
print()

x, c = 2.0 ** 40, 1.2
rep = heathbrown.uvz_preconditions(x, c)
w = rep.windows
print(f"window cutoffs at x = 2^40, c = {c}:")
print(f"  U = {w.U:.6g}   V = {w.V:.6g}   Z = {w.Z:.6g}   ({rep.ordering})")
print(f"  exponent identities exact: {rep.identities_ok}")
for name, (ok, slack) in rep.conditions.items():
    print(f"  {name}: holds={ok}, slack ratio {slack:.3g}")
print(f"  full chain 2 <= U < V <= Z <= x/2: {rep.chain_ok}")
print(f"  minimal x per link: " + ", ".join(
    f"{k} ~ {v:.3g}" for k, v in rep.thresholds.items()))
print()

rows = heathbrown.classification_map(x, c)
kinds = [r[-1] for r in rows]
print(f"dyadic boxes L = 1, 2, 4, ... {len(rows)} in all: "
      f"{kinds.count('type_ii')} type II, {kinds.count('type_i')} type I, "
      f"{kinds.count('unclassified')} unclassified")
print()

# one Type II block evaluated directly over its box
box = heathbrown.DyadicBox(20, 40, 30, 60)
p = Parameters(x=3000.0, c=1.1, gamma=0.9, t=0.5, d=5, a=1)
val = heathbrown.type_sums(box, 2, p, k=1, variant="SI")
print(f"S_I over M in (20,40], L in (30,60], H = 2, window (1500, 3000]: "
      f"{val:.6f}")
