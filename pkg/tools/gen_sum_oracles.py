#!/usr/bin/env python3
"""Regenerate tests/data/sum_oracles.json.

Every value here is computed from scratch with mpmath at 50 digits and plain
trial division, deliberately importing nothing from psexp, so the test suite
compares two codebases that share no arithmetic.  Runtime is about a minute.
"""

import json
import math
import os

import mpmath as mp

mp.mp.dps = 50

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data",
                   "sum_oracles.json")


def primes_up_to(n):
    mask = bytearray([1]) * (n + 1)
    mask[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p:: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(2, n + 1) if mask[i]]


def mangoldt(n):
    if n < 2:
        return mp.mpf(0)
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return mp.log(p) if n == 1 else mp.mpf(0)
    return mp.log(n)


def e(y):
    return mp.e ** (2j * mp.pi * mp.frac(y))


def psi_neg(y):
    # psi(-y) = {-y} - 1/2
    return mp.frac(-y) - mp.mpf(1) / 2


def c_str(z):
    return [mp.nstr(z.real, 17), mp.nstr(z.imag, 17)]


oracles = {}

# --- PS-prime count by forward enumeration: mark [n^(1/gamma)] ---------------
x, gamma = 10 ** 5, mp.mpf("0.95")
marks = set()
n = 1
while True:
    p = int(mp.floor(mp.mpf(n) ** (1 / gamma)))
    if p > x:
        break
    marks.add(p)
    n += 1
ps = set(primes_up_to(x))
oracles["ps_count"] = {
    "x": x, "gamma": "0.95", "count": len(marks & ps),
}

# --- pi(x,d,a,t,c) at x = 1e4 ------------------------------------------------
t, c = mp.mpf("0.5"), mp.mpf("1.1")
acc = mp.mpc(0)
plist = [p for p in primes_up_to(10 ** 4) if p % 3 == 1]
for p in plist:
    acc += e(t * mp.mpf(p) ** c)
oracles["pi_sum"] = {
    "x": 10 ** 4, "d": 3, "a": 1, "t": "0.5", "c": "1.1",
    "n_terms": len(plist), "value": c_str(acc),
}

# --- Gamma_1 / Gamma_2 / pi_gamma at x = 100, gamma = 0.9, t = 0 -------------
g = mp.mpf("0.9")
g1 = mp.mpf(0)
g2 = mp.mpf(0)
cnt = 0
for p in primes_up_to(100):
    yp, yp1 = mp.mpf(p) ** g, mp.mpf(p + 1) ** g
    g1 += yp1 - yp
    g2 += psi_neg(yp1) - psi_neg(yp)
    cnt += int(mp.floor(-yp) - mp.floor(-yp1))
oracles["gamma12"] = {
    "x": 100, "gamma": "0.9",
    "gamma1": mp.nstr(g1, 17), "gamma2": mp.nstr(g2, 17), "pi_gamma": cnt,
}

# --- closed-form main term at x = 1e4 ----------------------------------------
g, t, c = mp.mpf("0.9"), mp.mpf("0.5"), mp.mpf("1.1")
acc = mp.mpc(0)
for p in plist:
    acc += mp.mpf(p) ** (g - 1) * e(t * mp.mpf(p) ** c)
oracles["rhs_main"] = {
    "x": 10 ** 4, "d": 3, "a": 1, "t": "0.5", "c": "1.1", "gamma": "0.9",
    "value": c_str(g * acc),
}

# --- pi_gamma at x = 1e4 (theorem left side) ---------------------------------
g, t, c = mp.mpf("0.95"), mp.mpf("0.5"), mp.mpf("1.1")
acc = mp.mpc(0)
cnt = 0
for p in plist:
    ind = int(mp.floor(-mp.mpf(p) ** g) - mp.floor(-mp.mpf(p + 1) ** g))
    if ind:
        acc += e(t * mp.mpf(p) ** c)
        cnt += 1
oracles["pi_gamma_sum"] = {
    "x": 10 ** 4, "d": 3, "a": 1, "t": "0.5", "c": "1.1", "gamma": "0.95",
    "n_terms": cnt, "value": c_str(acc),
}

# --- Gamma_5 at x = 1e4 -------------------------------------------------------
g, t, c = mp.mpf("0.95"), mp.mpf("0.5"), mp.mpf("1.1")
acc = mp.mpc(0)
for n in range(5001, 10 ** 4 + 1):
    if n % 3 != 1:
        continue
    lam = mangoldt(n)
    if lam == 0:
        continue
    w = psi_neg(mp.mpf(n + 1) ** g) - psi_neg(mp.mpf(n) ** g)
    acc += lam * w * e(t * mp.mpf(n) ** c)
oracles["gamma5"] = {
    "x": 10 ** 4, "d": 3, "a": 1, "t": "0.5", "c": "1.1", "gamma": "0.95",
    "value": c_str(acc),
}

# --- Gamma_3 vs Gamma_4 at x = 1e4 --------------------------------------------
g3 = mp.mpc(0)
for p in plist:
    w = psi_neg(mp.mpf(p + 1) ** g) - psi_neg(mp.mpf(p) ** g)
    g3 += mp.log(p) * w * e(t * mp.mpf(p) ** c)
g4 = mp.mpc(0)
for n in range(2, 10 ** 4 + 1):
    if n % 3 != 1:
        continue
    lam = mangoldt(n)
    if lam == 0:
        continue
    w = psi_neg(mp.mpf(n + 1) ** g) - psi_neg(mp.mpf(n) ** g)
    g4 += lam * w * e(t * mp.mpf(n) ** c)
oracles["gamma34"] = {
    "x": 10 ** 4, "d": 3, "a": 1, "t": "0.5", "c": "1.1", "gamma": "0.95",
    "gamma3": c_str(g3), "gamma4": c_str(g4),
    "gap": mp.nstr(abs(g3 - g4), 17),
}

# --- Gamma_11 at x = 1e4, H = 4 -----------------------------------------------
g = mp.mpf("0.9")
lam_tab = {n: mangoldt(n) for n in range(5001, 10 ** 4 + 1)}
total = mp.mpf(0)
for h in (1, -1, 2, -2, 3, -3, 4, -4):
    acc = mp.mpc(0)
    for n, lam in lam_tab.items():
        if lam == 0:
            continue
        acc += lam * e(-h * mp.mpf(n) ** g)
    total += abs(acc)
oracles["gamma11"] = {
    "x": 10 ** 4, "H": 4, "d": 1, "a": 0, "gamma": "0.9",
    "value": mp.nstr(total, 17),
}

# --- weighted Lambda sum at x = 1e4, h = 1, k = 1, d = 5 ----------------------
g, t, c = mp.mpf("0.9"), mp.mpf("0.5"), mp.mpf("1.1")
acc = mp.mpc(0)
for n, lam in lam_tab.items():
    if lam == 0:
        continue
    acc += lam * e(t * mp.mpf(n) ** c + mp.mpf(n) ** g + mp.mpf(n) / 5)
oracles["weighted_lambda"] = {
    "x": 10 ** 4, "x1": 10 ** 4, "h": 1, "k": 1, "d": 5,
    "t": "0.5", "c": "1.1", "gamma": "0.9", "value": c_str(acc),
}

os.makedirs(os.path.dirname(OUT), exist_ok=True)
with open(OUT, "w") as fh:
    json.dump(oracles, fh, indent=1)
print("wrote", os.path.normpath(OUT))
for k, v in oracles.items():
    print(f"  {k}: {v}")
