"""Regenerate src/psexp/data/phase_reference.csv.

Independent oracle for {t * n^c}: mpmath at 200 bits, values printed with 30
significant digits.  The sampled (t, n, c) triples cover trivial cases, the
bulk range, perfect-power exactness, negative t, and magnitudes close to the
2^70 working cap.  Deterministic; run from the repository root:

    python tools/gen_phase_fixture.py
"""

import csv
import os
import random

from mpmath import mp, mpf, floor

mp.prec = 200

OUT = os.path.join(os.path.dirname(__file__), os.pardir,
                   "src", "psexp", "data", "phase_reference.csv")


def phase(t: float, n: int, c: float) -> mpf:
    v = mpf(t) * mpf(n) ** mpf(c)
    return v - floor(v)


def main() -> None:
    rng = random.Random(20220814)
    rows = []

    # hand-picked trivials and exactness probes
    rows += [
        (1.0, 2, 1.0), (0.5, 3, 1.0), (1.0, 4, 0.5), (1.0, 8, 1.0 / 3.0),
        (-0.25, 7, 1.0), (1.0, 10**6, 0.5), (2.0, 3, 2.0), (-1.0, 9, 0.5),
    ]
    # bulk range
    for _ in range(30):
        t = rng.uniform(-10.0, 10.0)
        n = rng.randrange(2, 10**7)
        c = rng.uniform(0.1, 1.6)
        rows.append((t, n, c))
    # large t, moderate n
    for _ in range(8):
        t = rng.uniform(-1e6, 1e6)
        n = rng.randrange(2, 10**4)
        c = rng.uniform(0.5, 1.5)
        rows.append((t, n, c))
    # near the 2^70 cap: t * n^c in [2^64, 2^69.8]
    for _ in range(10):
        n = rng.randrange(10**8, 10**9)
        c = rng.uniform(1.7, 2.0)
        target = 2.0 ** rng.uniform(64, 69.8)
        t = target / float(mpf(n) ** mpf(c))
        if abs(t) > 1e6:
            continue
        v = mpf(t) * mpf(n) ** mpf(c)
        if abs(v) >= 2**70:
            continue
        rows.append((t, n, c))

    with open(OUT, "w", newline="") as fh:
        w = csv.writer(fh)
        fh.write("# {t * n^c} reference values, mpmath 200-bit, 30 significant digits\n")
        w.writerow(["t", "n", "c", "frac"])
        for t, n, c in rows:
            w.writerow([repr(float(t)), n, repr(float(c)),
                        mp.nstr(phase(float(t), n, float(c)), 30, strip_zeros=False)])
    print(f"wrote {len(rows)} rows to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
