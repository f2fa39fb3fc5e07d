"""Sieve tables, arithmetic functions, floor-sequence membership, cache."""

import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psexp import sieve
from psexp.errors import PreconditionError

PI_KNOWN = {100: 25, 10 ** 4: 1229, 10 ** 6: 78498}


# ---------------------------------------------------------------------------
# plain and segmented sieving

def test_prime_counts_match_tables():
    for x, count in PI_KNOWN.items():
        assert len(sieve.primes_up_to(x)) == count


def test_first_primes():
    assert list(sieve.primes_up_to(11)) == [2, 3, 5, 7, 11]
    assert sieve.primes_up_to(1).size == 0


def test_sieve_range_matches_whole_interval():
    whole = sieve.sieve_range(0, 3000)
    ps = set(sieve.primes_up_to(3000).tolist())
    assert set(whole.primes().tolist()) == ps
    # index i holds n = lo + 1 + i
    assert whole.n_values()[0] == 1 and whole.n_values()[-1] == 3000


def test_sieve_range_offset_window():
    t = sieve.sieve_range(100, 200)
    expect = [p for p in sieve.primes_up_to(200) if p > 100]
    assert list(t.primes()) == expect


def test_sieve_range_rejects_bad_bounds():
    with pytest.raises(PreconditionError):
        sieve.sieve_range(10, 10)
    with pytest.raises(PreconditionError):
        sieve.sieve_range(-1, 10)


def test_von_mangoldt_small_values():
    t = sieve.sieve_range(0, 30)
    lam = {int(n): v for n, v in zip(t.n_values(), t.lam)}
    assert lam[1] == 0.0
    assert lam[8] == pytest.approx(math.log(2), abs=1e-15)
    assert lam[27] == pytest.approx(math.log(3), abs=1e-15)
    assert lam[13] == pytest.approx(math.log(13), abs=1e-15)
    assert lam[12] == 0.0 and lam[30] == 0.0


def test_mobius_small_values():
    t = sieve.sieve_range(0, 30)
    mu = {int(n): int(v) for n, v in zip(t.n_values(), t.mu)}
    assert mu[1] == 1 and mu[2] == -1 and mu[4] == 0
    assert mu[6] == 1 and mu[30] == -1 and mu[9] == 0


@given(st.integers(min_value=2, max_value=400))
def test_lambda_sums_to_log_over_divisors(n):
    t = sieve.sieve_range(0, n)
    total = sum(float(t.lam[d - 1]) for d in range(1, n + 1) if n % d == 0)
    assert total == pytest.approx(math.log(n), abs=1e-9)


@given(st.integers(min_value=1, max_value=400))
def test_mobius_sums_to_unit_indicator(n):
    t = sieve.sieve_range(0, n)
    total = sum(int(t.mu[d - 1]) for d in range(1, n + 1) if n % d == 0)
    assert total == (1 if n == 1 else 0)


def test_segments_concatenate_to_whole_range():
    parts = list(sieve.iter_segments(0, 10000, segment=977, mobius=True))
    assert parts[0].lo == 0 and parts[-1].hi == 10000
    whole = sieve.sieve_range(0, 10000)
    assert np.array_equal(np.concatenate([p.is_prime for p in parts]),
                          whole.is_prime)
    assert np.array_equal(np.concatenate([p.mu for p in parts]), whole.mu)
    assert np.max(np.abs(np.concatenate([p.lam for p in parts]) - whole.lam)) == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2000),
       st.integers(min_value=2, max_value=997))
def test_segment_split_invariance(lo, seg):
    hi = lo + 1500
    parts = list(sieve.iter_segments(lo, hi, segment=seg))
    got = np.concatenate([p.is_prime for p in parts])
    assert np.array_equal(got, sieve.sieve_range(lo, hi).is_prime)


def test_iter_segments_rejects_tiny_segment():
    with pytest.raises(PreconditionError):
        list(sieve.iter_segments(0, 10, segment=1))


# ---------------------------------------------------------------------------
# arithmetic functions

def test_tau_2_counts_divisors():
    t = sieve.tau_k(40, 2)
    assert t[1] == 1 and t[12] == 6 and t[36] == 9
    naive = [sum(1 for d in range(1, n + 1) if n % d == 0) for n in range(1, 41)]
    assert list(t[1:]) == naive


def test_tau_3_counts_ordered_triples():
    t = sieve.tau_k(10, 3)
    assert t[1] == 1 and t[4] == 6 and t[8] == 10


def test_tau_k_rejects_bad_input():
    with pytest.raises(PreconditionError):
        sieve.tau_k(10, 0)


def test_euler_phi_known_values():
    assert sieve.euler_phi(1) == 1
    assert sieve.euler_phi(10) == 4
    assert sieve.euler_phi(97) == 96
    assert sieve.euler_phi(360) == 96
    with pytest.raises(PreconditionError):
        sieve.euler_phi(0)


def test_primes_in_ap_matches_filter():
    got = sieve.primes_in_ap(100, 4, 1)
    want = [p for p in sieve.primes_up_to(100) if p % 4 == 1]
    assert list(got) == want
    assert list(sieve.primes_in_ap(10, 1, 0)) == [2, 3, 5, 7]
    with pytest.raises(PreconditionError):
        sieve.primes_in_ap(100, 6, 3)


# ---------------------------------------------------------------------------
# floor-sequence membership

def test_gamma_one_accepts_everything():
    assert sieve.is_ps_prime(17, 1.0)
    assert sieve.ps_mask(np.arange(1, 50), 1.0).all()


def test_membership_matches_forward_enumeration():
    # the floor-sequence {[n^(1/g)]} built directly at 50 digits must produce
    # exactly the accepted set; gamma means its exact dyadic float value here
    # as everywhere else in the package
    import mpmath as mp

    N, g = 500, 0.8
    with mp.workdps(50):
        inv_g = 1 / mp.mpf(g)
        members = set()
        n = 1
        while True:
            p = int(mp.floor(mp.mpf(n) ** inv_g))
            if p > N:
                break
            members.add(p)
            n += 1
    for p in range(1, N + 1):
        assert sieve.is_ps_prime(p, g) == (p in members), p


def test_mask_agrees_with_scalar_path():
    n = sieve.primes_up_to(20000)
    mask = sieve.ps_mask(n, 0.9)
    scattered = n[::97]
    for p in scattered:
        assert sieve.is_ps_prime(int(p), 0.9) == bool(mask[np.searchsorted(n, p)])


def test_membership_count_matches_frozen_oracle(oracles):
    ref = oracles["ps_count"]
    gamma = float(ref["gamma"])
    ps = sieve.primes_up_to(ref["x"])
    assert int(sieve.ps_mask(ps, gamma).sum()) == ref["count"]


def test_membership_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        sieve.is_ps_prime(0, 0.9)
    with pytest.raises(PreconditionError):
        sieve.is_ps_prime(5, 1.5)
    with pytest.raises(PreconditionError):
        sieve.ps_mask(np.array([0, 3]), 0.9)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=10 ** 6))
def test_membership_scalar_vector_agreement(p):
    assert sieve.ps_mask(np.array([p]), 0.95)[0] == sieve.is_ps_prime(p, 0.95)


# ---------------------------------------------------------------------------
# binary segment cache

def test_cache_round_trip(tmp_path):
    table = sieve.sieve_range(500, 1500, mobius=False)
    path = sieve.write_segment(str(tmp_path), table)
    bits = sieve.read_segment(str(tmp_path), 500, 1500)
    assert path.endswith("seg_500_1500.bits")
    assert np.array_equal(bits, table.is_prime)


def test_cache_detects_key_mismatch(tmp_path):
    table = sieve.sieve_range(0, 100, mobius=False)
    path = sieve.write_segment(str(tmp_path), table)
    os.rename(path, sieve.segment_cache_path(str(tmp_path), 0, 128))
    with pytest.raises(PreconditionError):
        sieve.read_segment(str(tmp_path), 0, 128)


def test_cache_detects_truncation(tmp_path):
    table = sieve.sieve_range(0, 1000, mobius=False)
    path = sieve.write_segment(str(tmp_path), table)
    raw = open(path, "rb").read()
    with open(path, "wb") as fh:
        fh.write(raw[: len(raw) - 3])
    with pytest.raises(PreconditionError):
        sieve.read_segment(str(tmp_path), 0, 1000)


def test_cached_segments_reproduce_uncached_tables(tmp_path):
    direct = [t.is_prime for t in sieve.iter_segments(0, 5000, segment=1024)]
    cached = [t.is_prime
              for t in sieve.iter_segments(0, 5000, segment=1024,
                                           cache_dir=str(tmp_path))]
    rereads = [t.is_prime
               for t in sieve.iter_segments(0, 5000, segment=1024,
                                            cache_dir=str(tmp_path))]
    for a, b, c in zip(direct, cached, rereads):
        assert np.array_equal(a, b) and np.array_equal(a, c)
