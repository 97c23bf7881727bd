import json
import math

import numpy as np
import pytest

from hlmlab import arith, counting, linsys


def oracle_ap_count(table, N, k):
    """Literal (p1, d) double loop, the independent counting oracle."""
    isp = table.is_prime
    count = 0
    for p1 in range(2, N + 1):
        if not isp[p1]:
            continue
        for d in range(1, (N - p1) // (k - 1) + 1):
            if all(isp[p1 + j * d] for j in range(1, k)):
                count += 1
    return count


def test_count_ap_primes_frozen_examples(table_1e4):
    assert counting.count_ap_primes(table_1e4, 20, 3) == 5
    assert counting.count_ap_primes(table_1e4, 10, 3) == 1
    assert counting.count_ap_primes(table_1e4, 23, 4) == 1
    assert counting.count_ap_primes(table_1e4, 20, 4) == 0


def test_count_ap_primes_matches_oracle(table_1e4):
    for N in (100, 500, 1000):
        for k in (3, 4, 5):
            assert counting.count_ap_primes(table_1e4, N, k) == oracle_ap_count(
                table_1e4, N, k
            )


def test_count_monotone_increments_at_primes(table_1e4):
    prev = counting.count_ap_primes(table_1e4, 9, 3)  # (3,5,7) is already there
    for N in range(10, 301):
        cur = counting.count_ap_primes(table_1e4, N, 3)
        assert cur >= prev
        if cur > prev:
            assert table_1e4.is_prime[N]
        prev = cur


def test_count_validation(table_1e4):
    with pytest.raises(ValueError):
        counting.count_ap_primes(table_1e4, 10, 2)
    with pytest.raises(ValueError):
        counting.count_ap_primes(table_1e4, 10**5, 3)


def test_weighted_fft_equals_bruteforce(table_1e4):
    for N in (50, 500, 2000):
        fast = counting.weighted_ap_average(table_1e4, N, 3)
        slow = counting.weighted_ap_average_bruteforce(table_1e4, N)
        assert fast == pytest.approx(slow, rel=1e-9)


def test_weighted_zero_weights():
    N = 200
    zero = arith.ArithTable(
        limit=N,
        is_prime=np.zeros(N + 1, dtype=bool),
        mobius=np.zeros(N + 1, dtype=np.int8),
        vonmangoldt=np.zeros(N + 1),
    )
    assert counting.weighted_ap_average(zero, N, 3) == 0.0
    assert counting.weighted_ap_average(zero, N, 4) == 0.0


def test_weighted_3ap_converges_to_singular_series(table_1e6):
    target = 4 * linsys.closed_form_S3(10**6)
    r5 = counting.weighted_ap_average(table_1e6, 10**5, 3) / target
    r4 = counting.weighted_ap_average(table_1e6, 10**4, 3) / target
    assert abs(r5 - 1) < abs(r4 - 1)
    assert abs(r5 - 1) < 0.1


def test_weighted_4ap_tracks_its_series(table_1e6):
    # S(A4) = 6 * S4 ~ 2.858; moderate N sits within ~15 percent
    avg = counting.weighted_ap_average(table_1e6, 3 * 10**4, 4)
    assert avg == pytest.approx(6 * linsys.closed_form_S4(10**4), rel=0.15)


def test_generic_count_matches_ap_counter(table_1e4):
    report = counting.generic_count(table_1e4, linsys.AP3, 20, mode="exact")
    assert report.extra["symmetry"] == 2
    assert report.extra["up_to_symmetry"] == 5.0
    assert report.observed == 2 * 5 + 8  # ordered: both orientations + 8 constant APs
    r4 = counting.generic_count(table_1e4, linsys.AP4, 2000, mode="exact")
    assert r4.extra["up_to_symmetry"] == counting.count_ap_primes(table_1e4, 2000, 4)


def test_generic_count_balog_equals_3ap(table_1e4):
    balog = linsys.new_system([[1, 1, -2]])
    a = counting.generic_count(table_1e4, balog, 50, mode="exact")
    b = counting.generic_count(table_1e4, linsys.AP3, 50, mode="exact")
    assert a.observed == b.observed
    assert a.extra["distinct"] == b.extra["distinct"]


def test_generic_count_montecarlo(table_1e4):
    exact = counting.generic_count(table_1e4, linsys.AP3, 10**4, mode="exact")
    mc = counting.generic_count(
        table_1e4, linsys.AP3, 10**4, mode="montecarlo", samples=10**6, seed=11
    )
    assert mc.method == "montecarlo" and mc.seed == 11
    assert mc.observed == pytest.approx(exact.observed, rel=0.05)


def test_generic_count_prediction_quality(table_1e4):
    report = counting.generic_count(table_1e4, linsys.AP3, 10**4, mode="exact")
    assert report.ratio == pytest.approx(1.0, abs=0.15)


def test_generic_count_validation(table_1e4):
    wide = linsys.new_system([[1, 1, 1, -1, -2]])  # t - s = 4
    with pytest.raises(counting.FreeRankTooLarge):
        counting.generic_count(table_1e4, wide, 100, mode="exact")
    with pytest.raises(ValueError):
        counting.generic_count(table_1e4, linsys.AP3, 100, mode="montecarlo", samples=10)
    with pytest.raises(ValueError):
        counting.generic_count(table_1e4, linsys.AP3, 100, mode="bogus")


def test_prediction_values():
    n = 10**5
    assert counting.prediction(3, n) == pytest.approx(
        linsys.closed_form_S3(10**6) * n**2 / math.log(n) ** 3
    )
    assert counting.prediction(4, n) == pytest.approx(
        linsys.closed_form_S4(10**6) * n**2 / math.log(n) ** 4
    )
    assert counting.prediction(linsys.new_system([[1, 9, -27]]), n) == 0.0
    with pytest.raises(ValueError):
        counting.prediction(3, 50)
    with pytest.raises(ValueError):
        counting.prediction(6, 10**4)


def test_count_report_serialization(table_1e4):
    report = counting.ap_count_report(table_1e4, 1000, 3)
    data = json.loads(report.to_json())
    for key in ("descriptor", "N", "observed", "predicted", "ratio", "method", "seed"):
        assert key in data
    assert data["method"] == "direct"
    assert data["observed"] == 1500.0
    weighted = counting.weighted_ap_report(table_1e4, 2000, 3)
    assert json.loads(weighted.to_json())["method"] == "fft"
