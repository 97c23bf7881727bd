import math

import numpy as np
import pytest

from hlmlab import arith


def trial_division_mu(n: int) -> int:
    """Independent Mobius oracle by literal factorization."""
    if n == 1:
        return 1
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def test_mobius_first_ten(table_1e4):
    assert table_1e4.mobius[1:11].tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert table_1e4.mobius[1:11].sum() == -1


def test_mobius_against_factorization_oracle(table_1e4):
    for n in range(1, 10**4 + 1):
        assert table_1e4.mobius[n] == trial_division_mu(n), n


def test_mobius_divisor_sums_vanish(table_1e4):
    N = 10**4
    sums = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        sums[d::d] += table_1e4.mobius[d]
    assert sums[1] == 1
    assert (sums[2:] == 0).all()


def test_vonmangoldt_prime_power_values(table_1e4):
    assert table_1e4.vonmangoldt[8] == np.log(2.0)
    assert table_1e4.vonmangoldt[1] == 0.0
    # Lambda(p^k) is the same float as Lambda(p), exactly
    for p in (2, 3, 5, 7, 11, 31, 97):
        pk = p
        while pk <= 10**4:
            assert table_1e4.vonmangoldt[pk] == table_1e4.vonmangoldt[p]
            pk *= p
    # nonzero exactly at prime powers
    nz = np.nonzero(table_1e4.vonmangoldt)[0]
    for n in nz[:200]:
        m = int(n)
        smallest = next(d for d in range(2, m + 1) if m % d == 0)
        while m % smallest == 0:
            m //= smallest
        assert m == 1, f"{n} is not a prime power"


def test_vonmangoldt_divisor_sums_give_log(table_1e4):
    N = 10**4
    sums = np.zeros(N + 1)
    for d in range(1, N + 1):
        sums[d::d] += table_1e4.vonmangoldt[d]
    n = np.arange(1, N + 1)
    assert np.abs(sums[1:] - np.log(n)).max() < 1e-9


def test_prime_number_theorem_scale(table_1e6):
    mean = table_1e6.vonmangoldt[1:].mean()
    assert abs(mean - 1.0) <= 0.01


def test_chebyshev_band_everywhere_beyond_1e5(table_1e6):
    psi = np.cumsum(table_1e6.vonmangoldt[1:])
    n = np.arange(1, 10**6 + 1)
    ratios = psi[10**5 - 1 :] / n[10**5 - 1 :]
    assert ratios.min() >= 0.9 and ratios.max() <= 1.1


def test_mertens_inequality(table_1e6):
    m = np.cumsum(table_1e6.mobius[1:].astype(np.int64))
    n = np.arange(1, 10**6 + 1)
    assert (np.abs(m[9:]) <= n[9:] / 2).all()


def test_rebuild_is_bit_identical(table_1e4):
    again = arith.build_table(10**4)
    assert np.array_equal(table_1e4.is_prime, again.is_prime)
    assert np.array_equal(table_1e4.mobius, again.mobius)
    assert table_1e4.vonmangoldt.tobytes() == again.vonmangoldt.tobytes()


def test_capacity_cap():
    with pytest.raises(arith.CapacityError):
        arith.build_table(10**6, limit_cap=10**5)
    with pytest.raises(ValueError):
        arith.build_table(0)


def test_w_trick_single_value(table_1e4):
    params = arith.WTrickParams.create(2, 1)
    seq = arith.w_trick(table_1e4, params, 10)
    assert seq[0] == pytest.approx(math.log(3) / 2, abs=1e-12)  # n=1 -> Lambda(3)/2


def test_w_trick_mean_near_one(table_1e6):
    params = arith.WTrickParams.create(6, 1)
    seq = arith.w_trick(table_1e6, params, 10**5)
    assert abs(seq.mean() - 1.0) <= 0.05


def test_w_trick_rejections(table_1e4):
    with pytest.raises(ValueError, match="coprime"):
        arith.WTrickParams.create(6, 4)
    with pytest.raises(ValueError, match="squarefree"):
        arith.WTrickParams.create(12, 1)
    params = arith.WTrickParams.create(6, 1)
    with pytest.raises(ValueError, match="table limit"):
        arith.w_trick(table_1e4, params, 10**4)


def test_w_trick_default_params():
    params = arith.default_w_params()
    assert params.W == 30 and params.b == 1
    assert params.scale == pytest.approx((1 / 2) * (2 / 3) * (4 / 5))


def test_balanced_function_cases():
    full = arith.balanced_function(np.ones(10, dtype=bool))
    assert np.abs(full).max() == 0.0
    empty = arith.balanced_function(np.zeros(7, dtype=bool))
    assert np.abs(empty).max() == 0.0
    evens = arith.balanced_function((np.arange(1, 11) % 2 == 0))
    assert np.abs(evens - np.where(np.arange(1, 11) % 2 == 0, 0.5, -0.5)).max() < 1e-12
    rng = np.random.default_rng(0)
    f = arith.balanced_function(rng.uniform(size=1000) < 0.3)
    assert abs(f.sum()) <= 1e-9 * 1000
    with pytest.raises(ValueError):
        arith.balanced_function(np.array([]))


def test_dump_load_roundtrip(tmp_path, table_1e4):
    path = tmp_path / "table.bin"
    arith.dump_table(table_1e4, path)
    raw = path.read_bytes()
    assert raw[:4] == b"HLM1"
    assert int.from_bytes(raw[4:12], "little") == 10**4
    back = arith.load_table(path)
    assert back.limit == table_1e4.limit
    assert np.array_equal(back.is_prime, table_1e4.is_prime)
    assert np.array_equal(back.mobius, table_1e4.mobius)
    assert back.vonmangoldt.tobytes() == table_1e4.vonmangoldt.tobytes()


def test_load_rejects_corruption(tmp_path, table_1e4):
    path = tmp_path / "t.bin"
    arith.dump_table(table_1e4, path)
    data = bytearray(path.read_bytes())
    bad = tmp_path / "bad_magic.bin"
    bad.write_bytes(b"XXXX" + bytes(data[4:]))
    with pytest.raises(ValueError, match="magic"):
        arith.load_table(bad)
    short = tmp_path / "short.bin"
    short.write_bytes(bytes(data[:-5]))
    with pytest.raises(ValueError, match="payload"):
        arith.load_table(short)
