import csv
import math

import numpy as np
import pytest

from hlmlab import nilseq
from hlmlab.nilseq import ORIGIN, HeisenbergElement, HeisenbergPoint


def circle_gap(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def test_frac_conventions():
    assert nilseq.frac_half(0.5) == 0.5
    assert nilseq.frac_half(-0.5) == 0.5
    assert nilseq.frac_half(0.3) == pytest.approx(0.3)
    assert nilseq.frac_half(0.7) == pytest.approx(-0.3)
    assert nilseq.nearest_int(0.5) == 0.0  # halves round down
    assert nilseq.nearest_int(1.5) == 1.0
    assert nilseq.nearest_int(-0.5) == -1.0
    assert nilseq.nearest_int(2.3) == 2.0


def test_reduce_examples():
    p = nilseq.reduce_point(0.2, 0.3, 0.1)
    assert (p.x, p.y, p.z) == (0.2, 0.3, 0.1)
    p = nilseq.reduce_point(0.5, 0.0, 1.0)
    assert (p.x, p.y, p.z) == (0.5, 0.5, 0.0)


def test_reduce_idempotent(rng):
    for _ in range(10**4):
        raw = rng.uniform(-10, 10, 3)
        p = nilseq.reduce_point(*raw)
        q = nilseq.reduce_point(p.x, p.y, p.z)
        assert (p.x, p.y, p.z) == (q.x, q.y, q.z)
        assert 0 <= p.x < 1 and 0 <= p.y < 1 and -0.5 < p.z <= 0.5


def test_shift_degenerate_cases():
    p = HeisenbergPoint(0.3, 0.4, 0.2)
    q = nilseq.shift(HeisenbergElement(0, 0, 0), p)
    assert (q.x, q.y, q.z) == (0.3, 0.4, 0.2)
    alpha = math.sqrt(2)
    q = nilseq.shift(HeisenbergElement(alpha, 0, 0), ORIGIN)
    assert q.x == pytest.approx(alpha - 1) and q.y == 0 and q.z == 0


def test_closed_form_matches_iteration(rng):
    for _ in range(10):
        g = HeisenbergElement(*rng.uniform(-2, 2, 3))
        p = ORIGIN
        for n in range(1, 1001):
            p = nilseq.shift(g, p)
            if n in (1, 2, 3, 10, 100, 1000):
                c = nilseq.closed_form_orbit(g, n)
                assert circle_gap(p.x, c.x) < 1e-8
                assert circle_gap(p.y, c.y) < 1e-8
                assert circle_gap(p.z, c.z) < 1e-8


def test_closed_form_specific_element():
    g = HeisenbergElement(math.sqrt(2), 0.0, math.sqrt(3))
    p = ORIGIN
    for _ in range(100):
        p = nilseq.shift(g, p)
    c = nilseq.closed_form_orbit(g, 100)
    assert circle_gap(p.x, c.x) < 1e-9
    assert circle_gap(p.y, c.y) < 1e-9
    assert circle_gap(p.z, c.z) < 1e-9


def test_closed_form_degenerations():
    c = nilseq.closed_form_orbit(HeisenbergElement(0.3, 0.4, 0.5), 0)
    assert (c.x, c.y, c.z) == (0.0, 0.0, 0.0)
    beta = math.pi / 7
    c = nilseq.closed_form_orbit(HeisenbergElement(0.4, beta, 0.0), 9)
    assert c.y == pytest.approx((9 * beta) % 1.0, abs=1e-12)  # torus rotation
    assert c.z == 0.0
    with pytest.raises(ValueError):
        nilseq.closed_form_orbit(HeisenbergElement(0, 0, 0), -1)


def test_orbit_array_matches_scalar_iteration(rng):
    g = HeisenbergElement(math.sqrt(2), 0.1, math.sqrt(3))
    for start in (ORIGIN, HeisenbergPoint(0.3, 0.7, 0.25)):
        arr = nilseq.orbit_array(g, start, 800)
        p = start
        for n in range(800):
            p = nilseq.shift(g, p)
            assert circle_gap(p.x, arr[n, 0]) < 1e-8
            assert circle_gap(p.y, arr[n, 1]) < 1e-8
            assert circle_gap(p.z, arr[n, 2]) < 1e-8


def test_abelian_degeneration_exact(rng):
    beta = 1 / math.e
    for g in (HeisenbergElement(0.0, beta, 0.77), HeisenbergElement(0.77, beta, 0.0)):
        arr = nilseq.orbit_array(g, ORIGIN, 1000)
        expect = (np.arange(1, 1001) * beta) % 1.0
        assert np.abs(arr[:, 1] - expect).max() <= 1e-10


def test_constant_test_function_gives_constant_sequence():
    F = nilseq.TestFunction.torus_character(0, 0)  # F == 1 everywhere
    g = HeisenbergElement(math.sqrt(2), 0.3, math.sqrt(3))
    seq = nilseq.eval_nilsequence(F, g, ORIGIN, 100)
    assert np.abs(seq - 1.0).max() < 1e-12


def test_torus_character_is_linear_phase():
    theta = math.sqrt(2) - 1
    F = nilseq.TestFunction.torus_character(1, 0)
    seq = nilseq.eval_nilsequence(F, HeisenbergElement(theta, 0, 0), ORIGIN, 64)
    expect = np.exp(2j * np.pi * theta * np.arange(1, 65))
    assert np.abs(seq - expect).max() < 1e-12


def test_nilsequence_boundedness():
    for name, (F, g) in nilseq.default_battery().items():
        seq = nilseq.eval_nilsequence(F, g, ORIGIN, 5000)
        assert np.abs(seq).max() <= 1.0 + 1e-12, name


def test_vertical_character_sees_bracket_term():
    # with gamma irrational the bracket [n gamma] n alpha enters y; the
    # sequence must differ from any pure abelian phase e(n beta') by a lot
    g = HeisenbergElement(math.sqrt(2), 0.0, math.sqrt(3))
    F = nilseq.TestFunction.vertical_character(1)
    seq = nilseq.eval_nilsequence(F, g, ORIGIN, 4096)
    spec = np.abs(np.fft.fft(seq)) / seq.size
    assert spec.max() < 0.5  # no single frequency explains the sequence


def test_gluing_constraints():
    assert nilseq.TestFunction.vertical_character(1).gluing_defect() <= 1e-9
    assert nilseq.TestFunction.vertical_character(3).gluing_defect() <= 1e-9
    assert nilseq.TestFunction.torus_character(2, 5).gluing_defect() <= 1e-9


def test_custom_grid_gluing_validation(rng):
    # constant grid glues trivially
    ok = nilseq.TestFunction.custom_grid(0.5 * np.ones((8, 8, 5)))
    assert ok.gluing_defect(20, 20) <= 1e-9
    bad = rng.uniform(0.2, 0.9, size=(8, 8, 5))
    with pytest.raises(ValueError, match="gluing"):
        nilseq.TestFunction.custom_grid(bad)
    with pytest.raises(ValueError, match=r"\|F\| <= 1"):
        nilseq.TestFunction.custom_grid(2.0 * np.ones((4, 4, 3)))


def test_lipschitz_estimates_finite():
    for F in (nilseq.TestFunction.vertical_character(1),
              nilseq.TestFunction.torus_character(1, 1)):
        assert 0 < F.lipschitz_estimate < 100


def test_gen_quadratic_zero_and_embeddings():
    q = nilseq.GeneralizedQuadratic.create([[0.0]], [0.0], [0.3])
    assert q.phase(17) == 0.0
    N = 1000
    theta = math.sqrt(2)
    q = nilseq.quadratic_embedding(theta, N)
    n = np.arange(1, N + 1)
    assert np.abs(q.phase(n) - theta * n**2).max() <= 1e-9 * (1 + theta * N**2)
    q2 = nilseq.bilinear_embedding(0.7, math.sqrt(3), N)
    direct = 0.7 * n * nilseq.frac_half(math.sqrt(3) * n)
    assert np.abs(q2.phase(n) - direct).max() <= 1e-9 * (1 + 0.7 * N)
    vals = q2.value(n)
    assert np.abs(np.abs(vals) - 1.0).max() < 1e-12


def test_gen_quadratic_validation():
    with pytest.raises(ValueError, match="dimension"):
        nilseq.GeneralizedQuadratic.create(
            np.zeros((100, 100)), np.zeros(100), np.ones(100)
        )
    with pytest.raises(ValueError, match="finite"):
        nilseq.GeneralizedQuadratic.create([[math.inf]], [0.0], [0.5])
    with pytest.raises(ValueError):
        nilseq.GeneralizedQuadratic.create([[0.0, 0.0]], [0.0], [0.5])


def test_correlate_basics(table_1e4):
    N = 100
    seq = np.exp(2j * np.pi * 0.5 * np.arange(1, N + 1))
    val = nilseq.correlate(np.ones(N), seq)
    assert abs(val) <= 1 / N
    with pytest.raises(ValueError, match="length"):
        nilseq.correlate(np.ones(5), np.ones(6))


def test_correlate_character_sum_oracle():
    N = 3000
    n = np.arange(1, N + 1)
    f_a = (n % 3 == 1).astype(float)
    f_a -= f_a.mean()
    seq = np.exp(2j * np.pi * n / 3.0)
    got = nilseq.correlate(f_a, seq)
    expect = np.mean(f_a * seq)  # direct summation oracle
    assert got == pytest.approx(expect, abs=1e-15)
    assert abs(got) > 0.3  # the mod-3 set genuinely correlates with e(n/3)


def test_davenport_direction_battery(table_1e6):
    mu = table_1e6.mobius_seq(10**6)
    n = np.arange(1, 10**6 + 1)
    thetas = [1 / 3, 2 / 5, 1 / 7, 3 / 8, 5 / 11, 1 / 2, 1 / 6, 7 / 9, 2 / 11, 9 / 13,
              math.sqrt(2) - 1, (math.sqrt(5) - 1) / 2, 1 / math.pi, 1 / math.e,
              math.sqrt(3) - 1, 2 - math.sqrt(2), math.log(2), 0.123456789,
              math.sqrt(7) - 2, 5 - 2 * math.sqrt(5)]
    assert len(thetas) == 20
    for theta in thetas:
        seq = np.exp(2j * np.pi * np.mod(theta * n, 1.0))
        assert abs(nilseq.correlate(mu, seq)) < 0.01


def test_mobius_battery_decay(table_1e6):
    small = nilseq.correlation_battery(table_1e6.mobius_seq(10**3), 10**3)
    big = nilseq.correlation_battery(table_1e6.mobius_seq(10**6), 10**6)
    assert set(small) == set(big) and len(small) == 5
    for name in small:
        assert big[name] <= 0.5 * small[name], name
        assert big[name] < 0.05


def test_local_quadratic_second_differences():
    theta = math.sqrt(2)
    lq = nilseq.make_local_quadratic(20000, theta, math.sqrt(5) - 2, 0.2)
    assert lq.n0 == 10000
    sup = lq.n0 + np.nonzero(lq.support)[0]
    # phi'' = 2 theta h1 h2 mod 1, independent of the base point
    # shifts from the rotation's convergent denominators stay in-support
    for h1, h2 in ((4, 17), (17, 72), (4, 4)):
        expect = float(nilseq.frac_half(2 * theta * h1 * h2))
        seen = []
        for x in sup[:4000]:
            try:
                seen.append(nilseq.second_difference(lq, int(x), h1, h2))
            except nilseq.OutsideSupportError:
                continue
        assert len(seen) >= 100
        gaps = [circle_gap(v, expect) for v in seen]
        assert max(gaps) <= 1e-9
        assert max(seen) - min(seen) <= 1e-9


def test_second_difference_degenerate_and_outside():
    lq = nilseq.make_local_quadratic(4000, 0.31, math.sqrt(2), 0.2)
    sup = lq.n0 + np.nonzero(lq.support)[0]
    x = int(sup[0])
    assert nilseq.second_difference(lq, x, 0, 5) == 0.0
    outside = lq.n0 + int(np.nonzero(~lq.support)[0][0])
    with pytest.raises(nilseq.OutsideSupportError):
        nilseq.second_difference(lq, int(outside), 0, 0)
    with pytest.raises(nilseq.OutsideSupportError):
        lq.phase_at(lq.n0 - 1)


def test_orbit_csv_export(tmp_path):
    g = HeisenbergElement(math.sqrt(2), 0.0, math.sqrt(3))
    F = nilseq.TestFunction.vertical_character(1)
    path = tmp_path / "orbit.csv"
    nilseq.orbit_to_csv(F, g, ORIGIN, 50, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["n", "x", "y", "z", "re_F", "im_F"]
    assert len(rows) == 51
    assert int(rows[1][0]) == 1
