from fractions import Fraction

import numpy as np
import pytest

from primspec.core import make_semigroup
from primspec.errors import MultiGenerator, NotKoopman, NotSelfSupporting
from primspec.means import (ErgodicNetConfig, abel_operator, abel_projection, abel_radius,
                            almost_weak_stability, cesaro_net, cesaro_projection, cyclic_period,
                            entry_time, exact_projection, koopman_map, period_lcm, power_sum,
                            radical_membership_via_means, visit_frequency, write_trace_csv)
from primspec.systems import build_rotation, random_instance

HALF = np.full((2, 2), 0.5)
FIX_B_P = [[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]]


def test_cesaro_projection_examples(swap, fix_b):
    assert np.allclose(cesaro_projection(swap).matrix, HALF, atol=1e-12)
    assert np.allclose(cesaro_projection(make_semigroup([np.eye(3)])).matrix, np.eye(3))
    assert np.allclose(cesaro_projection(fix_b).matrix, FIX_B_P, atol=1e-12)


def test_exact_projection_examples(swap_q, fix_b_q):
    half = Fraction(1, 2)
    assert exact_projection(swap_q).matrix.tolist() == [[half, half], [half, half]]
    assert exact_projection(fix_b_q).matrix.tolist() == [[0, half, half], [0, 1, 0], [0, 0, 1]]
    assert exact_projection(make_semigroup([np.eye(2)], "rational")).matrix.tolist() == [[1, 0], [0, 1]]


def test_projections_agree_on_random_instances():
    for seed in range(100):
        S = random_instance(seed)
        P = exact_projection(S).matrix
        assert np.max(np.abs(cesaro_projection(S).matrix - P)) <= 1e-8
        if len(S.generators) == 1:
            assert np.max(np.abs(abel_projection(S).matrix - P)) <= 1e-8


def test_abel_operator_examples(swap, swap_q):
    third = Fraction(1, 3)
    A = abel_operator(swap_q, Fraction(1, 2))
    assert A.tolist() == [[2 * third, third], [third, 2 * third]]
    I = make_semigroup([np.eye(3)])
    assert np.allclose(abel_operator(I, 0.3), np.eye(3))
    assert np.max(np.abs(abel_operator(swap, abel_radius(32)) - HALF)) <= 1e-9


def test_abel_needs_single_generator():
    S = make_semigroup([build_rotation(4, 1).matrices[0], build_rotation(4, 2).matrices[0]])
    with pytest.raises(MultiGenerator):
        abel_operator(S, 0.5)


def test_power_sum():
    m = np.array([[0.0, 1.0], [1.0, 0.0]])
    total, top = power_sum(m, 5)
    assert np.array_equal(total, [[3, 2], [2, 3]]) and np.array_equal(top, m)


def test_periods(tail_cycle):
    assert period_lcm(tail_cycle) == 2
    assert period_lcm(build_rotation(6, 1)) == 6
    G = build_rotation(6, 2).digraph
    assert cyclic_period(G, {0, 2, 4}) == 3


def test_net_converges_with_window(fix_b):
    net = cesaro_net(fix_b)
    assert net.converged and net.residual < 1e-9
    assert net.final.N <= 10**6


def test_fix_b_decay_is_exactly_one_over_n(fix_b_q):
    res = radical_membership_via_means(fix_b_q, {0, 1, 2}, [1, 0, 0],
                                       ErgodicNetConfig(exact=True), trace_until=2**16)
    assert res.member
    assert res.trace[-1][0] == 2**16
    assert all(d == Fraction(1, N) for N, d in res.trace)


def test_membership_examples(fix_b):
    assert radical_membership_via_means(fix_b, {0, 1, 2}, [1, 0, 0]).member
    assert not radical_membership_via_means(fix_b, {0, 1, 2}, [0, 1, 0]).member
    for L in ({1}, {2}, {1, 2}, {0, 1, 2}):
        assert not radical_membership_via_means(fix_b, L, [1, 1, 1]).member
    with pytest.raises(NotSelfSupporting):
        radical_membership_via_means(fix_b, {0}, [1, 0, 0])


def test_trace_csv(tmp_path, fix_b_q):
    res = radical_membership_via_means(fix_b_q, {0, 1, 2}, [1, 0, 0],
                                       ErgodicNetConfig(exact=True), trace_until=8)
    path = tmp_path / "t.csv"
    write_trace_csv(res.trace, path)
    assert path.read_text().splitlines() == ["N,decay", "1,1", "2,1/2", "4,1/4", "8,1/8"]


def test_koopman_orbit_statistics(tail_cycle):
    assert almost_weak_stability(tail_cycle, [0, 0, 0, 0], 0, 100) == 0
    assert almost_weak_stability(tail_cycle, [1, 1, 0, 0], 0, 100) == Fraction(2, 100)
    assert almost_weak_stability(tail_cycle, [1, 1, 1, 1], 3, 100) == 1
    assert visit_frequency(tail_cycle, 0, {0, 1, 2, 3}, 7) == 1
    assert visit_frequency(tail_cycle, 0, {2, 3}, 100) == Fraction(98, 100)
    assert visit_frequency(tail_cycle, 0, {2}, 100) == Fraction(49, 100)
    assert entry_time(tail_cycle, 0, {2, 3}) == 2
    assert koopman_map(tail_cycle) == [1, 2, 3, 2]


def test_koopman_map_rejects_spread_rows(fix_b):
    with pytest.raises(NotKoopman):
        koopman_map(fix_b)


def test_config_validation():
    with pytest.raises(ValueError):
        ErgodicNetConfig(kind="median")
    with pytest.raises(ValueError):
        ErgodicNetConfig(tol_conv=0)


def test_dropping_a_cycle_state_costs_one_visit_per_lap():
    # on a cycle of length l the best start loses exactly 1/l of the visits
    for n in (3, 5, 8):
        S = build_rotation(n, 1)
        U = frozenset(range(1, n))
        N = 10**4 - 10**4 % n
        assert min(visit_frequency(S, x, U, N) for x in range(n)) == Fraction(n - 1, n)
