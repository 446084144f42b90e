from itertools import combinations

import numpy as np
import pytest

from primspec.core import make_semigroup
from primspec.errors import EmptyFamily
from primspec.ideals import SIdeal, enumerate_s_ideals
from primspec.oracles import oracle_closure_by_order
from primspec.spectrum import (FULL_ALGEBRA, PrimSpectrum, closure, hull, is_radical_free, ker,
                               minimal_center_support, prim_spectrum, quotient_spectrum_bijection,
                               radical, radical_witness_measure, specialization_order, to_dot)
from primspec.systems import build_rotation, random_instance


def sup(points):
    return sorted(sorted(p.support) for p in points)


def test_spectrum_sizes(swap, fix_b):
    assert sup(prim_spectrum(swap)) == [[0, 1]]
    assert sup(prim_spectrum(fix_b)) == [[1], [2]]
    assert len(prim_spectrum(build_rotation(6, 2))) == 2


def test_hull(fix_b):
    P = prim_spectrum(fix_b)
    assert hull(fix_b, {0, 1, 2}) == frozenset(P.points)
    assert sup(hull(fix_b, {1})) == [[1]]
    assert sup(hull(fix_b, SIdeal(frozenset({0, 1, 2})))) == [[1], [2]]


def test_ker(fix_b):
    P = prim_spectrum(fix_b)
    p = P.points[0]
    assert ker([p]) == p.support
    assert ker(P.points) == {1, 2}
    S = make_semigroup([np.eye(3)])
    assert ker([prim_spectrum(S).points[i] for i in (0, 2)]) == {0, 2}
    with pytest.raises(EmptyFamily):
        ker([])


def test_closure(fix_b):
    P = prim_spectrum(fix_b)
    assert closure(fix_b, []) == frozenset()
    assert closure(fix_b, [P.points[0]]) == {P.points[0]}


def test_closure_matches_order_oracle():
    for seed in range(100):
        S = random_instance(seed)
        P = prim_spectrum(S)
        supports = [p.support for p in P.points]
        for r in range(len(P) + 1):
            for A in combinations(range(len(P)), r):
                got = {P.points.index(p) for p in closure(S, [P.points[i] for i in A])}
                assert got == oracle_closure_by_order(supports, A)


def test_closure_on_mock_chain():
    P = PrimSpectrum.mock([{1, 2}, {1, 2, 3}])
    small, big = P.points
    assert closure(P, [big]) == {small, big}
    assert closure(P, [small]) == {small}


def test_radical(fix_b):
    assert radical(fix_b, SIdeal(frozenset({0, 1, 2}))).support == {1, 2}
    assert radical(fix_b, {1}).support == {1}
    assert radical(fix_b, {0}) is FULL_ALGEBRA


def test_radical_free(swap, fix_b, identity3):
    assert is_radical_free(swap)
    assert not is_radical_free(fix_b)
    assert is_radical_free(identity3)


def test_center(fix_b):
    assert minimal_center_support(fix_b) == {1, 2}
    assert minimal_center_support(build_rotation(6, 2)) == set(range(6))


def test_radical_witness(fix_b_q, identity3, swap_q):
    R = radical(fix_b_q, {0, 1, 2})
    assert list(radical_witness_measure(fix_b_q, R)) == [0, 0.5, 0.5]
    assert list(radical_witness_measure(identity3, {0, 2})) == [0.5, 0, 0.5]
    assert list(radical_witness_measure(swap_q, {0, 1})) == [0.5, 0.5]


def test_genuine_spectra_are_discrete():
    for seed in range(100):
        order = specialization_order(prim_spectrum(random_instance(seed)))
        assert order.hausdorff and order.t0


def test_mock_chain_is_not_hausdorff():
    order = specialization_order(PrimSpectrum.mock([{1, 2}, {1, 2, 3}]))
    assert order.t0 and not order.hausdorff
    assert tuple(order.closed_singletons) == (0,)


def test_quotient_bijection(fix_b):
    assert len(quotient_spectrum_bijection(fix_b, SIdeal(frozenset({1, 2})))) == 2
    mapping = quotient_spectrum_bijection(fix_b, SIdeal(frozenset({0, 1, 2})))
    assert {p.support: q.support for p, q in mapping.items()} == {
        frozenset({1}): frozenset({1}), frozenset({2}): frozenset({2})}


def test_quotient_bijection_random():
    for seed in range(60):
        S = random_instance(seed)
        for I in enumerate_s_ideals(S)[:16]:
            mapping = quotient_spectrum_bijection(S, I)
            assert set(mapping) == set(hull(S, I))
            assert len(set(mapping.values())) == len(mapping)


def test_dot_is_isolated_nodes_for_discrete(fix_b):
    text = to_dot(prim_spectrum(fix_b))
    assert "->" not in text and text.count("label=") == 2
