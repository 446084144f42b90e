from fractions import Fraction
from math import gcd

import networkx as nx
import numpy as np
import pytest

from primspec.errors import DegenerateBranch, InputError, OutOfRange
from primspec.ideals import minimal_self_supporting_sets
from primspec.measures import ergodic_measures
from primspec.spectrum import prim_spectrum
from primspec.systems import (MapSpec, UlamSpec, build_koopman, build_product, build_rotation,
                              build_ulam, product_state, random_instance)


def test_koopman_examples():
    assert np.array_equal(build_koopman([0, 1, 2]).matrices[0], np.eye(3))
    m = build_koopman(MapSpec(3, tuple(2 * x % 3 for x in range(3)))).matrices[0]
    assert [int(np.argmax(r)) for r in m] == [0, 2, 1]
    S = build_koopman(MapSpec(4, (1, 2, 3, 2)))
    assert minimal_self_supporting_sets(S) == [{2, 3}]


def test_koopman_out_of_range():
    with pytest.raises(OutOfRange):
        MapSpec(2, (0, 2))


def test_koopman_is_lattice_homomorphism():
    rng = np.random.default_rng(0)
    S = build_koopman(rng.integers(0, 7, size=7).tolist())
    f = rng.normal(size=7)
    m = S.matrices[0]
    assert np.allclose(np.abs(m @ f), m @ np.abs(f))


def test_rotation_examples():
    assert sorted(sorted(p.support) for p in prim_spectrum(build_rotation(6, 2))) == [
        [0, 2, 4], [1, 3, 5]]
    assert len(prim_spectrum(build_rotation(5, 0))) == 5
    (e,) = ergodic_measures(build_rotation(5, 2, "rational"))
    assert list(e.measure) == [Fraction(1, 5)] * 5


def test_rotation_orbit_count_exhaustive():
    for n in range(1, 13):
        for a in range(n):
            assert len(prim_spectrum(build_rotation(n, a))) == gcd(n, a)


def test_ulam_doubling_four_cells():
    P = build_ulam(UlamSpec("doubling", 4), "rational").matrices[0]
    half = Fraction(1, 2)
    for i in range(4):
        assert P[i, 2 * i % 4] == half and P[i, (2 * i + 1) % 4] == half


def test_ulam_rotation_quarter():
    P = build_ulam(UlamSpec("rotation", 4, alpha=Fraction(1, 4)), "rational").matrices[0]
    assert [int(np.argmax(r)) for r in P] == [1, 2, 3, 0]


def test_ulam_doubling_sixteen_cells():
    S = build_ulam(UlamSpec("doubling", 16))
    assert nx.is_strongly_connected(S.digraph)
    assert np.allclose(S.matrices[0].sum(axis=0), 1.0)
    (e,) = ergodic_measures(S)
    assert np.max(np.abs(e.measure - 1 / 16)) <= 1e-10


def test_ulam_degenerate_branch():
    spec = UlamSpec("custom", 4, branches=((0, "1/2", 0, "1/2"), ("1/2", 1, 2, -1)))
    with pytest.raises(DegenerateBranch):
        build_ulam(spec)
    with pytest.raises(InputError):
        build_ulam(UlamSpec("custom", 4, branches=((0, "1/2", 1, 0),)))


def test_product_identity_blocks(swap):
    I2 = build_rotation(2, 0)
    m = build_product(I2, swap).matrices[0]
    assert np.array_equal(m, np.kron(np.eye(2), swap.matrices[0]))


def test_product_swap_swap(swap):
    S = build_product(swap, swap)
    got = sorted(sorted(p.support) for p in prim_spectrum(S))
    assert got == [[product_state(0, 0, 2), product_state(1, 1, 2)],
                   [product_state(0, 1, 2), product_state(1, 0, 2)]]
    assert S.label(1) == "(0,1)"


def test_product_of_coprime_rotations():
    S = build_product(build_rotation(2, 1), build_rotation(3, 1))
    assert [len(p.support) for p in prim_spectrum(S)] == [6]


def test_product_classes_match_kronecker_scc():
    for seed in range(30):
        A, B = random_instance(seed, n_max=4), random_instance(seed + 1000, n_max=4)
        for kind in ("tensor", "independent", "both"):
            S = build_product(A, B, kind)
            G = nx.DiGraph()
            G.add_nodes_from(range(S.n))
            for m in S.matrices:
                G.add_edges_from(map(tuple, np.argwhere(m > 0).tolist()))
            cond = nx.condensation(G)
            terminal = sorted((frozenset(cond.nodes[c]["members"]) for c in cond
                               if cond.out_degree(c) == 0), key=min)
            assert [p.support for p in prim_spectrum(S)] == terminal


def test_random_is_deterministic_and_abelian():
    a, b = random_instance(9), random_instance(9)
    assert all(np.array_equal(x, y) for x, y in zip(a.matrices, b.matrices))
    for seed in range(1000):
        random_instance(seed)


def test_random_rational_rows_exact():
    S = random_instance(4, mode="rational")
    for m in S.matrices:
        assert all(sum(row) == 1 for row in m)


def test_random_limit():
    with pytest.raises(InputError):
        random_instance(0, n_max=13)
