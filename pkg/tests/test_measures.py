from fractions import Fraction

import numpy as np
import pytest

from primspec.core import make_semigroup
from primspec.errors import NotInvariant
from primspec.ideals import restrict_semigroup
from primspec.measures import (embed_measure, ergodic_decomposition, ergodic_measures,
                               fix_space_basis, fix_space_dimension, indicator_is_fixed,
                               invariant_polytope, is_ergodic, is_extreme, is_invariant)
from primspec.oracles import oracle_polytope_vertices
from primspec.systems import build_rotation, random_instance


def measures(S):
    return [list(e.measure) for e in ergodic_measures(S)]


def test_identity_two_states():
    S = make_semigroup([np.eye(2)], "rational")
    assert measures(S) == [[1, 0], [0, 1]]


def test_swap(swap_q):
    assert measures(swap_q) == [[Fraction(1, 2), Fraction(1, 2)]]


def test_fix_b(fix_b_q):
    assert measures(fix_b_q) == [[0, 1, 0], [0, 0, 1]]


def test_rotation_six_two():
    S = build_rotation(6, 2, "rational")
    third = Fraction(1, 3)
    assert measures(S) == [[third, 0, third, 0, third, 0], [0, third, 0, third, 0, third]]


def test_ergodic_measures_positive_on_terminal_class():
    for seed in range(100):
        S = random_instance(seed)
        for e in ergodic_measures(S):
            assert all(e.measure[x] > 0 for x in e.support)
            assert is_invariant(S, e.measure)


def test_is_ergodic_examples(swap, fix_b):
    assert is_ergodic(swap, [0.5, 0.5])
    assert not is_ergodic(make_semigroup([np.eye(2)]), [0.5, 0.5])
    assert is_ergodic(fix_b, [0, 1, 0])
    with pytest.raises(NotInvariant):
        is_ergodic(swap, [1.0, 0.0])


def test_ergodic_iff_extreme_random():
    rng = np.random.default_rng(3)
    for seed in range(60):
        S = random_instance(seed, mode="rational")
        ergs = [e.measure for e in ergodic_measures(S)]
        w = rng.dirichlet(np.ones(len(ergs)))
        mix = sum(wi * np.asarray(e, dtype=float) for wi, e in zip(w, ergs))
        F = make_semigroup(S.float_matrices)
        assert is_ergodic(F, mix) == is_extreme(F, mix) == (len(ergs) == 1)


def test_fix_space(swap, identity3, fix_b):
    assert fix_space_dimension(swap) == 1
    assert fix_space_dimension(identity3) == 3
    basis = fix_space_basis(fix_b)
    assert len(basis) == 2
    for f in basis:
        assert abs(f[0] - (f[1] + f[2]) / 2) < 1e-12


def test_embed(fix_b_q):
    sub = restrict_semigroup(fix_b_q, {1, 2})
    mu = embed_measure(fix_b_q, {1, 2}, [Fraction(1, 2), Fraction(1, 2)])
    assert list(mu) == [0, Fraction(1, 2), Fraction(1, 2)]
    assert is_invariant(fix_b_q, mu)
    assert list(embed_measure(fix_b_q, {1}, [Fraction(1)])) == [0, 1, 0]
    assert sub.n == 2


def test_indicator_is_fixed(fix_b):
    assert indicator_is_fixed(fix_b, [0, 0.5, 0.5], {0, 1, 2})
    assert indicator_is_fixed(fix_b, [0, 0.5, 0.5], {1})
    assert indicator_is_fixed(make_semigroup([np.eye(2)]), [1, 0], {1})


def test_polytope_vertices_match_oracle():
    for seed in range(50):
        S = random_instance(seed, mode="rational")
        P = invariant_polytope(S)
        got = sorted(tuple(v) for v in P.vertices)
        want = sorted(tuple(v) for v in oracle_polytope_vertices(S))
        assert got == want


def test_decomposition_recovers_weights(fix_b):
    coeffs, residual = ergodic_decomposition(fix_b, [0, 0.25, 0.75])
    assert np.allclose(coeffs, [0.25, 0.75]) and residual < 1e-12
