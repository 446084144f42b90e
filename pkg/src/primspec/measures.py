"""Invariant and ergodic measures, fixed spaces, embeddings of subsystems.

Ergodic measures are found class by class: each minimal self-supporting set
carries exactly one invariant probability measure, obtained from the stacked
linear system ``mu (S_i|_L - Id) = 0``, ``sum mu = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .core import TOL_SUPP, as_subset, memo, support
from .errors import NonUniqueOnMinimalClass, NotInvariant, NotSelfSupporting
from .ideals import (SIdeal, is_self_supporting, minimal_self_supporting_sets,
                     require_self_supporting, restrict_semigroup)

TOL_INVARIANT = 1e-9


@dataclass(frozen=True, eq=False)
class ErgodicMeasure:
    measure: np.ndarray
    support: frozenset

    def __repr__(self):
        return f"ErgodicMeasure(support={sorted(self.support)})"


@dataclass(frozen=True, eq=False)
class InvariantPolytope:
    """``{mu >= 0 : sum mu = 1, mu S_i = mu}`` with its affine hull and vertices."""

    n: int
    point: np.ndarray
    directions: np.ndarray
    vertices: tuple

    @property
    def dimension(self):
        return self.directions.shape[1]


def _sub(m, idx):
    return m[np.ix_(idx, idx)]


def stationary_system(matrices, exact):
    """Rows of ``[(S_i - Id)^T ; 1^T]`` and right-hand side ``[0 ; 1]``."""
    k = matrices[0].shape[0]
    eye = linalg.identity(k, exact)
    blocks = [(m - eye).T for m in matrices]
    a = np.vstack(blocks + [linalg.ones(k, exact).reshape(1, -1)])
    b = linalg.zeros(a.shape[0], exact)
    b[-1] = Fraction(1) if exact else 1.0
    return a, b


def stationary_solutions(matrices, exact):
    """Affine solution set of the stationary equations (positivity not imposed)."""
    a, b = stationary_system(matrices, exact)
    return linalg.solve_affine(a, b, exact)


def _class_measure(S, L):
    idx = np.array(sorted(L))
    x0, kernel = stationary_solutions([_sub(m, idx) for m in S.matrices], S.exact)
    if x0 is None:
        raise NonUniqueOnMinimalClass(f"no stationary solution on minimal class {sorted(L)}")
    if kernel.shape[1] > 0:
        raise NonUniqueOnMinimalClass(
            f"stationary space on minimal class {sorted(L)} has affine dimension "
            f"{kernel.shape[1]}")
    if not S.exact:
        x0 = np.where(np.abs(x0) <= 1e-15, 0.0, x0)
        x0 = x0 / x0.sum()
    if min(x0) <= (0 if S.exact else TOL_SUPP):
        raise NonUniqueOnMinimalClass(
            f"stationary solution on minimal class {sorted(L)} is not strictly positive")
    mu = linalg.zeros(S.n, S.exact)
    mu[idx] = x0
    return ErgodicMeasure(mu, frozenset(L))


def ergodic_measures(S):
    """The extreme points of the invariant polytope, one per minimal class."""
    return memo(S, "ergodic", lambda: tuple(
        _class_measure(S, L) for L in minimal_self_supporting_sets(S)))


def is_invariant(S, mu, tol=TOL_INVARIANT):
    mu = np.asarray(mu)
    if mu.shape != (S.n,):
        return False
    if mu.dtype == object:
        return all(v >= 0 for v in mu) and sum(mu, Fraction(0)) == 1 and all(
            np.all(mu @ m == mu) for m in S.matrices)
    mu = mu.astype(float)
    if np.any(mu < -tol) or abs(mu.sum() - 1.0) > tol:
        return False
    return all(np.max(np.abs(mu @ m - mu)) <= tol for m in S.float_matrices)


def _require_invariant(S, mu):
    if not is_invariant(S, mu):
        raise NotInvariant("measure is not an invariant probability measure")


def _fixed_dimension(mats, exact):
    k = mats[0].shape[0]
    eye = linalg.identity(k, exact)
    return linalg.nullspace(np.vstack([m - eye for m in mats]), exact).shape[1]


def _measure_support(S, mu):
    return support(np.asarray(mu, dtype=object if S.exact else float))


def is_ergodic(S, mu):
    """Fixed-space test: the induced semigroup on ``supp mu`` fixes only constants."""
    _require_invariant(S, mu)
    L = _measure_support(S, mu)
    require_self_supporting(S, L)
    idx = np.array(sorted(L))
    return _fixed_dimension([_sub(m, idx) for m in S.matrices], S.exact) == 1


def is_extreme(S, mu):
    """Vertex test: ``mu`` is the only invariant probability supported in ``supp mu``."""
    _require_invariant(S, mu)
    idx = np.array(sorted(_measure_support(S, mu)))
    x0, kernel = stationary_solutions([_sub(m, idx) for m in S.matrices], S.exact)
    return kernel.shape[1] == 0


def invariant_polytope(S):
    x0, kernel = stationary_solutions(S.matrices, S.exact)
    if x0 is None:
        raise NonUniqueOnMinimalClass("stationary system is inconsistent")
    return InvariantPolytope(S.n, x0, kernel, tuple(e.measure for e in ergodic_measures(S)))


def fix_space_dimension(S):
    return _fixed_dimension(S.matrices, S.exact)


def fix_space_basis(S):
    """Orthonormal basis (float) of ``fix(S)``, the first vector being ``1/sqrt(n)``."""
    def compute():
        n = S.n
        eye = linalg.identity(n, S.exact)
        raw = linalg.nullspace(np.vstack([m - eye for m in S.matrices]), S.exact)
        raw = np.asarray(raw, dtype=float)
        d = raw.shape[1]
        q, _ = np.linalg.qr(np.column_stack([np.ones(n) / np.sqrt(n), raw]))
        q = q[:, :d]
        if q[0, 0] < 0:
            q[:, 0] = -q[:, 0]
        return [q[:, j].copy() for j in range(d)]
    return memo(S, "fixbasis", compute)


def embed_measure(S, I, nu):
    """Zero-pad an invariant measure of the restriction to ``supp I`` to all of ``K``."""
    L = I.support if isinstance(I, SIdeal) else as_subset(I, S.n)
    sub = restrict_semigroup(S, L)
    nu = np.asarray(nu)
    if not is_invariant(sub, nu):
        raise NotInvariant("measure is not invariant for the restricted semigroup")
    mu = linalg.zeros(S.n, S.exact)
    mu[np.array(sorted(L))] = nu
    return mu


def indicator_is_fixed(S, mu, L):
    """Check ``S_i 1_L = 1_L`` almost everywhere with respect to ``mu``."""
    _require_invariant(S, mu)
    L = frozenset(L)
    if not is_self_supporting(S, L):
        raise NotSelfSupporting(f"{sorted(L)} is not self-supporting")
    ind = np.zeros(S.n)
    ind[list(L)] = 1.0
    where = sorted(_measure_support(S, mu))
    return all(np.max(np.abs((m @ ind - ind)[where])) <= TOL_INVARIANT
               for m in S.float_matrices)


def ergodic_decomposition(S, mu):
    """Coefficients of ``mu`` over the ergodic measures (the class masses).

    Returns ``(coefficients, residual)`` where the residual is the max-norm
    distance between ``mu`` and the recombined measure.
    """
    _require_invariant(S, mu)
    mu = np.asarray(mu)
    erg = ergodic_measures(S)
    coeffs = [sum(mu[sorted(e.support)].tolist(), 0) for e in erg]
    recon = sum((c * e.measure for c, e in zip(coeffs, erg)), linalg.zeros(S.n, S.exact))
    residual = max(abs(a - b) for a, b in zip(recon.tolist(), mu.tolist()))
    return coeffs, residual
