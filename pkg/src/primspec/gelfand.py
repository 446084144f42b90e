"""The hat map from fixed functions on the minimal center to functions on the
primitive spectrum, and the mean-ergodicity verdict.

On a finite space the spectrum is discrete, so ``C(Prim(S))`` is simply the
space of functions on the points; the isomorphism audit checks linearity,
unit, isometry, lattice compatibility and dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .core import make_semigroup, memo
from .errors import (DecompositionFailure, EquivalenceViolation, NotConstantOnSupport,
                     NotConverged, NotFixed, ProjectionUnavailable)
from .ideals import restrict_semigroup
from .means import DEFAULT_CONFIG, abel_projection, cesaro_projection, exact_projection
from .measures import fix_space_dimension, stationary_solutions
from .spectrum import minimal_center_support, prim_spectrum, specialization_order

TOL_FIXED = 1e-10
TOL_HAT = 1e-8


@dataclass(frozen=True, eq=False)
class HatFunction:
    points: tuple
    values: np.ndarray

    def __getitem__(self, p):
        return self.values[self.points.index(p)]


def _center_index(S):
    return np.array(sorted(minimal_center_support(S)))


def hat(S, f):
    """``f^(I_mu) = <f, mu>`` for ``f`` fixed by the semigroup restricted to ``M(S)``.

    Values of ``f`` outside ``M(S)`` are ignored.
    """
    P = prim_spectrum(S)
    f = np.asarray(f, dtype=object if S.exact else float)
    idx = _center_index(S)
    fm = f[idx]
    for m in S.matrices:
        resid = m[np.ix_(idx, idx)] @ fm - fm
        if S.exact:
            if any(v != 0 for v in resid):
                raise NotFixed("function is not fixed on the minimal center")
        elif np.max(np.abs(resid)) > TOL_FIXED:
            raise NotFixed(f"function is not fixed on the minimal center "
                           f"(residual {np.max(np.abs(resid)):.3g})")
    vals = []
    for p in P.points:
        v = f @ p.witness.measure
        spread = max(abs(f[x] - v) for x in p.support)
        if spread > (0 if S.exact else TOL_HAT):
            raise NotConstantOnSupport(
                f"function varies by {float(spread):.3g} on support {sorted(p.support)}")
        vals.append(v)
    return HatFunction(P.points, np.array(vals, dtype=object if S.exact else float))


def hat_inverse(S, g, projection=None):
    """A fixed function ``F`` on ``K`` with ``hat(F) = g``.

    ``g`` is extended by its value on each support and by zero off ``M(S)``,
    then mapped through the mean ergodic projection.
    """
    P = prim_spectrum(S)
    values = g.values if isinstance(g, HatFunction) else g
    if len(values) != len(P):
        raise ValueError(f"expected {len(P)} values, got {len(values)}")
    if projection is None:
        try:
            projection = exact_projection(S).matrix
        except DecompositionFailure as exc:
            raise ProjectionUnavailable(str(exc)) from None
    exact = np.asarray(projection).dtype == object
    G = linalg.zeros(S.n, exact)
    for p, v in zip(P.points, values):
        for x in p.support:
            G[x] = Fraction(v) if exact else float(v)
    return np.asarray(projection) @ G


def fixed_on_center_basis(S):
    """Basis of ``fix`` of the semigroup restricted to ``M(S)``, zero-padded to ``K``."""
    idx = _center_index(S)
    sub = restrict_semigroup(S, frozenset(idx.tolist()))
    eye = linalg.identity(sub.n, sub.exact)
    B = linalg.nullspace(np.vstack([m - eye for m in sub.matrices]), sub.exact)
    out = []
    for j in range(B.shape[1]):
        v = linalg.zeros(S.n, S.exact)
        v[idx] = B[:, j]
        out.append(v)
    return out


@dataclass
class LatticeReport:
    fix_dim: int
    prim_count: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures and all(self.checks.values())


def verify_lattice_isomorphism(S, rng=None, samples=10, tol=TOL_HAT):
    """Audit that the hat map is an isometric lattice isomorphism onto ``C(Prim)``.

    Failures are recorded in the report, never raised.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    P = prim_spectrum(S)
    basis = [np.asarray(b, dtype=float) for b in fixed_on_center_basis(S)]
    idx = _center_index(S)
    rep = LatticeReport(len(basis), len(P))
    rep.checks["bijective"] = rep.fix_dim == rep.prim_count

    def record(name, ok, detail=""):
        rep.checks[name] = rep.checks.get(name, True) and bool(ok)
        if not ok:
            rep.failures.append(f"{name}: {detail}")

    def fhat(v):
        return np.asarray(hat(_float_view(S), v).values, dtype=float)

    one = np.zeros(S.n)
    one[idx] = 1.0
    record("unit", np.allclose(fhat(one), 1.0, atol=tol, rtol=0), "hat(1) != 1")
    if not basis:
        return rep
    B = np.column_stack(basis)
    for _ in range(samples):
        f = B @ rng.normal(size=B.shape[1])
        g = B @ rng.normal(size=B.shape[1])
        a, b = rng.normal(size=2)
        hf, hg = fhat(f), fhat(g)
        err = np.max(np.abs(fhat(a * f + b * g) - (a * hf + b * hg)))
        record("linear", err <= tol, f"error {err:.3g}")
        err = abs(np.max(np.abs(hf)) - np.max(np.abs(f[idx])))
        record("isometric", err <= tol, f"norm gap {err:.3g}")
        err = np.max(np.abs(fhat(np.abs(f)) - np.abs(hf)))
        record("modulus", err <= tol, f"|f|^ vs |f^| gap {err:.3g}")
        err = np.max(np.abs(fhat(np.maximum(f, g)) - np.maximum(hf, hg)))
        record("sup", err <= tol, f"sup gap {err:.3g}")
        F = hat_inverse(_float_view(S), hf)
        err = np.max(np.abs(fhat(F) - hf))
        record("round_trip", err <= tol, f"hat(hat_inverse(g)) gap {err:.3g}")
    return rep


def _float_view(S):
    if not S.exact:
        return S
    return memo(S, "float_view", lambda: make_semigroup(S.float_matrices, "float", S.labels))


@dataclass
class MeanErgodicVerdict:
    mean_ergodic: bool
    condition_b_i: bool
    condition_b_ii: bool
    condition_c_i: bool
    condition_c_ii: bool
    condition_c_iii: bool
    witnesses: list = field(default_factory=list)
    fix_dim: int | None = None
    prim_count: int | None = None

    def to_json(self):
        return {
            "mean_ergodic": self.mean_ergodic,
            "conditions": {
                "a_mean_ergodic": self.mean_ergodic,
                "b_i_homeomorphism": self.condition_b_i,
                "b_ii_extension": self.condition_b_ii,
                "c_i_hausdorff": self.condition_c_i,
                "c_ii_uniquely_ergodic_supports": self.condition_c_ii,
                "c_iii_extension": self.condition_c_iii,
            },
            "fix_dim": self.fix_dim,
            "prim_count": self.prim_count,
            "witnesses": list(self.witnesses),
        }


def evaluate_verdict(*, mean_ergodic, ergodic_supports, spectrum, uniquely_ergodic,
                     extension, witnesses=(), fix_dim=None):
    """Combine the separately computed conditions and enforce their equivalence.

    ``ergodic_supports`` lists the support of every ergodic measure (repeats
    mean the map to the spectrum is not injective); ``spectrum`` supplies the
    hull-kernel topology.  Raises :class:`EquivalenceViolation` if
    ``(a) <=> (b) <=> (c)`` fails for the supplied data.
    """
    witnesses = list(witnesses)
    order = specialization_order(spectrum)
    supports = [frozenset(s) for s in ergodic_supports]
    injective = len(set(supports)) == len(supports)
    onto = set(supports) == {p.support for p in spectrum.points}
    # finite ex P is discrete: the bijection is a homeomorphism iff Prim is discrete
    b_i = injective and onto and order.hausdorff
    if not injective:
        witnesses.append("distinct ergodic measures share a primitive ideal")
    if not order.hausdorff:
        witnesses.append("primitive spectrum is not Hausdorff: non-closed points "
                         f"{[sorted(spectrum.points[i].support) for i in range(order.size) if i not in order.closed_singletons]}")
    verdict = MeanErgodicVerdict(
        mean_ergodic=bool(mean_ergodic), condition_b_i=b_i, condition_b_ii=bool(extension),
        condition_c_i=order.hausdorff, condition_c_ii=bool(uniquely_ergodic),
        condition_c_iii=bool(extension), witnesses=witnesses, fix_dim=fix_dim,
        prim_count=len(spectrum))
    b = verdict.condition_b_i and verdict.condition_b_ii
    c = verdict.condition_c_i and verdict.condition_c_ii and verdict.condition_c_iii
    if not (verdict.mean_ergodic == b == c):
        raise EquivalenceViolation(
            f"conditions contradict the characterization: (a)={verdict.mean_ergodic}, "
            f"(b)={b}, (c)={c}", witnesses=verdict.to_json())
    return verdict


def _is_mean_ergodic_projection(S, P, tol):
    P = np.asarray(P, dtype=float)
    probs = []
    if np.any(P < -tol) or np.max(np.abs(P.sum(axis=1) - 1.0)) > tol:
        probs.append("projection is not row-stochastic")
    if np.max(np.abs(P @ P - P)) > tol:
        probs.append("projection is not idempotent")
    for i, m in enumerate(S.float_matrices):
        if np.max(np.abs(P @ m - P)) > tol or np.max(np.abs(m @ P - P)) > tol:
            probs.append(f"P S_{i} = S_{i} P = P fails")
    return probs


def mean_ergodicity_verdict(S, cfg=DEFAULT_CONFIG, tol=TOL_HAT):
    """Evaluate conditions (a), (b), (c) independently and cross-check them."""
    witnesses = []
    P = prim_spectrum(S)

    # (a): a projection with PS = SP = P that a Cesàro (and, for one generator,
    # Abel) net actually reaches, i.e. one lying in the closed convex hull of S
    mean_ergodic = True
    try:
        proj = exact_projection(S).matrix
    except DecompositionFailure as exc:
        proj = None
        mean_ergodic = False
        witnesses.append(f"(a) exact projection: {exc}")
    if proj is not None:
        probs = _is_mean_ergodic_projection(S, proj, tol)
        nets = []
        try:
            nets.append(cesaro_projection(S, cfg))
            if len(S.generators) == 1:
                nets.append(abel_projection(S, cfg))
        except NotConverged as exc:
            probs.append(f"net did not converge: {exc}")
        for net in nets:
            gap = float(np.max(np.abs(np.asarray(net.matrix, dtype=float)
                                      - np.asarray(proj, dtype=float))))
            if gap > tol:
                probs.append(f"{net.method} limit differs from projection by {gap:.3g}")
        if probs:
            mean_ergodic = False
            witnesses.extend(f"(a) {p}" for p in probs)

    # (c)(ii): each ergodic support carries exactly one invariant measure
    uniquely = True
    for p in P.points:
        idx = np.array(sorted(p.support))
        x0, kernel = stationary_solutions([m[np.ix_(idx, idx)] for m in S.matrices], S.exact)
        if x0 is None or kernel.shape[1] != 0:
            uniquely = False
            witnesses.append(f"(c)(ii) support {sorted(p.support)} is not uniquely ergodic")

    # (c)(iii): every fixed function on M(S) extends to a fixed function on K
    extension = True
    idx = _center_index(S)
    if proj is None:
        extension = False
        witnesses.append("(c)(iii) no projection to build extensions")
    else:
        for j, p in enumerate(P.points):
            g = [1 if k == j else 0 for k in range(len(P))]
            F = np.asarray(hat_inverse(S, g, proj), dtype=float)
            G = np.zeros(S.n)
            G[sorted(p.support)] = 1.0
            fixed = all(np.max(np.abs(m @ F - F)) <= tol for m in S.float_matrices)
            if not fixed or np.max(np.abs(F[idx] - G[idx])) > tol:
                extension = False
                witnesses.append(f"(c)(iii) indicator of {sorted(p.support)} has no fixed extension")

    return evaluate_verdict(
        mean_ergodic=mean_ergodic,
        ergodic_supports=[p.support for p in P.points],
        spectrum=P, uniquely_ergodic=uniquely, extension=extension,
        witnesses=witnesses, fix_dim=fix_space_dimension(S))
