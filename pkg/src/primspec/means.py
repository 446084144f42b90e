"""Ergodic nets: Cesàro and Abel means, the mean ergodic projection, decay of
``C_N |f|`` on invariant sets, and orbit visit frequencies for Koopman maps.

Cesàro sums are advanced by doubling, ``C_2N = (C_N + S^N C_N) / 2``.  The
by-product ``W_N = S^N C_N`` is the average of ``S^k`` over the window
``N <= k < 2N``; windows form a Følner sequence of the integers, so ``W_N`` is
a right ergodic net in its own right.  Started from a multiple of every
generator's cyclic period, ``W_N`` converges geometrically whereas ``C_N``
only converges like ``1/N``.  Projections and membership decisions use
``W_N``; reported decay traces use ``C_N``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from . import linalg
from .core import TOL_CONV, memo
from .errors import (DecompositionFailure, MultiGenerator, NotConverged, NotKoopman,
                     SingularSolve)
from .ideals import require_self_supporting

TOL_MEMBER = 1e-6
ABEL_K_MAX = 40


@dataclass(frozen=True)
class ErgodicNetConfig:
    kind: str = "cesaro"
    N_max: int = 10**6
    tol_conv: float = TOL_CONV
    abel_k_max: int = ABEL_K_MAX
    exact: bool = False

    def __post_init__(self):
        if self.kind not in ("cesaro", "abel", "composed-cesaro"):
            raise ValueError(f"unknown net kind {self.kind!r}")
        if self.N_max < 1:
            raise ValueError("N_max must be at least 1")
        if not 0 < self.tol_conv < 1:
            raise ValueError("tol_conv must lie in (0, 1)")


DEFAULT_CONFIG = ErgodicNetConfig()


@dataclass(frozen=True, eq=False)
class MeanProjection:
    matrix: np.ndarray
    converged: bool
    method: str
    converged_at: int | None = None
    residual: float = 0.0


def _mats(S, cfg):
    return S.matrices if (cfg.exact and S.exact) else S.float_matrices


def cyclic_period(graph, nodes):
    """Period of a strongly connected node set: gcd of its cycle lengths."""
    nodes = set(nodes)
    root = min(nodes)
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.successors(u):
                if v in nodes and v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    for u in nodes:
        for v in graph.successors(u):
            if v in nodes:
                g = math.gcd(g, level[u] + 1 - level[v])
    return g


def period_lcm(S):
    """Least common multiple of the cyclic periods of every generator's
    recurrent classes; ``N`` divisible by it aligns windows with all cycles."""
    def compute():
        out = 1
        for m in S.matrices:
            g = nx.DiGraph()
            g.add_nodes_from(range(S.n))
            xs, ys = np.nonzero(np.asarray(m != 0))
            g.add_edges_from(zip(xs.tolist(), ys.tolist()))
            for comp in nx.strongly_connected_components(g):
                if all(v in comp for u in comp for v in g.successors(u)):
                    out = math.lcm(out, cyclic_period(g, comp))
        return out
    return memo(S, "period", compute)


def power_sum(m, N):
    """``(sum_{k<N} m^k, m^N)`` by binary splitting."""
    exact = m.dtype == object
    n = m.shape[0]
    total = linalg.zeros((n, n), exact)
    acc_pow = linalg.identity(n, exact)
    chunk_sum = linalg.identity(n, exact)
    chunk_pow = m
    while N:
        if N & 1:
            total = total + acc_pow @ chunk_sum
            acc_pow = acc_pow @ chunk_pow
        N >>= 1
        if N:
            chunk_sum = chunk_sum + chunk_pow @ chunk_sum
            chunk_pow = chunk_pow @ chunk_pow
    return total, acc_pow


@dataclass(frozen=True, eq=False)
class NetStep:
    N: int
    cesaro: np.ndarray
    window: np.ndarray


def _compose(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def cesaro_steps(S, cfg=DEFAULT_CONFIG):
    """Yield composed Cesàro and window means for ``N = N0, 2 N0, 4 N0, ...``.

    ``N0`` is the period lcm of :func:`period_lcm` (1 if that exceeds
    ``N_max``).  Iteration stops once ``N`` would exceed ``N_max``.
    """
    mats = _mats(S, cfg)
    exact = mats[0].dtype == object
    N = period_lcm(S)
    if N > cfg.N_max:
        N = 1
    state = []
    for m in mats:
        s, p = power_sum(m, N)
        state.append((s / (Fraction(N) if exact else N), p))
    while True:
        cs = [c for c, _ in state]
        ws = [p @ c for c, p in state]
        yield NetStep(N, _compose(cs), _compose(ws))
        if 2 * N > cfg.N_max:
            return
        state = [((c + w) / (Fraction(2) if exact else 2), p @ p)
                 for (c, p), w in zip(state, ws)]
        N *= 2


def _max_abs(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return max(abs(v) for v in a.ravel())
    return float(np.max(np.abs(a)))


@dataclass(frozen=True, eq=False)
class CesaroNet:
    steps: tuple
    converged: bool
    residual: float

    @property
    def final(self):
        return self.steps[-1]


def cesaro_net(S, cfg=DEFAULT_CONFIG):
    """Run the doubling net until consecutive window means agree to ``tol_conv``."""
    def compute():
        steps = []
        residual = math.inf
        for step in cesaro_steps(S, cfg):
            if steps:
                residual = _max_abs(step.window - steps[-1].window)
            steps.append(step)
            if residual < cfg.tol_conv:
                return CesaroNet(tuple(steps), True, float(residual))
        return CesaroNet(tuple(steps), False, float(residual))
    return memo(S, ("net", cfg), compute)


def cesaro_projection(S, cfg=DEFAULT_CONFIG):
    net = cesaro_net(S, cfg)
    if not net.converged:
        raise NotConverged(f"Cesàro net did not reach tol_conv={cfg.tol_conv:g} by "
                           f"N={net.final.N} (residual {net.residual:.3g})")
    method = "composed-cesaro" if len(S.generators) > 1 else "cesaro"
    return MeanProjection(net.final.window, True, method, net.final.N, net.residual)


def exact_projection(S, tol=linalg.PIVOT_TOL):
    """Projection onto ``fix(S)`` along ``sum_i range(S_i - Id)`` by direct solve.

    With ``F`` spanning ``fix(S)`` and ``W`` spanning the invariant measures
    (the annihilator of ``sum_i range(S_i - Id)``), ``P = F (W^T F)^{-1} W^T``.
    """
    def compute():
        exact = S.exact
        n = S.n
        eye = linalg.identity(n, exact)
        F = linalg.nullspace(np.vstack([m - eye for m in S.matrices]), exact, tol)
        W = linalg.nullspace(np.vstack([m.T - eye for m in S.matrices]), exact, tol)
        if F.shape[1] != W.shape[1]:
            raise DecompositionFailure(
                f"dim fix(S) = {F.shape[1]} but dim fix(S') = {W.shape[1]}")
        try:
            X = linalg.solve(W.T @ F, W.T, exact, tol)
        except np.linalg.LinAlgError:
            raise DecompositionFailure("fix(S) and the range of S - Id do not complement") from None
        P = F @ X
        if not exact:
            P = np.where(np.abs(P) <= 1e-15, 0.0, P)
        return MeanProjection(P, True, "exact")
    return memo(S, ("exact_projection", tol), compute)


def _single(S):
    if len(S.generators) != 1:
        raise MultiGenerator(f"expected one generator, got {len(S.generators)}")
    return S.generators[0]


def abel_operator(S, r):
    """``A_r = (1 - r) (Id - r S)^{-1}`` for a single generator, ``0 < r < 1``."""
    g = _single(S)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    exact = S.exact and isinstance(r, Fraction)
    m = g.matrix if exact else g.as_float()
    eye = linalg.identity(S.n, exact)
    try:
        if exact:
            X = linalg.solve(eye - r * m, eye, True)
        else:
            X = np.linalg.solve(eye - r * m, eye)
    except np.linalg.LinAlgError:
        raise SingularSolve(f"Id - rS singular at r = {r}") from None
    return (1 - r) * X


def abel_radius(k):
    return 1.0 - 2.0 ** -k


def abel_projection(S, cfg=DEFAULT_CONFIG):
    """Limit of the Abel means along ``r_k = 1 - 2^-k``.

    Successive means are combined as ``2 A_{r_{k+1}} - A_{r_k}``, which is
    again a convex combination of powers of ``S`` (the weights
    ``(1-r)(r'^j - r^j)`` are nonnegative) and cancels the ``O(1-r)`` bias, so
    the limit is reached before ``Id - rS`` becomes ill conditioned.
    """
    _single(S)
    prev_a = abel_operator(S, abel_radius(1))
    prev_r = None
    for k in range(2, cfg.abel_k_max + 1):
        a = abel_operator(S, abel_radius(k))
        r = 2 * a - prev_a
        if prev_r is not None:
            residual = _max_abs(r - prev_r)
            if residual < cfg.tol_conv:
                return MeanProjection(r, True, "abel", k, float(residual))
        prev_a, prev_r = a, r
    raise NotConverged(f"Abel means did not converge by k = {cfg.abel_k_max}")


def mean_projection(S, cfg=DEFAULT_CONFIG):
    if cfg.kind == "abel":
        return abel_projection(S, cfg)
    return cesaro_projection(S, cfg)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    trace: tuple
    converged_at: int
    limit_max: float


def radical_membership_via_means(S, L, f, cfg=DEFAULT_CONFIG, tol_member=TOL_MEMBER,
                                 trace_until=None):
    """Decide ``f in rad(I_L)`` from the decay of the means of ``|f|`` on ``L``.

    ``trace`` lists ``(N, max_{x in L} (C_N |f|)(x))`` along the doubling
    schedule, continued past convergence up to ``trace_until`` if given; the
    decision compares the converged window mean with ``tol_member``.
    """
    L = require_self_supporting(S, L)
    net = cesaro_net(S, cfg)
    if not net.converged:
        raise NotConverged(f"Cesàro net did not converge by N={net.final.N}")
    exact = net.final.cesaro.dtype == object
    f = np.asarray(f, dtype=object if exact else float)
    g = np.abs(f) if not exact else np.array([abs(Fraction(v)) for v in f], dtype=object)
    idx = sorted(L)
    steps = net.steps
    if trace_until is not None and trace_until > net.final.N:
        longer = ErgodicNetConfig(cfg.kind, max(cfg.N_max, trace_until), cfg.tol_conv,
                                  cfg.abel_k_max, cfg.exact)
        steps = [st for st in cesaro_steps(S, longer) if st.N <= trace_until]
    trace = tuple((step.N, max((step.cesaro @ g)[idx])) for step in steps)
    limit = max((net.final.window @ g)[idx])
    return MembershipResult(bool(limit < tol_member), trace, net.final.N, limit)


def write_trace_csv(trace, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "decay"])
        for N, d in trace:
            w.writerow([N, str(d) if isinstance(d, Fraction) else repr(float(d))])


def koopman_map(S, which=0):
    """The map ``phi`` of a 0/1 Koopman generator (``S[x, phi(x)] = 1``)."""
    m = S.matrices[which]
    phi = []
    for x in range(S.n):
        nz = np.flatnonzero(np.asarray(m[x] != 0))
        if len(nz) != 1 or m[x, nz[0]] != 1:
            raise NotKoopman(f"row {x} is not a point mass")
        phi.append(int(nz[0]))
    return phi


def _orbit(phi, x):
    """Orbit of ``x`` as ``(prefix, cycle_start)``: ``prefix[cycle_start:]`` repeats."""
    seen = {}
    seq = []
    while x not in seen:
        seen[x] = len(seq)
        seq.append(x)
        x = phi[x]
    return seq, seen[x]


def _orbit_sum(phi, x, N, weight):
    seq, t = _orbit(phi, x)
    if N <= len(seq):
        return sum((weight(y) for y in seq[:N]), 0)
    cycle = seq[t:]
    reps, rem = divmod(N - t, len(cycle))
    return (sum((weight(y) for y in seq[:t]), 0)
            + reps * sum((weight(y) for y in cycle), 0)
            + sum((weight(y) for y in cycle[:rem]), 0))


def _average(total, N):
    return Fraction(total, 1) / N if isinstance(total, (int, Fraction)) else total / N


def almost_weak_stability(S, f, x, N):
    """``(1/N) sum_{n<N} |f(phi^n x)|``."""
    phi = koopman_map(S)
    return _average(_orbit_sum(phi, x, N, lambda y: abs(f[y])), N)


def visit_frequency(S, x, U, N):
    """Fraction of the first ``N`` orbit points of ``x`` lying in ``U``."""
    phi = koopman_map(S)
    U = frozenset(U)
    return Fraction(_orbit_sum(phi, x, N, lambda y: int(y in U)), N)


def entry_time(S, x, target):
    """Steps before the orbit of ``x`` first enters ``target`` (``None`` if never)."""
    phi = koopman_map(S)
    seq, t = _orbit(phi, x)
    for i, y in enumerate(seq):
        if y in target:
            return i
    return None
