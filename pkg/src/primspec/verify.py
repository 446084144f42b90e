"""Randomized verification of the structural results on finite instances.

Each entry of :data:`PROPOSITIONS` is a named check run against every
instance (fixtures plus seeded random systems).  Failures carry the serialized
instance so they replay from the report alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import dump_system, make_semigroup
from .errors import PrimSpecError
from .gelfand import mean_ergodicity_verdict, verify_lattice_isomorphism
from .ideals import (enumerate_s_ideals, is_self_supporting, minimal_self_supporting_sets,
                     restrict_semigroup)
from .means import (ErgodicNetConfig, abel_projection, cesaro_net, cesaro_projection,
                    exact_projection, koopman_map, radical_membership_via_means,
                    visit_frequency)
from .measures import (embed_measure, ergodic_measures, fix_space_dimension, indicator_is_fixed,
                       is_ergodic, is_extreme)
from .oracles import (FORWARD_LIMIT, VERTEX_LIMIT, oracle_closure_by_order,
                      oracle_forward_closed_sets, oracle_polytope_vertices)
from .spectrum import (FULL_ALGEBRA, closure, hull, in_basic_open, is_radical_free,
                       minimal_center_support, prim_spectrum, prime_violations,
                       quotient_spectrum_bijection, radical, radical_witness_measure,
                       specialization_order)
from .systems import (MapSpec, UlamSpec, build_koopman, build_product, build_rotation,
                      build_ulam, random_instance)

TOL = 1e-8
MAX_IDEALS = 64


@dataclass
class OracleReport:
    proposition: str
    instances: int = 0
    failures: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self):
        return self.instances > 0 and not self.failures

    def to_json(self):
        return {"proposition": self.proposition, "instances": self.instances,
                "passed": self.passed, "failures": self.failures,
                "runtime": round(self.runtime, 3)}


def fixtures():
    """Named hand-built systems, including a near-zero adversarial entry."""
    fix_b = [[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]]
    return [
        ("fix-b", make_semigroup([fix_b])),
        ("fix-b-rational", make_semigroup([[[0, "1/2", "1/2"], [0, 1, 0], [0, 0, 1]]], "rational")),
        ("fix-b-near-zero", make_semigroup([[[0, 0.5, 0.5], [1e-13, 1 - 1e-13, 0], [0, 0, 1]]])),
        ("identity-3", make_semigroup([np.eye(3)])),
        ("swap", build_rotation(2, 1)),
        ("rotation-6-2", build_rotation(6, 2)),
        ("rotations-z4", make_semigroup([build_rotation(4, 1).matrices[0],
                                          build_rotation(4, 2).matrices[0]])),
        ("koopman-tail-cycle", build_koopman(MapSpec(4, (1, 2, 3, 2)))),
        ("koopman-fixed-plus-swap", build_koopman(MapSpec(3, (0, 2, 1)))),
        ("ulam-doubling-8", build_ulam(UlamSpec("doubling", 8))),
        ("swap-tensor-swap", build_product(build_rotation(2, 1), build_rotation(2, 1))),
    ]


def _instances(seed, count, max_n, mode):
    out = list(fixtures())
    for i in range(count):
        s = seed * 100003 + i
        out.append((f"random[{seed}:{i}]", random_instance(s, n_max=max_n, mode=mode)))
    return out


def _ideals(S):
    ideals = enumerate_s_ideals(S)
    return ideals[:MAX_IDEALS]


def _close(a, b, tol=TOL):
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))) <= tol


def check_ergodic_iff_extreme(S, rng):
    bad = []
    erg = [e.measure for e in ergodic_measures(S)]
    for mu in erg:
        if not (is_ergodic(S, mu) and is_extreme(S, mu)):
            bad.append(f"ergodic measure on {sorted(np.flatnonzero(np.asarray(mu, float) > 0))} failed a test")
    if S.n <= VERTEX_LIMIT:
        verts = oracle_polytope_vertices(S)
        if len(verts) != len(erg) or not all(any(_close(v, e) for v in verts) for e in erg):
            bad.append(f"{len(verts)} oracle vertices vs {len(erg)} ergodic measures")
    for a, b in combinations(erg, 2):
        mid = (a + b) / 2
        if is_ergodic(S, mid) or is_extreme(S, mid):
            bad.append("a midpoint of two ergodic measures passed the ergodicity test")
    return bad


def check_maximal_primitive(S, rng):
    bad = []
    P = prim_spectrum(S)
    supports = {p.support for p in P.points}
    for L in minimal_self_supporting_sets(S):
        if L not in supports:
            bad.append(f"minimal set {sorted(L)} carries no primitive ideal")
            continue
        mu = np.asarray(P.by_support(L).witness.measure, dtype=float)
        if not all(mu[x] > 0 for x in L):
            bad.append(f"measure on {sorted(L)} not strictly positive")
    if len(supports) != len(minimal_self_supporting_sets(S)):
        bad.append("primitive supports are not exactly the minimal sets")
    return bad


def check_subsystem(S, rng):
    bad = []
    for I in _ideals(S):
        sub = restrict_semigroup(S, I)
        embedded = [embed_measure(S, I, e.measure) for e in
                    ergodic_measures(sub)]
        inside = [e.measure for e in ergodic_measures(S) if e.support <= I.support]
        if len(embedded) != len(inside) or not all(any(_close(a, b) for b in inside)
                                                   for a in embedded):
            bad.append(f"embedding over {sorted(I.support)} does not match")
        for mu in embedded:
            if not is_ergodic(S, mu):
                bad.append(f"embedded measure over {sorted(I.support)} not ergodic")
    return bad


def check_quotient(S, rng):
    bad = []
    for I in _ideals(S):
        try:
            mapping = quotient_spectrum_bijection(S, I)
        except (AssertionError, KeyError) as exc:
            bad.append(f"quotient over {sorted(I.support)}: {exc}")
            continue
        sub = restrict_semigroup(S, I)
        order = sorted(I.support)
        for J in enumerate_s_ideals(sub)[:16]:
            r_sub = radical(sub, J)
            r_S = radical(S, frozenset(order[x] for x in J.support))
            lifted = FULL_ALGEBRA if r_sub is FULL_ALGEBRA else frozenset(
                order[x] for x in r_sub.support)
            if (r_S is FULL_ALGEBRA) != (lifted is FULL_ALGEBRA) or (
                    r_S is not FULL_ALGEBRA and r_S.support != lifted):
                bad.append(f"radicals differ over {sorted(I.support)}")
        if len(mapping) != len(prim_spectrum(sub)):
            bad.append(f"not a bijection over {sorted(I.support)}")
    return bad


def check_homeomorphism(S, rng):
    bad = []
    for I in _ideals(S):
        mapping = quotient_spectrum_bijection(S, I)
        sub = restrict_semigroup(S, I)
        src = list(mapping)
        for r in range(len(src) + 1):
            for A in combinations(src, r):
                img = closure(sub, [mapping[p] for p in A])
                pre = {mapping[p] for p in closure(S, A)}
                if img != pre:
                    bad.append(f"closure not preserved over {sorted(I.support)}")
                    return bad
    return bad


def check_radical_of_measures(S, rng):
    bad = []
    erg = ergodic_measures(S)
    for _ in range(5):
        w = rng.dirichlet(np.ones(len(erg)))
        keep = rng.random(len(erg)) < 0.6
        if not keep.any():
            keep[rng.integers(len(erg))] = True
        w = np.where(keep, w, 0)
        w = w / w.sum()
        mu = sum(wi * np.asarray(e.measure, dtype=float) for wi, e in zip(w, erg))
        supp = frozenset(int(x) for x in np.flatnonzero(mu > 1e-12))
        r = radical(S, supp)
        if r is FULL_ALGEBRA or r.support != supp:
            bad.append(f"I_mu with support {sorted(supp)} is not radical")
    for I in _ideals(S):
        r = radical(S, I)
        if r is FULL_ALGEBRA:
            continue
        mu = np.asarray(radical_witness_measure(S, r), dtype=float)
        supp = frozenset(int(x) for x in np.flatnonzero(mu > 1e-12))
        if supp != r.support:
            bad.append(f"witness support {sorted(supp)} != radical {sorted(r.support)}")
        if not all(_close(mu @ m, mu) for m in S.float_matrices):
            bad.append("witness measure not invariant")
        if radical(S, r) != r:
            bad.append("radical not idempotent")
        if hull(S, I) != hull(S, r):
            bad.append("hull(I) != hull(rad I)")
    return bad


def check_radical_via_means(S, rng, f_per_ideal=4):
    bad = []
    cfg = ErgodicNetConfig()
    center = minimal_center_support(S)
    for I in _ideals(S)[:16]:
        r = radical(S, I)
        rad_support = frozenset() if r is FULL_ALGEBRA else r.support
        for k in range(f_per_ideal):
            f = rng.uniform(-1, 1, S.n)
            if k % 2 == 0:
                f[sorted(rad_support if k % 4 == 0 else center)] = 0.0
            algebraic = bool(np.all(f[sorted(rad_support)] == 0)) if rad_support else True
            res = radical_membership_via_means(S, I.support, f, cfg)
            if res.member != algebraic:
                bad.append(f"L={sorted(I.support)}: means say {res.member}, algebra {algebraic}")
    return bad


def check_center(S, rng):
    bad = []
    M = minimal_center_support(S)
    r = radical(S, frozenset(range(S.n)))
    if r is FULL_ALGEBRA or r.support != M:
        bad.append("minimal center differs from the support of rad(0)")
    if not is_self_supporting(S, M):
        bad.append("minimal center is not self-supporting")
    ind = np.zeros(S.n)
    ind[sorted(M)] = 1.0
    W = np.asarray(cesaro_net(S).final.window, dtype=float)
    if not _close(W @ ind, np.ones(S.n)):
        bad.append("mean occupation of the center does not tend to 1")
    try:
        koopman_map(S)
    except PrimSpecError:
        return bad
    N = 10**4
    for x in range(S.n):
        if visit_frequency(S, x, M, N) < 1 - S.n / N:
            bad.append(f"orbit of {x} visits the center too rarely")
    for y in M:
        U = M - {y}
        if all(visit_frequency(S, x, U, N) >= 1 - S.n / N for x in range(S.n)):
            bad.append(f"center without {y} still attracts every orbit")
    return bad


def check_closure_axioms(S, rng):
    bad = []
    P = prim_spectrum(S)
    pts = list(P.points)
    if len(pts) > 10:
        return bad
    supports = [p.support for p in pts]
    subsets = [frozenset(A) for r in range(len(pts) + 1) for A in combinations(pts, r)]
    cl = {A: closure(P, A) for A in subsets}
    if cl[frozenset()] != frozenset():
        bad.append("closure of the empty set is not empty")
    for A in subsets:
        if not A <= cl[A] or cl[cl[A]] != cl[A]:
            bad.append(f"closure axiom fails at {sorted(map(sorted, supports))}")
            break
        idx = [pts.index(p) for p in A]
        if {pts[j] for j in oracle_closure_by_order(supports, idx)} != cl[A]:
            bad.append("closure disagrees with the specialization down-set")
            break
    for A, B in combinations(subsets, 2):
        if cl[A | B] != cl[A] | cl[B]:
            bad.append("closure is not additive")
            break
    return bad


def check_topology(S, rng):
    bad = []
    P = prim_spectrum(S)
    order = specialization_order(P)
    if not order.t0:
        bad.append("spectrum not T0")
    minimal = set(minimal_self_supporting_sets(S))
    for i, p in enumerate(P.points):
        if (i in order.closed_singletons) != (p.support in minimal):
            bad.append(f"point {sorted(p.support)}: closed iff maximal fails")
    for _ in range(5):
        f = np.where(rng.random(S.n) < 0.5, 0.0, rng.uniform(-1, 1, S.n))
        U = {p for p in P.points if in_basic_open(p, f)}
        comp = set(P.points) - U
        if set(closure(P, comp)) != comp:
            bad.append("basic set U_f is not open")
    if {e.support for e in ergodic_measures(S)} != {p.support for p in P.points} or \
            len(ergodic_measures(S)) != len(P):
        bad.append("mu -> I_mu is not a bijection onto the spectrum")
    if not order.hausdorff:
        bad.append("finite genuine spectrum is not discrete")
    return bad


def check_prime(S, rng):
    viol = prime_violations(S, _ideals(S))
    return [f"prime property fails: {v}" for v in viol[:3]]


def check_specialization(S, rng):
    bad = []
    P = prim_spectrum(S)
    order = specialization_order(P)
    for i, p in enumerate(P.points):
        cl = closure(P, [p])
        for j, q in enumerate(P.points):
            if (q in cl) != order.leq(i, j):
                bad.append("net convergence criterion disagrees with closure")
    return bad


def check_indicator_fixed(S, rng):
    bad = []
    for e in ergodic_measures(S):
        for I in _ideals(S):
            if not indicator_is_fixed(S, e.measure, I.support):
                bad.append(f"1_L not fixed a.e. for L={sorted(I.support)}")
    return bad


def check_hat(S, rng):
    rep = verify_lattice_isomorphism(S, rng=rng, samples=5)
    return list(rep.failures) + ([] if rep.checks.get("bijective") else
                                 [f"dim fix = {rep.fix_dim} != #Prim = {rep.prim_count}"])


def check_mean_ergodic(S, rng):
    bad = []
    try:
        v = mean_ergodicity_verdict(S)
    except PrimSpecError as exc:
        return [f"verdict raised {type(exc).__name__}: {exc}"]
    if not (v.mean_ergodic and v.condition_b_i and v.condition_c_i and v.condition_c_ii
            and v.condition_c_iii):
        bad.append(f"finite instance not mean ergodic: {v.witnesses}")
    P = exact_projection(S).matrix
    if not _close(cesaro_projection(S).matrix, P):
        bad.append("Cesàro limit differs from exact projection")
    if len(S.generators) == 1 and not _close(abel_projection(S).matrix, P):
        bad.append("Abel limit differs from exact projection")
    if fix_space_dimension(S) != len(prim_spectrum(S)):
        bad.append("dim fix(S) != #Prim(S)")
    return bad


def check_restricted_mean_ergodic(S, rng):
    M = minimal_center_support(S)
    sub = restrict_semigroup(S, M)
    v = mean_ergodicity_verdict(sub)
    bad = [] if v.mean_ergodic else ["semigroup on the minimal center is not mean ergodic"]
    if is_radical_free(S) and M != frozenset(range(S.n)):
        bad.append("radical free but center is not everything")
    return bad


def check_forward_closed(S, rng):
    if S.n > FORWARD_LIMIT:
        return []
    a = {I.support for I in enumerate_s_ideals(S)}
    b = set(oracle_forward_closed_sets(S))
    return [] if a == b else [f"{len(a)} enumerated vs {len(b)} brute-force closed sets"]


PROPOSITIONS = [
    ("invariant-ideals-are-forward-closed-sets", check_forward_closed),
    ("ergodic-iff-extreme-point", check_ergodic_iff_extreme),
    ("maximal-invariant-ideals-are-primitive", check_maximal_primitive),
    ("subsystem-measures-embed", check_subsystem),
    ("quotient-spectrum-bijection", check_quotient),
    ("absolute-kernels-are-radical-with-witness", check_radical_of_measures),
    ("radical-membership-by-mean-decay", check_radical_via_means),
    ("minimal-center-is-support-of-radical", check_center),
    ("hull-kernel-closure-is-kuratowski", check_closure_axioms),
    ("topology-t0-basis-closed-points-surjection", check_topology),
    ("primitive-ideals-are-prime", check_prime),
    ("specialization-order-convergence", check_specialization),
    ("indicator-of-invariant-set-is-fixed", check_indicator_fixed),
    ("quotient-spectrum-homeomorphism", check_homeomorphism),
    ("hat-map-isometric-lattice-isomorphism", check_hat),
    ("mean-ergodicity-characterization", check_mean_ergodic),
    ("mean-ergodic-iff-center-and-extension", check_restricted_mean_ergodic),
]


def run_suite(seed=42, count=100, max_n=8, mode="float", extra=()):
    """Run every proposition over fixtures, ``extra`` and ``count`` random systems.

    ``extra`` is an iterable of ``(name, semigroup)`` pairs.  Returns one
    :class:`OracleReport` per proposition, in a fixed order.
    """
    instances = _instances(seed, count, max_n, mode) + list(extra)
    reports = []
    for pid, check in PROPOSITIONS:
        rep = OracleReport(pid)
        t0 = time.perf_counter()
        for idx, (name, S) in enumerate(instances):
            rng = np.random.default_rng([seed, idx])
            try:
                fails = check(S, rng)
            except PrimSpecError as exc:
                fails = [f"raised {type(exc).__name__}: {exc}"]
            rep.instances += 1
            for msg in fails:
                rep.failures.append({"instance": name, "message": msg,
                                     "system": dump_system(S).to_dict()})
        rep.runtime = time.perf_counter() - t0
        reports.append(rep)
    return reports
