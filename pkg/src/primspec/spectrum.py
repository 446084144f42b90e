"""The primitive spectrum and its hull-kernel topology.

Primitive ideals are the absolute kernels ``I_mu`` of ergodic measures; each
is keyed by its support.  Ideal inclusion reverses support inclusion, so
``hull``/``ker``/closure reduce to set operations on supports.

A :class:`PrimSpectrum` can also be built directly from a list of supports
(:meth:`PrimSpectrum.mock`).  Genuine finite Markov semigroups always have
pairwise disjoint minimal supports; mocks exist so the non-discrete code paths
can be exercised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .core import MarkovSemigroup, as_subset, memo
from .errors import EmptyFamily, NoErgodicInside
from .ideals import SIdeal, require_self_supporting, restrict_semigroup
from .measures import ErgodicMeasure, ergodic_measures
from .report import encode_vector


class _FullAlgebra:
    """Sentinel for the improper ideal ``C(K)`` (support = empty set)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    support = frozenset()

    def __repr__(self):
        return "FULL_ALGEBRA"


FULL_ALGEBRA = _FullAlgebra()


@dataclass(frozen=True)
class PrimPoint:
    support: frozenset
    witness: ErgodicMeasure | None = field(default=None, compare=False, repr=False)

    def __repr__(self):
        return f"PrimPoint({sorted(self.support)})"


@dataclass(frozen=True)
class RadicalIdeal:
    support: frozenset

    def __repr__(self):
        return f"RadicalIdeal({sorted(self.support)})"


@dataclass(frozen=True, eq=False)
class PrimSpectrum:
    points: tuple
    n: int
    mocked: bool = False

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def by_support(self, L):
        L = frozenset(L)
        for p in self.points:
            if p.support == L:
                return p
        raise KeyError(sorted(L))

    @classmethod
    def mock(cls, supports, n=None):
        """Spectrum with arbitrary supports and no witness measures (test fixtures)."""
        pts = tuple(PrimPoint(frozenset(s)) for s in supports)
        if len({p.support for p in pts}) != len(pts):
            raise ValueError("mock supports must be pairwise distinct")
        if n is None:
            n = 1 + max((max(p.support) for p in pts if p.support), default=-1)
        return cls(pts, n, mocked=True)


def prim_spectrum(S):
    def compute():
        pts = tuple(PrimPoint(e.support, e) for e in ergodic_measures(S))
        return PrimSpectrum(pts, S.n)
    return memo(S, "prim", compute)


def _spectrum(obj):
    return prim_spectrum(obj) if isinstance(obj, MarkovSemigroup) else obj


def _support_of(I):
    if I is FULL_ALGEBRA:
        return frozenset()
    if isinstance(I, (SIdeal, RadicalIdeal, PrimPoint)):
        return I.support
    return frozenset(I)


def hull(P, I):
    """Primitive ideals containing ``I``: those whose support lies inside ``supp I``."""
    P = _spectrum(P)
    L = _support_of(I)
    return frozenset(p for p in P.points if p.support <= L)


def ker(A):
    """Intersection of the primitive ideals in ``A``, returned as its support.

    Raises :class:`EmptyFamily` for ``A = {}``; use :func:`ker_or_full` when
    the full algebra is an acceptable answer.
    """
    A = list(A)
    if not A:
        raise EmptyFamily("ker of the empty family is the full algebra")
    return frozenset().union(*(p.support for p in A))


def ker_or_full(A):
    A = list(A)
    return ker(A) if A else FULL_ALGEBRA


def closure(P, A):
    """Hull-kernel closure ``hull(ker(A))``."""
    P = _spectrum(P)
    return hull(P, ker_or_full(A))


def radical(S, I):
    """``rad(I) = ker(hull(I))``; ``FULL_ALGEBRA`` when no primitive ideal contains ``I``."""
    h = hull(S, I)
    if not h:
        return FULL_ALGEBRA
    return RadicalIdeal(ker(h))


def is_radical_free(S):
    P = _spectrum(S)
    covered = frozenset().union(*(p.support for p in P.points)) if P.points else frozenset()
    return len(covered) == P.n


def minimal_center_support(S):
    """The minimal center of attraction: union of the ergodic supports."""
    P = _spectrum(S)
    return frozenset().union(*(p.support for p in P.points)) if P.points else frozenset()


def radical_witness_measure(S, R):
    """Invariant probability ``mu`` with ``I_mu = R``: the mean of the ergodic
    measures supported inside ``R``."""
    L = _support_of(R)
    inside = [e for e in ergodic_measures(S) if e.support <= L]
    if not inside:
        raise NoErgodicInside(f"no ergodic support inside {sorted(L)}")
    k = Fraction(len(inside)) if S.exact else float(len(inside))
    total = linalg.zeros(S.n, S.exact)
    for e in inside:
        total = total + e.measure
    return total / k


def in_basic_open(p, f, tol=0.0):
    """Membership of ``p`` in the basic open set ``U_f = {p : f not in p}``."""
    vals = np.asarray([f[x] for x in sorted(p.support)], dtype=float)
    return bool(np.any(np.abs(vals) > tol))


@dataclass(frozen=True)
class SpecializationOrder:
    """``(i, j)`` in ``relation`` iff point ``j`` lies in the closure of point ``i``."""

    relation: frozenset
    size: int
    t0: bool
    hausdorff: bool
    closed_singletons: tuple

    def leq(self, i, j):
        return (i, j) in self.relation


def specialization_order(P):
    P = _spectrum(P)
    pts = P.points
    rel = frozenset((i, j) for i, p in enumerate(pts) for j, q in enumerate(pts)
                    if q.support <= p.support)
    t0 = all(not ((i, j) in rel and (j, i) in rel) for i, j in rel if i != j)
    assert t0, "distinct supports always give a T0 spectrum"
    closed = tuple(i for i in range(len(pts)) if all((i, j) not in rel for j in range(len(pts)) if j != i))
    # a finite T0 space is Hausdorff iff it is discrete
    hausdorff = len(closed) == len(pts)
    return SpecializationOrder(rel, len(pts), t0, hausdorff, closed)


def quotient_spectrum_bijection(S, I):
    """Match ``{p : supp p inside supp I}`` with ``Prim`` of the restricted system.

    Returns a dict from points of ``Prim(S)`` to points of the restricted
    spectrum.  Restricted states are ``sorted(supp I)`` renumbered from 0.
    """
    L = I.support if isinstance(I, SIdeal) else as_subset(I, S.n)
    require_self_supporting(S, L)
    sub = restrict_semigroup(S, L)
    index = {x: i for i, x in enumerate(sorted(L))}
    back = {i: x for x, i in index.items()}
    target = prim_spectrum(sub)
    mapping = {}
    for p in hull(S, L):
        image = frozenset(index[x] for x in p.support)
        mapping[p] = target.by_support(image)
    if len(mapping) != len(target):
        missing = [sorted(back[i] for i in q.support) for q in target.points
                   if q not in mapping.values()]
        raise AssertionError(f"restricted spectrum has unmatched points {missing}")
    return mapping


def prime_violations(P, ideals):
    """Pairs of invariant ideals violating ``I1 & I2 in p => I1 in p or I2 in p``."""
    P = _spectrum(P)
    bad = []
    for a, b in combinations(ideals, 2):
        L1, L2 = _support_of(a), _support_of(b)
        for p in P.points:
            if p.support <= (L1 | L2) and not (p.support <= L1 or p.support <= L2):
                bad.append((sorted(L1), sorted(L2), sorted(p.support)))
    return bad


def report_fragment(S):
    """``{"prim": [...], "radical_free": bool, "center": [...]}`` for JSON reports."""
    P = prim_spectrum(S)
    return {
        "prim": [{"support": sorted(p.support), "measure": encode_vector(p.witness.measure)}
                 for p in P.points],
        "radical_free": is_radical_free(S),
        "center": sorted(minimal_center_support(S)),
    }


def to_dot(P, name="prim"):
    """Graphviz source: one node per point, edges along the specialization order."""
    P = _spectrum(P)
    order = specialization_order(P)
    lines = [f"digraph {name} {{"]
    for i, p in enumerate(P.points):
        lines.append(f'  p{i} [label="{{{",".join(map(str, sorted(p.support)))}}}"];')
    for i, j in sorted(order.relation):
        if i != j:
            lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
