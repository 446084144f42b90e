"""Brute-force reference computations.

These deliberately share no code with the production paths they check: the
forward-closure oracle scans all subsets, and the vertex oracle runs the
double description method on the invariant-measure cone with its own
arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import TooLarge

FORWARD_LIMIT = 8
VERTEX_LIMIT = 10
_EPS = 1e-11


def oracle_forward_closed_sets(G):
    """All nonempty subsets closed under out-edges, by exhaustive scan."""
    G = getattr(G, "digraph", G)
    n = G.number_of_nodes()
    if n > FORWARD_LIMIT:
        raise TooLarge(f"oracle scans 2^n subsets; n = {n} exceeds {FORWARD_LIMIT}")
    out_mask = [0] * n
    for x, y in G.edges():
        out_mask[x] |= 1 << y
    found = []
    for mask in range(1, 1 << n):
        closed = all(out_mask[x] & ~mask == 0 for x in range(n) if mask >> x & 1)
        if closed:
            found.append(frozenset(x for x in range(n) if mask >> x & 1))
    return found


def oracle_polytope_vertices(S):
    """Vertices of ``{mu >= 0, sum mu = 1, mu S_i = mu}`` by double description.

    The cone ``{mu >= 0 : mu (S_i - Id) = 0}`` starts as the nonnegative
    orthant (extreme rays ``e_x``) and is cut by one hyperplane at a time.
    Adjacent rays on opposite sides are combined; adjacency uses the
    combinatorial test on zero patterns.  Vertices are the final rays scaled
    to mass one.
    """
    n = S.n
    if n > VERTEX_LIMIT:
        raise TooLarge(f"double description oracle limited to n <= {VERTEX_LIMIT}")
    exact = S.exact
    if exact:
        mats = [[[Fraction(v) for v in row] for row in m.tolist()] for m in S.matrices]
        zero = Fraction(0)
        one = Fraction(1)
    else:
        mats = [m.astype(float).tolist() for m in S.matrices]
        zero, one = 0.0, 1.0

    def is_zero(v):
        return v == 0 if exact else abs(v) <= _EPS

    hyperplanes = []
    for m in mats:
        for j in range(n):
            a = [m[x][j] - (one if x == j else zero) for x in range(n)]
            if not all(is_zero(v) for v in a):
                hyperplanes.append(a)

    rays = [[one if x == y else zero for x in range(n)] for y in range(n)]
    for a in hyperplanes:
        vals = [sum(ai * ri for ai, ri in zip(a, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if not is_zero(v) and v > 0]
        neg = [i for i, v in enumerate(vals) if not is_zero(v) and v < 0]
        keep = [rays[i] for i, v in enumerate(vals) if is_zero(v)]
        zsets = [frozenset(x for x, v in enumerate(r) if is_zero(v)) for r in rays]
        for i in pos:
            for j in neg:
                common = zsets[i] & zsets[j]
                if any(k not in (i, j) and common <= zsets[k] for k in range(len(rays))):
                    continue
                new = [vals[i] * rj - vals[j] * ri for ri, rj in zip(rays[i], rays[j])]
                total = sum(new)
                new = [v / total for v in new]
                if not exact:
                    new = [0.0 if abs(v) <= 1e-13 else v for v in new]
                keep.append(new)
        rays = keep
        if not rays:
            break

    verts = []
    for r in rays:
        total = sum(r)
        v = [x / total for x in r]
        if not any(_same(v, w, exact) for w in verts):
            verts.append(v)
    return [np.array(v, dtype=object if exact else float) for v in verts]


def _same(u, v, exact):
    if exact:
        return u == v
    return max(abs(a - b) for a, b in zip(u, v)) <= 1e-9


def oracle_closure_by_order(supports, A):
    """Closure as the down-set of ``A`` in the specialization preorder:
    ``q`` is in it iff ``supp q`` is contained in ``supp p`` for some ``p`` in ``A``."""
    return frozenset(j for j, s in enumerate(supports)
                     if any(s <= supports[i] for i in A))


def oracle_open_sets(supports):
    """All open sets of the hull-kernel topology (n_points <= 8), by brute force.

    ``U`` is open iff its complement is closed, i.e. equal to the set of points
    whose support fits inside the union of the complement's supports.
    """
    k = len(supports)
    if k > 8:
        raise TooLarge("open-set enumeration limited to 8 points")
    opens = []
    for r in range(k + 1):
        for U in combinations(range(k), r):
            comp = [j for j in range(k) if j not in U]
            if oracle_closure_by_order(supports, comp) == frozenset(comp):
                opens.append(frozenset(U))
    return opens
