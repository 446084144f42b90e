"""Invariant ideals through their supports.

A closed ideal of ``C(K)`` on a finite space is ``I_L = {f : f|_L = 0}`` for a
unique subset ``L``; it is invariant under the semigroup exactly when ``L`` is
forward closed in the union support digraph.  Everything here therefore works
on subsets of ``K`` (frozensets) and on the digraph.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .core import MarkovSemigroup, as_subset, make_semigroup
from .errors import NotSelfSupporting, TooLarge

ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class SIdeal:
    """The proper invariant ideal ``I_L`` represented by its support ``L``."""

    support: frozenset

    @property
    def proper(self):
        return bool(self.support)

    def is_zero(self, n):
        return len(self.support) == n

    def __repr__(self):
        return f"SIdeal({sorted(self.support)})"


def _graph(G):
    return G.digraph if isinstance(G, MarkovSemigroup) else G


def escaping_edge(G, L):
    """An edge ``x -> y`` with ``x`` in ``L`` and ``y`` outside, or ``None``."""
    G = _graph(G)
    for x in sorted(L):
        for y in sorted(G.successors(x)):
            if y not in L:
                return (x, y)
    return None


def is_self_supporting(G, L):
    G = _graph(G)
    L = frozenset(L)
    return bool(L) and escaping_edge(G, L) is None


def require_self_supporting(G, L):
    L = frozenset(L)
    if not L:
        raise NotSelfSupporting("the empty set is not self-supporting")
    edge = escaping_edge(G, L)
    if edge is not None:
        raise NotSelfSupporting(
            f"{sorted(L)} is not self-supporting: edge {edge[0]}->{edge[1]} leaves it",
            edge=edge)
    return L


def minimal_self_supporting_sets(G):
    """Terminal strongly connected components, ordered by smallest element."""
    G = _graph(G)
    out = []
    for comp in nx.strongly_connected_components(G):
        if all(y in comp for x in comp for y in G.successors(x)):
            out.append(frozenset(comp))
    return sorted(out, key=min)


def enumerate_s_ideals(G):
    """All proper invariant ideals, i.e. all nonempty forward-closed sets.

    Works on the condensation: a forward-closed set is a union of strongly
    connected components that is closed under taking successor components.
    """
    G = _graph(G)
    n = G.number_of_nodes()
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"n = {n} exceeds the enumeration limit {ENUMERATION_LIMIT}; "
                       "use minimal_self_supporting_sets instead")
    cond = nx.condensation(G)
    # successors before predecessors, so inclusion decisions only look back
    order = list(reversed(list(nx.topological_sort(cond))))
    members = [frozenset(cond.nodes[c]["members"]) for c in order]
    pos = {c: i for i, c in enumerate(order)}
    succ = [[pos[d] for d in cond.successors(c)] for c in order]
    found = []

    def walk(i, chosen, acc):
        if i == len(order):
            if acc:
                found.append(acc)
            return
        walk(i + 1, chosen, acc)
        if all(chosen[j] for j in succ[i]):
            chosen[i] = True
            walk(i + 1, chosen, acc | members[i])
            chosen[i] = False

    walk(0, [False] * len(order), frozenset())
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [SIdeal(s) for s in found]


def restrict_semigroup(S, I):
    """The semigroup induced on ``C(supp I)``.

    States of the result are the elements of ``supp I`` in increasing order.
    """
    L = I.support if isinstance(I, SIdeal) else as_subset(I, S.n)
    require_self_supporting(S, L)
    idx = np.array(sorted(L))
    mats = [m[np.ix_(idx, idx)] for m in S.matrices]
    labels = [S.label(int(x)) for x in idx]
    return make_semigroup(mats, S.mode, labels)


def to_dot(S, name="support"):
    """Graphviz source for the support digraph, minimal sets drawn as clusters."""
    G = S.digraph
    minimal = minimal_self_supporting_sets(G)
    lines = [f"digraph {name} {{"]
    for k, comp in enumerate(minimal):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="minimal {k}"; style=filled; color=lightgrey;')
        for x in sorted(comp):
            lines.append(f'    {x} [label="{S.label(x)}"];')
        lines.append("  }")
    inside = set().union(*minimal) if minimal else set()
    for x in range(S.n):
        if x not in inside:
            lines.append(f'  {x} [label="{S.label(x)}"];')
    for x, y in sorted(G.edges()):
        lines.append(f"  {x} -> {y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
