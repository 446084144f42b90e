"""Functions, measures and Markov operators on a finite space ``K = {0..n-1}``.

Functions on ``K`` and measures on ``K`` are plain 1-d numpy arrays.  In
rational mode they are object arrays holding :class:`fractions.Fraction`.
A Markov operator is a row-stochastic matrix ``S`` acting on functions by
``(S f)(x) = sum_y S[x, y] f(y)`` and on measures by ``mu -> mu @ S``.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path

import networkx as nx
import numpy as np

from . import linalg
from .errors import DimensionMismatch, InputError, NonAbelian, NonStochastic, OutOfRange

log = logging.getLogger(__name__)

TOL_ZERO = 1e-12
TOL_SUPP = 1e-12
TOL_ROW = 1e-9
TOL_COMM = 1e-9
TOL_CONV = 1e-9

MODES = ("float", "rational")

_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def parse_entry(value, mode):
    """Parse one matrix entry from JSON.

    Rational mode accepts integers and ``"p/q"`` strings (``q > 0``); float
    mode accepts JSON numbers and, for convenience, the same strings.
    """
    if isinstance(value, bool):
        raise InputError(f"boolean is not a matrix entry: {value!r}")
    if isinstance(value, str):
        if not _RATIONAL.match(value):
            raise InputError(f"malformed rational entry {value!r}; expected 'p/q'")
        try:
            q = Fraction(value.replace(" ", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed rational entry {value!r}: {exc}") from None
        return q if mode == "rational" else float(q)
    if isinstance(value, int):
        return Fraction(value) if mode == "rational" else float(value)
    if isinstance(value, float):
        if mode == "rational":
            raise InputError(f"float entry {value!r} in rational mode; write it as 'p/q'")
        return value
    raise InputError(f"unsupported matrix entry {value!r}")


def format_entry(value):
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


@dataclass(frozen=True, eq=False)
class MarkovOp:
    """A row-stochastic matrix; row ``x`` is the transition measure of ``x``."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def exact(self):
        return self.matrix.dtype == object

    def as_float(self):
        return np.asarray(self.matrix, dtype=float)


@dataclass(frozen=True, eq=False)
class MarkovSemigroup:
    """Abelian semigroup generated by commuting Markov operators.

    Instances are validated on construction through :func:`make_semigroup`;
    build them with that function or :func:`load_system`.
    """

    generators: tuple
    mode: str = "float"
    labels: tuple | None = None

    @property
    def n(self):
        return self.generators[0].n

    @property
    def exact(self):
        return self.mode == "rational"

    @property
    def matrices(self):
        return [g.matrix for g in self.generators]

    @cached_property
    def float_matrices(self):
        return [g.as_float() for g in self.generators]

    @cached_property
    def digraph(self):
        """Union support digraph: ``x -> y`` iff some generator charges ``y`` from ``x``."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        for m in self.matrices:
            xs, ys = np.nonzero(np.asarray(m != 0))
            g.add_edges_from(zip(xs.tolist(), ys.tolist()))
        return g

    @cached_property
    def successors(self):
        return [frozenset(self.digraph.successors(x)) for x in range(self.n)]

    def label(self, x):
        return self.labels[x] if self.labels else str(x)


def _clean_float(m, tol_zero, tol_supp, tol_row, which):
    if np.any(m < -tol_zero):
        x, y = np.argwhere(m < -tol_zero)[0]
        raise NonStochastic(f"generator {which}: negative entry {float(m[x, y]):.3g} at ({x}, {y})")
    tiny = (m <= tol_supp) & (m != 0)
    if np.any(tiny):
        log.info("generator %d: %d entries at or below tol_supp=%g set to 0",
                 which, int(tiny.sum()), tol_supp)
    m = np.where(m <= tol_supp, 0.0, m)
    sums = m.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol_row)
    if bad.size:
        x = int(bad[0])
        raise NonStochastic(f"generator {which}: row {x} sums to {float(sums[x]):.12g}")
    return m / sums[:, None]


def _clean_exact(m, which):
    for (x, y), v in np.ndenumerate(m):
        if v < 0:
            raise NonStochastic(f"generator {which}: negative entry {v} at ({x}, {y})")
    for x in range(m.shape[0]):
        s = sum(m[x], Fraction(0))
        if s != 1:
            raise NonStochastic(f"generator {which}: row {x} sums to {s}")
    return m


def commutator_norm(a, b):
    c = a @ b - b @ a
    if c.dtype == object:
        return max((abs(v) for v in c.ravel()), default=Fraction(0))
    return float(np.max(np.abs(c))) if c.size else 0.0


def make_semigroup(matrices, mode="float", labels=None, *, tol_zero=TOL_ZERO,
                   tol_supp=TOL_SUPP, tol_row=TOL_ROW, tol_comm=TOL_COMM):
    """Validate generator matrices and return a :class:`MarkovSemigroup`.

    Float entries at or below ``tol_supp`` are zeroed and rows within
    ``tol_row`` of stochastic are renormalized; rational mode demands exact
    stochasticity and exact commutation.
    """
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
    if len(matrices) == 0:
        raise InputError("at least one generator is required")
    exact = mode == "rational"
    cleaned = []
    n = None
    for i, raw in enumerate(matrices):
        m = linalg.as_matrix(raw, exact)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"generator {i} has shape {m.shape}; expected square")
        if n is None:
            n = m.shape[0]
        elif m.shape[0] != n:
            raise DimensionMismatch(f"generator {i} is {m.shape[0]}x{m.shape[0]}, expected {n}x{n}")
        if n < 1:
            raise DimensionMismatch("state space must be nonempty")
        m = _clean_exact(m, i) if exact else _clean_float(m, tol_zero, tol_supp, tol_row, i)
        cleaned.append(m)
    for (i, a), (j, b) in combinations(enumerate(cleaned), 2):
        c = commutator_norm(a, b)
        if (exact and c != 0) or (not exact and c > tol_comm):
            raise NonAbelian(f"generators {i} and {j} do not commute "
                             f"(max |[S{i}, S{j}]| = {float(c):.3g}); right amenability "
                             "cannot be certified")
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise DimensionMismatch(f"{len(labels)} labels for {n} states")
    return MarkovSemigroup(tuple(MarkovOp(m) for m in cleaned), mode, labels)


@dataclass
class SystemSpec:
    """The on-disk JSON form of a system."""

    n: int
    mode: str
    generators: list
    labels: list | None = None

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise InputError("system file must hold a JSON object")
        missing = [k for k in ("n", "generators") if k not in d]
        if missing:
            raise InputError(f"system file lacks required key(s): {', '.join(missing)}")
        n = d["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError(f"'n' must be a positive integer, got {n!r}")
        mode = d.get("mode", "float")
        if mode not in MODES:
            raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
        gens = d["generators"]
        if not isinstance(gens, list) or not gens:
            raise InputError("'generators' must be a nonempty list of matrices")
        return cls(n, mode, gens, d.get("labels"))

    def to_dict(self):
        d = {"n": self.n, "mode": self.mode, "generators": self.generators}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def load_system(spec, **tols):
    """Build a validated semigroup from a :class:`SystemSpec` or plain dict."""
    if isinstance(spec, dict):
        spec = SystemSpec.from_dict(spec)
    mats = []
    for i, g in enumerate(spec.generators):
        if not isinstance(g, list) or len(g) != spec.n or any(
                not isinstance(row, list) or len(row) != spec.n for row in g):
            raise DimensionMismatch(f"generator {i} is not a {spec.n}x{spec.n} list of rows")
        mats.append([[parse_entry(v, spec.mode) for v in row] for row in g])
    if spec.mode == "rational":
        mats = [linalg.as_matrix(m, True) for m in mats]
    return make_semigroup(mats, spec.mode, spec.labels, **tols)


def dump_system(S):
    gens = [[[format_entry(v) for v in row] for row in m.tolist()] for m in S.matrices]
    return SystemSpec(S.n, S.mode, gens, list(S.labels) if S.labels else None)


def read_system(path, **tols):
    """Load a system JSON file, reporting parse errors with line numbers."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    try:
        return load_system(data, **tols)
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def write_system(S, path):
    Path(path).write_text(dump_system(S).to_json() + "\n", encoding="utf-8")


def _check_dims(a, n, what):
    if np.shape(a) != (n,):
        raise DimensionMismatch(f"{what} has shape {np.shape(a)}, expected ({n},)")


def apply(S, f):
    """``(S f)(x) = sum_y S[x, y] f(y)``."""
    m = S.matrix if isinstance(S, MarkovOp) else np.asarray(S)
    _check_dims(f, m.shape[0], "function")
    return m @ np.asarray(f)


def adjoint_apply(S, mu):
    """The dual action ``S' mu = mu @ S``."""
    m = S.matrix if isinstance(S, MarkovOp) else np.asarray(S)
    _check_dims(mu, m.shape[0], "measure")
    return np.asarray(mu) @ m


def pairing(f, mu):
    return np.asarray(f) @ np.asarray(mu)


def mass(mu):
    return sum(np.asarray(mu).tolist(), 0)


def support(mu, tol=TOL_SUPP):
    mu = np.asarray(mu)
    if mu.dtype == object:
        return frozenset(int(i) for i in np.flatnonzero(mu != 0))
    return frozenset(int(i) for i in np.flatnonzero(mu > tol))


def is_probability(mu, tol=TOL_ZERO):
    mu = np.asarray(mu)
    if mu.dtype == object:
        return all(v >= 0 for v in mu) and mass(mu) == 1
    return bool(np.all(mu >= -tol) and abs(mu.sum() - 1.0) <= tol * max(1, mu.size))


def as_subset(L, n):
    """Normalize an iterable of states to a frozenset, checking range."""
    out = frozenset(int(x) for x in L)
    bad = [x for x in out if not 0 <= x < n]
    if bad:
        raise OutOfRange(f"states {sorted(bad)} outside 0..{n - 1}")
    return out


def indicator(n, L, exact=False):
    v = linalg.zeros(n, exact)
    for x in L:
        v[x] = Fraction(1) if exact else 1.0
    return v


def delta(n, x, exact=False):
    return indicator(n, [x], exact)


def memo(S, key, compute):
    """Per-instance memoization for derived objects of an immutable semigroup."""
    cache = S.__dict__.setdefault("_memo", {})
    if key not in cache:
        cache[key] = compute()
    return cache[key]
