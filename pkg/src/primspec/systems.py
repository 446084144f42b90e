"""Instance builders: Koopman operators of finite maps, cyclic rotations,
Ulam discretizations of piecewise-affine interval maps, products, and seeded
random systems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .core import make_semigroup
from .errors import DegenerateBranch, InputError, OutOfRange


@dataclass(frozen=True)
class MapSpec:
    n: int
    image: tuple

    def __post_init__(self):
        if len(self.image) != self.n:
            raise OutOfRange(f"map has {len(self.image)} images for {self.n} states")
        bad = [y for y in self.image if not 0 <= y < self.n]
        if bad:
            raise OutOfRange(f"images {bad} outside 0..{self.n - 1}")


def koopman_matrix(image, exact=False):
    n = len(image)
    m = linalg.zeros((n, n), exact)
    for x, y in enumerate(image):
        m[x, y] = Fraction(1) if exact else 1.0
    return m


def build_koopman(spec, mode="float"):
    """Koopman operator ``f -> f o phi`` of a self-map of ``{0..n-1}``."""
    if not isinstance(spec, MapSpec):
        spec = MapSpec(len(spec), tuple(int(y) for y in spec))
    return make_semigroup([koopman_matrix(spec.image, mode == "rational")], mode)


def build_rotation(n, a, mode="float"):
    """``x -> x + a mod n``; its orbits number ``gcd(n, a)``."""
    if n < 1:
        raise InputError("n must be positive")
    return build_koopman(MapSpec(n, tuple((x + a) % n for x in range(n))), mode)


@dataclass(frozen=True)
class UlamSpec:
    """Piecewise-affine map of ``[0, 1)`` and a uniform partition into ``cells``.

    ``kind`` is ``"doubling"``, ``"rotation"`` (uses ``alpha``) or ``"custom"``
    (uses ``branches``: tuples ``(lo, hi, slope, intercept)`` meaning
    ``phi(x) = slope * x + intercept`` on ``[lo, hi)``).
    """

    kind: str
    cells: int
    alpha: object = None
    branches: tuple = ()

    def affine_branches(self):
        if self.kind == "doubling":
            half = Fraction(1, 2)
            return [(Fraction(0), half, Fraction(2), Fraction(0)),
                    (half, Fraction(1), Fraction(2), Fraction(-1))]
        if self.kind == "rotation":
            a = Fraction(self.alpha) % 1
            if a == 0:
                return [(Fraction(0), Fraction(1), Fraction(1), Fraction(0))]
            return [(Fraction(0), 1 - a, Fraction(1), a), (1 - a, Fraction(1), Fraction(1), a - 1)]
        if self.kind == "custom":
            return [tuple(Fraction(v) for v in b) for b in self.branches]
        raise InputError(f"unknown Ulam map kind {self.kind!r}")


def _check_branches(branches):
    branches = sorted(branches)
    if not branches or branches[0][0] != 0 or branches[-1][1] != 1:
        raise InputError("branches must cover [0, 1)")
    for (lo, hi, _, _), (lo2, _, _, _) in zip(branches, branches[1:]):
        if hi != lo2:
            raise InputError(f"branches leave a gap or overlap at {float(hi)}")
    for lo, hi, slope, icpt in branches:
        if lo >= hi:
            raise InputError(f"empty branch [{lo}, {hi})")
        if slope == 0:
            raise DegenerateBranch(f"branch [{lo}, {hi}) has slope 0")
        ends = (slope * lo + icpt, slope * hi + icpt)
        if min(ends) < 0 or max(ends) > 1:
            raise InputError(f"branch [{lo}, {hi}) maps outside [0, 1]")
    return branches


def build_ulam(spec, mode="float"):
    """Ulam matrix ``P[i, j] = |cell_i & phi^{-1}(cell_j)| / |cell_i|``, exact for
    affine branches."""
    c = spec.cells
    if c < 2:
        raise InputError("Ulam discretization needs at least 2 cells")
    branches = _check_branches(spec.affine_branches())
    P = [[Fraction(0)] * c for _ in range(c)]
    for i in range(c):
        left, right = Fraction(i, c), Fraction(i + 1, c)
        for lo, hi, slope, icpt in branches:
            a, b = max(lo, left), min(hi, right)
            if a >= b:
                continue
            y0, y1 = sorted((slope * a + icpt, slope * b + icpt))
            for j in range(math.floor(y0 * c), min(c, math.ceil(y1 * c))):
                overlap = min(y1, Fraction(j + 1, c)) - max(y0, Fraction(j, c))
                if overlap > 0:
                    P[i][j] += overlap / abs(slope) * c
    return make_semigroup([linalg.as_matrix(P, mode == "rational")], mode)


def build_product(S1, S2, kind="tensor"):
    """Semigroup on the product space.

    ``kind="tensor"`` uses all ``S1_i (x) S2_j``; ``"independent"`` uses
    ``S1_i (x) Id`` and ``Id (x) S2_j``; ``"both"`` uses all of them.
    """
    if S1.mode != S2.mode:
        raise InputError("product factors must share a mode")
    if kind not in ("tensor", "independent", "both"):
        raise InputError(f"unknown product kind {kind!r}")
    exact = S1.exact
    I1, I2 = linalg.identity(S1.n, exact), linalg.identity(S2.n, exact)
    gens = []
    if kind in ("tensor", "both"):
        gens += [np.kron(a, b) for a in S1.matrices for b in S2.matrices]
    if kind in ("independent", "both"):
        gens += [np.kron(a, I2) for a in S1.matrices]
        gens += [np.kron(I1, b) for b in S2.matrices]
    labels = [f"({S1.label(x)},{S2.label(y)})" for x in range(S1.n) for y in range(S2.n)]
    return make_semigroup(gens, S1.mode, labels)


def product_state(x, y, n2):
    return x * n2 + y


def random_instance(seed, n_max=8, m_max=3, koopman_bias=0.3, mode="float", n_min=1):
    """Reproducible random system.

    With probability ``koopman_bias`` the base operator is the Koopman matrix
    of a random map, otherwise a sparse stochastic matrix with small integer
    weights.  Generators are the first ``m`` powers of the base operator, so
    they always commute.
    """
    if n_max > 12:
        raise InputError("random instances are limited to n_max <= 12")
    rng = np.random.Generator(np.random.Philox(seed))
    exact = mode == "rational"
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    if rng.random() < koopman_bias:
        base = koopman_matrix(rng.integers(0, n, size=n).tolist(), exact)
    else:
        base = linalg.zeros((n, n), exact)
        for x in range(n):
            k = int(min(n, rng.geometric(0.55)))
            cols = rng.choice(n, size=k, replace=False)
            w = rng.integers(1, 10, size=k)
            total = int(w.sum())
            for y, wy in zip(cols.tolist(), w.tolist()):
                base[x, y] = Fraction(wy, total) if exact else wy / total
    gens = [base]
    for _ in range(m - 1):
        gens.append(gens[-1] @ base)
    return make_semigroup(gens, mode)
