"""Gaussian elimination over floats or exact fractions.

The same routine serves both arithmetic modes: float arrays are reduced with
partial (column) pivoting and a pivot threshold, object arrays of
:class:`fractions.Fraction` are reduced exactly.
"""

from fractions import Fraction

import numpy as np

PIVOT_TOL = 1e-10


def as_matrix(a, exact):
    if exact:
        arr = np.empty(np.shape(a), dtype=object)
        flat = np.asarray(a, dtype=object).ravel()
        arr.ravel()[:] = [Fraction(x) for x in flat]
        return arr
    return np.array(a, dtype=float)


def is_exact(a):
    return np.asarray(a).dtype == object


def rref(a, exact=None, tol=PIVOT_TOL):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``.  In float mode a candidate pivot with magnitude at or
    below ``tol`` counts as zero and the rest of its column is flushed.
    """
    if exact is None:
        exact = is_exact(a)
    m = as_matrix(a, exact)
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if exact:
            nz = np.flatnonzero(m[r:, c] != 0)
            if nz.size == 0:
                continue
            p = r + int(nz[0])
        else:
            p = r + int(np.argmax(np.abs(m[r:, c])))
            if abs(m[p, c]) <= tol:
                m[r:, c] = 0.0
                continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] / m[r, c]
        factors = m[:, c].copy()
        factors[r] = 0
        m -= np.outer(factors, m[r])
        if not exact:
            m[:, c] = 0.0
            m[r, c] = 1.0
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(a, exact=None, tol=PIVOT_TOL):
    """Basis of ``{x : a @ x = 0}`` as the columns of an ``(cols, k)`` array."""
    if exact is None:
        exact = is_exact(a)
    a = as_matrix(a, exact)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols, exact)
    r, pivots = rref(a, exact, tol)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=object if exact else float)
    if exact:
        basis[:] = Fraction(0)
    for j, fc in enumerate(free):
        basis[fc, j] = Fraction(1) if exact else 1.0
        for i, pc in enumerate(pivots):
            basis[pc, j] = -r[i, fc]
    return basis


def solve_affine(a, b, exact=None, tol=PIVOT_TOL):
    """Solve ``a @ x = b`` in full generality.

    Returns ``(x0, kernel)`` with a particular solution ``x0`` and a kernel
    basis, or ``(None, kernel)`` if the system is inconsistent.  The affine
    dimension of the solution set is ``kernel.shape[1]``.
    """
    if exact is None:
        exact = is_exact(a) or is_exact(b)
    a = as_matrix(a, exact)
    b = as_matrix(b, exact).reshape(-1, 1)
    cols = a.shape[1]
    r, pivots = rref(np.hstack([a, b]), exact, tol)
    kernel = nullspace(a, exact, tol)
    if cols in pivots:
        return None, kernel
    x0 = np.zeros(cols, dtype=object if exact else float)
    if exact:
        x0[:] = Fraction(0)
    for i, pc in enumerate(pivots):
        x0[pc] = r[i, cols]
    return x0, kernel


def solve(a, b, exact=None, tol=PIVOT_TOL):
    """Solve a square system ``a @ x = b`` (``b`` may be a matrix).

    Raises ``np.linalg.LinAlgError`` when a pivot falls below ``tol``.
    """
    if exact is None:
        exact = is_exact(a) or is_exact(b)
    a = as_matrix(a, exact)
    b = as_matrix(b, exact)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise ValueError("solve expects a square system")
    r, pivots = rref(np.hstack([a, b]), exact, tol)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular system")
    x = r[:n, n:]
    return x[:, 0] if vector else x


def identity(n, exact):
    if exact:
        out = np.empty((n, n), dtype=object)
        out[:] = Fraction(0)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


def zeros(shape, exact):
    if exact:
        out = np.empty(shape, dtype=object)
        out[...] = Fraction(0)
        return out
    return np.zeros(shape)


def ones(n, exact):
    if exact:
        out = np.empty(n, dtype=object)
        out[:] = Fraction(1)
        return out
    return np.ones(n)
