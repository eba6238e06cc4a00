"""Small dense real-matrix kernel (pure Python, list-of-list matrices).

Sized for contractor work: p x n with p <= 4.  Provides Gauss-Jordan
preconditioning to reduced row echelon / band form, tree-matrix
detection on sparsity patterns, and the generalized inverse
A+ = A^T (A A^T)^-1 used by the sensitivity tests.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

Matrix = List[List[float]]

PIVOT_TOL_FACTOR = 1e-12
ZERO_TOL_FACTOR = 1e-12
COND_TOL = 1e12


class SingularMatrixError(ValueError):
    """Pivot below tolerance: the matrix is (numerically) singular."""


def identity(p: int) -> Matrix:
    return [[1.0 if i == j else 0.0 for j in range(p)] for i in range(p)]


def transpose(a: Sequence[Sequence[float]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Sequence[Sequence[float]], b: Sequence[Sequence[float]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence[float]], x: Sequence[float]) -> List[float]:
    return [sum(v * w for v, w in zip(row, x)) for row in a]


def max_abs(a: Sequence[Sequence[float]]) -> float:
    return max((abs(v) for row in a for v in row), default=0.0)


def norm_inf(a: Sequence[Sequence[float]]) -> float:
    return max((sum(abs(v) for v in row) for row in a), default=0.0)


def solve(a: Sequence[Sequence[float]], b: Sequence[float]) -> List[float]:
    """Solve a . x = b (square) by Gauss elimination with partial pivoting."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve expects a square system")
    m = [list(row) + [bv] for row, bv in zip(a, b)]
    tol = PIVOT_TOL_FACTOR * max(max_abs(a), 1e-300)
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(m[r][k]))
        if abs(m[piv][k]) <= tol:
            raise SingularMatrixError(f"pivot {m[piv][k]!r} below tolerance")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        for r in range(k + 1, n):
            factor = m[r][k] / m[k][k]
            if factor != 0.0:
                for c in range(k, n + 1):
                    m[r][c] -= factor * m[k][c]
    x = [0.0] * n
    for k in range(n - 1, -1, -1):
        s = m[k][n] - sum(m[k][c] * x[c] for c in range(k + 1, n))
        x[k] = s / m[k][k]
    return x


def invert(a: Sequence[Sequence[float]]) -> Matrix:
    n = len(a)
    cols = [solve(a, [1.0 if i == j else 0.0 for i in range(n)]) for j in range(n)]
    return transpose(cols)


def pseudo_inverse(a: Sequence[Sequence[float]], cond_tol: float = COND_TOL) -> Matrix:
    """Generalized inverse A^T (A A^T)^-1 for full-row-rank p x n, p <= n."""
    at = transpose(a)
    gram = mat_mul(a, at)
    try:
        gram_inv = invert(gram)
    except SingularMatrixError as exc:
        raise SingularMatrixError("A.A^T is singular") from exc
    if norm_inf(gram) * norm_inf(gram_inv) > cond_tol:
        raise SingularMatrixError("A.A^T too ill-conditioned")
    return mat_mul(at, gram_inv)


# ---------------------------------------------------------------------------
# Gauss-Jordan preconditioning
# ---------------------------------------------------------------------------


def _rref_with_q(
    a: Sequence[Sequence[float]],
    pivot_tol_factor: float = PIVOT_TOL_FACTOR,
) -> Optional[Tuple[Matrix, Matrix, List[int]]]:
    """RREF with its row-op matrix: (Q, Q.a, pivot column per row).

    Pivots are chosen greatest magnitude first over the remaining
    submatrix; None when numerically rank-deficient.
    """
    p = len(a)
    n = len(a[0]) if p else 0
    scale = max_abs(a)
    if scale == 0.0 or not math.isfinite(scale):
        return None
    tol = pivot_tol_factor * scale
    d = [list(row) for row in a]
    q = identity(p)
    pivot_col_of_row: List[Optional[int]] = [None] * p
    free_rows = list(range(p))
    used_cols: List[int] = []
    for _ in range(p):
        best_r, best_c, best_v = -1, -1, tol
        for r in free_rows:
            for c in range(n):
                if c in used_cols:
                    continue
                v = abs(d[r][c])
                if v > best_v:
                    best_r, best_c, best_v = r, c, v
        if best_r < 0:
            return None  # rank deficient
        piv = d[best_r][best_c]
        inv = 1.0 / piv
        for c in range(n):
            d[best_r][c] *= inv
        for c in range(p):
            q[best_r][c] *= inv
        d[best_r][best_c] = 1.0
        for r in range(p):
            if r == best_r:
                continue
            factor = d[r][best_c]
            if factor != 0.0:
                for c in range(n):
                    d[r][c] -= factor * d[best_r][c]
                for c in range(p):
                    q[r][c] -= factor * q[best_r][c]
                d[r][best_c] = 0.0
        pivot_col_of_row[best_r] = best_c
        used_cols.append(best_c)
        free_rows.remove(best_r)
    # RREF convention: order rows by increasing pivot column
    order = sorted(range(p), key=lambda r: pivot_col_of_row[r])
    q = [q[r] for r in order]
    d = [d[r] for r in order]
    pivot_cols = [pivot_col_of_row[r] for r in order]
    return q, d, pivot_cols  # type: ignore[return-value]


def gauss_jordan_preconditioner(
    a: Sequence[Sequence[float]],
    pivot_tol_factor: float = PIVOT_TOL_FACTOR,
) -> Optional[Matrix]:
    """Invertible Q (p x p) such that Q . a is a tree-structured system.

    Q . a is the reduced row echelon form with pivots chosen greatest
    magnitude first over the remaining submatrix.  When n == p + 1 and
    the kernel vector of `a` has no zero coordinate, Q is upgraded so
    Q . a is the two-diagonal band matrix (row i supported on columns
    i, i+1), which is always cycle-free.  Returns None when `a` is
    numerically rank-deficient; callers then fall back to the identity.
    """
    p = len(a)
    n = len(a[0]) if p else 0
    if p > n:
        raise ValueError("expected p <= n")
    rref = _rref_with_q(a, pivot_tol_factor)
    if rref is None:
        return None
    q, d, pivot_cols = rref
    if n == p + 1:
        band_q = _band_upgrade(a, d, pivot_cols, q)
        if band_q is not None:
            return band_q
    return q


def gauss_jordan_preconditioners(
    a: Sequence[Sequence[float]],
    pivot_tol_factor: float = PIVOT_TOL_FACTOR,
) -> List[Matrix]:
    """Preconditioner candidates, sharpest first: [band (when sane), RREF].

    Every returned Q is invertible with Q.a in band/RREF tree form; an
    empty list signals rank-deficiency (callers fall back to identity).
    """
    p = len(a)
    n = len(a[0]) if p else 0
    if p > n:
        raise ValueError("expected p <= n")
    rref = _rref_with_q(a, pivot_tol_factor)
    if rref is None:
        return []
    q, d, pivot_cols = rref
    out: List[Matrix] = []
    if n == p + 1:
        band_q = _band_upgrade(a, d, pivot_cols, q)
        if band_q is not None:
            out.append(band_q)
    out.append(q)
    return out


def _cond_inf(m: Sequence[Sequence[float]]) -> float:
    try:
        return norm_inf(m) * norm_inf(invert(m))
    except SingularMatrixError:
        return math.inf


def _band_upgrade(
    a: Sequence[Sequence[float]],
    rref: Matrix,
    pivot_cols: Sequence[int],
    rref_q: Matrix,
) -> Optional[Matrix]:
    """Rewrite Q so Q.a has the band pattern [[*,*,0,..],[0,*,*,0,..],...].

    Uses the kernel vector v of `a` (1-dimensional for full-rank p x (p+1)):
    row i of the target is (v_{i+1}, -v_i) at columns (i, i+1), which is
    orthogonal to v and hence lies in the row space of `a`.  Applies only
    when every kernel coordinate is nonzero (otherwise the band rows can
    be rank-deficient), the result passes a numerical residual check, and
    the band Q is not much worse conditioned than the RREF Q; a dominant
    kernel coordinate makes the band rows nearly parallel, which would
    cancel the residual f(m) and cripple emptiness detection downstream.
    RREF is itself cycle-free for n = p + 1, so falling back is safe.
    """
    p = len(a)
    n = p + 1
    free_col = next(c for c in range(n) if c not in pivot_cols)
    v = [0.0] * n
    v[free_col] = 1.0
    for r, pc in enumerate(pivot_cols):
        v[pc] = -rref[r][free_col]
    vmax = max(abs(x) for x in v)
    if any(abs(x) <= 1e-12 * vmax for x in v):
        return None
    band = [[0.0] * n for _ in range(p)]
    for i in range(p):
        band[i][i] = v[i + 1]
        band[i][i + 1] = -v[i]
    try:
        a_pinv = pseudo_inverse(a)
        q = mat_mul(band, a_pinv)
    except SingularMatrixError:
        return None
    if _cond_inf(q) > 10.0 * _cond_inf(rref_q):
        return None
    # residual check: Q.a must reproduce the band matrix
    qa = mat_mul(q, a)
    err = max(
        abs(qa[i][j] - band[i][j]) for i in range(p) for j in range(n)
    )
    band_scale = max(max_abs(band), 1.0)
    if err > 1e-9 * band_scale:
        return None
    return q


# ---------------------------------------------------------------------------
# tree-matrix test
# ---------------------------------------------------------------------------


def matrix_pattern(
    a: Sequence[Sequence[float]], zero_tol_factor: float = ZERO_TOL_FACTOR
) -> List[List[bool]]:
    """Boolean sparsity pattern; entries below zero_tol * max|a| are zero."""
    scale = max_abs(a)
    tol = zero_tol_factor * scale
    return [[abs(v) > tol for v in row] for row in a]


def is_tree_matrix(pattern: Sequence[Sequence[bool]]) -> bool:
    """True iff the constraint-variable bipartite graph is acyclic.

    Rows and columns are the two vertex classes; an edge connects row i
    to column j where pattern[i][j] is set.  Checked by depth-first
    search counting vertices and edges per connected component.
    """
    p = len(pattern)
    n = len(pattern[0]) if p else 0
    adj: List[List[int]] = [[] for _ in range(p + n)]
    for i in range(p):
        for j in range(n):
            if pattern[i][j]:
                adj[i].append(p + j)
                adj[p + j].append(i)
    seen = [False] * (p + n)
    for start in range(p + n):
        if seen[start] or not adj[start]:
            continue
        verts = 0
        half_edges = 0
        stack = [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            verts += 1
            half_edges += len(adj[u])
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if half_edges // 2 != verts - 1:
            return False
    return True
