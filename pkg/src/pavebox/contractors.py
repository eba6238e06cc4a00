"""Contractors: box-shrinking operators that never lose a solution.

* ``HC4Revise`` / ``HC4``: classic forward-backward propagation per
  constraint, with a fixpoint loop (the baseline).
* ``CenteredContractor``: linearizes around the box center, preconditions
  the point Jacobian with Gauss-Jordan so the linearized system is
  tree-structured, and propagates the resulting interval constraints.
  Near regular solution points the contracted box approaches the minimal
  hull as the box shrinks.
* ``compose`` / ``repeat_until_fixpoint``: contractor algebra.

All contractors satisfy contract(x) subset-of x, and no solution point of
the associated system inside x is ever removed (up to outward rounding).
"""

from __future__ import annotations

from math import inf
from typing import List, Optional, Sequence, Tuple

from .box import Box, IntervalMatrix
from .expr import Expr, Function, Program
from .interval import (
    EMPTY,
    Interval,
    add_lh,
    div_extended_lh,
    div_lh,
    mul_lh,
    sub_lh,
)
from .linalg import gauss_jordan_preconditioners, identity, mat_vec

FIX_TOL = 1e-3          # relative width gain below which fixpoint loops stop
SECOND_PASS_GAIN = 0.01  # rerun the centered sweep if the first gained > 1%


class Contractor:
    """Base contractor: contract(box) -> box with contraction+consistency."""

    name = "contractor"

    def contract(self, box: Box) -> Box:
        raise NotImplementedError

    def __call__(self, box: Box) -> Box:
        return self.contract(box)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class IdentityContractor(Contractor):
    name = "identity"

    def contract(self, box: Box) -> Box:
        return box


# ---------------------------------------------------------------------------
# HC4
# ---------------------------------------------------------------------------


def hc4_revise(constraint: Expr, box: Box, n: Optional[int] = None) -> Box:
    """One forward-backward sweep for constraint(x) = 0 on the box."""
    if box.is_empty:
        return box
    prog = Program(constraint, box.n if n is None else n)
    xlo = [iv.lo for iv in box.ivs]
    xhi = [iv.hi for iv in box.ivs]
    if not prog.hc4_revise(xlo, xhi):
        return Box.empty(box.n)
    return Box.from_bounds(list(zip(xlo, xhi)))


class HC4Revise(Contractor):
    """Forward-backward propagation for a single constraint expr = 0."""

    def __init__(self, constraint: Expr, n: int, name: str = "hc4-revise"):
        self.program = Program(constraint, n)
        self.n = n
        self.name = name

    def contract(self, box: Box) -> Box:
        if box.is_empty:
            return box
        xlo = [iv.lo for iv in box.ivs]
        xhi = [iv.hi for iv in box.ivs]
        if not self.program.hc4_revise(xlo, xhi):
            return Box.empty(self.n)
        return Box.from_bounds(list(zip(xlo, xhi)))


class HC4(Contractor):
    """HC4Revise over every component, cycled to a relative fixpoint."""

    name = "hc4"

    def __init__(self, f: Function, fix_tol: float = FIX_TOL, max_rounds: int = 100):
        self.f = f
        self.fix_tol = fix_tol
        self.max_rounds = max_rounds
        self.programs = f.programs

    def contract(self, box: Box) -> Box:
        if box.is_empty:
            return box
        xlo = [iv.lo for iv in box.ivs]
        xhi = [iv.hi for iv in box.ivs]
        n = self.f.n
        width = max(h - l for l, h in zip(xlo, xhi))
        for _ in range(self.max_rounds):
            for prog in self.programs:
                if not prog.hc4_revise(xlo, xhi):
                    return Box.empty(n)
            new_width = max(h - l for l, h in zip(xlo, xhi))
            if width - new_width <= self.fix_tol * width:
                break
            width = new_width
        return Box.from_bounds(list(zip(xlo, xhi)))


def hc4_fixpoint(f: Function, box: Box, fix_tol: float = FIX_TOL) -> Box:
    return HC4(f, fix_tol=fix_tol).contract(box)


# ---------------------------------------------------------------------------
# centered contractor
# ---------------------------------------------------------------------------


def _propagate_pairs(
    g_mid: Sequence[float],
    jlo: Sequence[Sequence[float]],
    jhi: Sequence[Sequence[float]],
    xlo: List[float],
    xhi: List[float],
    m: Sequence[float],
    gain_threshold: float = SECOND_PASS_GAIN,
) -> bool:
    """In-place interval propagation of g(m) + J.(x - m) = 0.

    For every row i and column j applies
        x_j <- x_j  n  ( m_j - (g_mid_i + sum_{k!=j} J_ik (x_k - m_k)) / J_ij )
    with two-piece extended division hulled back into one interval.
    Rows sweep forward then reverse; one extra double sweep runs when the
    first reduced the width by more than gain_threshold.  Returns False
    when the box empties.
    """
    p = len(g_mid)
    n = len(xlo)
    rows_fwd = range(p)
    rows_rev = range(p - 1, -1, -1)

    def sweep(order) -> bool:
        for i in order:
            jli = jlo[i]
            jhi_i = jhi[i]
            gi = g_mid[i]
            for j in range(n):
                dl = jli[j]
                dh = jhi_i[j]
                if dl == 0.0 and dh == 0.0:
                    continue
                nl, nh = gi, gi
                for k in range(n):
                    if k == j:
                        continue
                    al = jli[k]
                    ah = jhi_i[k]
                    if al == 0.0 and ah == 0.0:
                        continue
                    tl, th = sub_lh(xlo[k], xhi[k], m[k], m[k])
                    tl, th = mul_lh(al, ah, tl, th)
                    nl, nh = add_lh(nl, nh, tl, th)
                if dl > 0.0 or dh < 0.0:
                    pieces = (div_lh(nl, nh, dl, dh), None)
                else:
                    pieces = div_extended_lh(nl, nh, dl, dh)
                mj = m[j]
                xl = xlo[j]
                xh = xhi[j]
                best_l, best_h = inf, -inf
                for piece in pieces:
                    if piece is None:
                        continue
                    sl, sh = sub_lh(mj, mj, piece[0], piece[1])
                    l = xl if xl >= sl else sl
                    h = xh if xh <= sh else sh
                    if l <= h:
                        if l < best_l:
                            best_l = l
                        if h > best_h:
                            best_h = h
                if best_l > best_h:
                    return False
                xlo[j] = best_l
                xhi[j] = best_h
        return True

    w0 = max(h - l for l, h in zip(xlo, xhi))
    if not sweep(rows_fwd) or not sweep(rows_rev):
        return False
    w1 = max(h - l for l, h in zip(xlo, xhi))
    if w0 > 0.0 and (w0 - w1) > gain_threshold * w0:
        if not sweep(rows_fwd) or not sweep(rows_rev):
            return False
    return True


def centered_linear_propagate(
    g_mid: Sequence[float],
    jac: IntervalMatrix,
    box: Box,
    m: Sequence[float],
) -> Box:
    """Propagate the centered system g(m) + [J].(x - m) = 0 on the box."""
    if box.is_empty:
        return box
    xlo = [iv.lo for iv in box.ivs]
    xhi = [iv.hi for iv in box.ivs]
    jlo = [[iv.lo for iv in row] for row in jac.entries]
    jhi = [[iv.hi for iv in row] for row in jac.entries]
    if not _propagate_pairs(g_mid, jlo, jhi, xlo, xhi, list(m)):
        return Box.empty(box.n)
    return Box.from_bounds(list(zip(xlo, xhi)))


class CenteredContractor(Contractor):
    """Centered-form contractor with Gauss-Jordan tree preconditioning.

    One contract() call:
      1. m = center(box); A = df/dx(m)
      2. Q = Gauss-Jordan preconditioner of A (identity if unavailable)
      3. g(m) = Q.f(m); [J] = Q.[df/dx](box)  (exact scalar products)
      4. interval propagation of g(m) + [J].(x-m) = 0 over the box

    The Jacobian enclosure [df/dx](box) is the intersection of the
    natural extension with a mean-value form df/dx(m) + [H].(x-m); the
    latter avoids the dependency pessimism of the natural extension on
    narrow boxes, which directly sharpens emptiness detection.
    """

    name = "centered"

    def __init__(self, f: Function, sharp_jacobian: bool = True):
        self.f = f
        self.programs = f.programs
        self.jac_programs = f.jacobian_programs
        self.hess_programs = f.hessian_programs if sharp_jacobian else None

    def contract(self, box: Box) -> Box:
        if box.is_empty:
            return box
        f = self.f
        p, n = f.p, f.n
        m = [iv.mid for iv in box.ivs]
        a_mid = [[prog.eval_real(m) for prog in row] for row in self.jac_programs]
        f_mid = [prog.eval_real(m) for prog in self.programs]
        if any(v != v for row in a_mid for v in row) or any(v != v for v in f_mid):
            return box  # center hits a singularity: no linearization here
        q_list = gauss_jordan_preconditioners(a_mid) or []
        q_list.append(identity(p))  # raw rows keep residuals Q might cancel

        xlo = [iv.lo for iv in box.ivs]
        xhi = [iv.hi for iv in box.ivs]
        dev = [sub_lh(xlo[k], xhi[k], m[k], m[k]) for k in range(n)]
        flo = [[0.0] * n for _ in range(p)]
        fhi = [[0.0] * n for _ in range(p)]
        for i in range(p):
            for j in range(n):
                prog = self.jac_programs[i][j]
                lo, hi = prog.forward_interval(xlo, xhi)
                el, eh = lo[-1], hi[-1]
                if el > eh:  # Jacobian undefined on the whole box
                    return Box.empty(n)
                if self.hess_programs is not None:
                    aij = a_mid[i][j]
                    ml, mh = aij, aij
                    for k in range(n):
                        hlo, hhi = self.hess_programs[i][j][k].forward_interval(
                            xlo, xhi
                        )
                        hl, hh = hlo[-1], hhi[-1]
                        if hl > hh:
                            ml, mh = -inf, inf
                            break
                        tl, th = mul_lh(hl, hh, dev[k][0], dev[k][1])
                        ml, mh = add_lh(ml, mh, tl, th)
                    # intersect the two enclosures of the true range
                    el = el if el >= ml else ml
                    eh = eh if eh <= mh else mh
                    if el > eh:  # numerically disjoint: keep the natural one
                        el, eh = lo[-1], hi[-1]
                flo[i][j] = el
                fhi[i][j] = eh
        for q in q_list:
            g_mid = mat_vec(q, f_mid)
            # [J] = Q . [df/dx]; scalar * interval keeps exact zeros exact
            jlo = [[0.0] * n for _ in range(p)]
            jhi = [[0.0] * n for _ in range(p)]
            for i in range(p):
                qi = q[i]
                for j in range(n):
                    sl, sh = 0.0, 0.0
                    for r in range(p):
                        c = qi[r]
                        if c == 0.0:
                            continue
                        tl, th = mul_lh(c, c, flo[r][j], fhi[r][j])
                        sl, sh = add_lh(sl, sh, tl, th)
                    jlo[i][j] = sl
                    jhi[i][j] = sh
            if not _propagate_pairs(g_mid, jlo, jhi, xlo, xhi, m):
                return Box.empty(n)
        return Box.from_bounds(list(zip(xlo, xhi)))


def centered_contract(f: Function, box: Box) -> Box:
    return CenteredContractor(f).contract(box)


# ---------------------------------------------------------------------------
# contractor algebra
# ---------------------------------------------------------------------------


class _Composed(Contractor):
    def __init__(self, contractors: Tuple[Contractor, ...]):
        self.contractors = contractors
        self.name = "compose(" + ",".join(c.name for c in contractors) + ")"

    def contract(self, box: Box) -> Box:
        for c in self.contractors:
            if box.is_empty:
                return box
            box = c.contract(box)
        return box


def compose(*contractors: Contractor) -> Contractor:
    """Sequential application, left to right."""
    return _Composed(tuple(contractors))


class _Fixpoint(Contractor):
    def __init__(self, inner: Contractor, fix_tol: float, max_rounds: int):
        self.inner = inner
        self.fix_tol = fix_tol
        self.max_rounds = max_rounds
        self.name = f"fixpoint({inner.name})"

    def contract(self, box: Box) -> Box:
        if box.is_empty:
            return box
        width = box.width
        for _ in range(self.max_rounds):
            box = self.inner.contract(box)
            if box.is_empty:
                return box
            new_width = box.width
            if width - new_width <= self.fix_tol * width:
                break
            width = new_width
        return box


def repeat_until_fixpoint(
    contractor: Contractor, fix_tol: float = FIX_TOL, max_rounds: int = 100
) -> Contractor:
    """Apply until the relative width gain per round drops below fix_tol."""
    return _Fixpoint(contractor, fix_tol, max_rounds)
