"""Branch-and-prune paver and geometric test utilities.

``pave`` produces a guaranteed outer paving of {x in x0 : f(x) = 0}:
pop a box, contract it, discard if empty, keep as boundary if its width
is at most eps, else bisect the widest dimension and recurse.  The
boundary list is sorted by lower corners so identical configurations
give identical output.

Also here: set proximity in the L-infinity norm, and a brute-force
curve oracle (grid one coordinate, damped Newton on the rest) used by
the verification suite as the independent reference.
"""

from __future__ import annotations

import multiprocessing
import random
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .box import Box
from .contractors import (
    FIX_TOL as CENTERED_FIX_TOL,
    HC4,
    CenteredContractor,
    Contractor,
    repeat_until_fixpoint,
)
from .expr import Function
from .linalg import SingularMatrixError, solve


# The hc4 paver baseline stops its revise loop at the conventional 10%
# width-gain ratio of the reference propagation solvers, which reproduces
# the published baseline box counts; the hc4_fixpoint operation itself
# keeps the tighter default.
HC4_PAVER_FIX_TOL = 0.1


def make_contractor(f: Function, selector: Union[str, Contractor]) -> Contractor:
    """Contractor for a paver selector.

    Both named selectors iterate at each paver node: 'hc4' is the
    forward-backward fixpoint; 'centered' re-linearizes at the new center
    until the width gain per round is negligible (the re-centering is
    what lets the centered form converge onto the solution set).
    """
    if isinstance(selector, Contractor):
        return selector
    if selector == "hc4":
        return HC4(f, fix_tol=HC4_PAVER_FIX_TOL)
    if selector == "centered":
        return repeat_until_fixpoint(
            CenteredContractor(f), fix_tol=CENTERED_FIX_TOL, max_rounds=30
        )
    raise ValueError(f"unknown contractor {selector!r} (use 'hc4' or 'centered')")


@dataclass
class PaverConfig:
    eps: float
    contractor: Union[str, Contractor] = "centered"
    max_boxes: int = 10**6
    threads: int = 0  # 0 = single-threaded reference mode
    bisection: str = "widest"

    def __post_init__(self):
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")
        if self.max_boxes < 1:
            raise ValueError("max_boxes must be at least 1")
        if self.bisection != "widest":
            raise ValueError(f"unknown bisection rule {self.bisection!r}")


@dataclass
class Paving:
    boundary: List[Box]
    eps: float
    contractor_name: str
    initial_box: Box
    counts: Dict[str, int]
    duration_s: float
    truncated: bool = False

    @property
    def boundary_count(self) -> int:
        return self.counts["boundary"]


def _pave_serial(
    contractor: Contractor,
    x0: Box,
    eps: float,
    max_boxes: int,
) -> Tuple[List[Box], int, int, bool]:
    """Depth-first work loop; returns (boundary, discarded, bisections, truncated)."""
    boundary: List[Box] = []
    discarded = 0
    bisections = 0
    truncated = False
    stack = [x0]
    while stack:
        box = stack.pop()
        cb = contractor.contract(box)
        if cb.is_empty:
            discarded += 1
            continue
        if cb.width <= eps:
            boundary.append(cb)
            if len(boundary) > max_boxes:
                truncated = True
                break
            continue
        left, right = cb.bisect(cb.widest_dim())
        bisections += 1
        stack.append(right)
        stack.append(left)
    return boundary, discarded, bisections, truncated


_WORKER_STATE: Dict[str, object] = {}


def _worker_init(f: Function, selector: Union[str, Contractor], eps: float, max_boxes: int):
    _WORKER_STATE["contractor"] = make_contractor(f, selector)
    _WORKER_STATE["eps"] = eps
    _WORKER_STATE["max_boxes"] = max_boxes


def _worker_pave(box: Box) -> Tuple[List[Box], int, int, bool]:
    return _pave_serial(
        _WORKER_STATE["contractor"],  # type: ignore[arg-type]
        box,
        _WORKER_STATE["eps"],  # type: ignore[arg-type]
        _WORKER_STATE["max_boxes"],  # type: ignore[arg-type]
    )


def pave(f: Function, x0: Box, cfg: PaverConfig) -> Paving:
    """Branch-and-prune paving of {x in x0 : f(x) = 0}.

    The boundary list is sorted lexicographically by box corners, so two
    runs of the same configuration emit identical pavings.  With
    cfg.threads > 0 the initial box is split breadth-first into seed
    boxes paved by worker processes; the cap on boundary boxes is then
    enforced per worker, so the merged paving may exceed max_boxes
    before the truncation flag is raised (the reference single-threaded
    mode enforces it exactly).
    """
    if x0.n != f.n:
        raise ValueError("box dimension does not match function arity")
    contractor = make_contractor(f, cfg.contractor)
    t0 = time.perf_counter()
    if cfg.threads <= 0:
        boundary, discarded, bisections, truncated = _pave_serial(
            contractor, x0, cfg.eps, cfg.max_boxes
        )
    else:
        boundary, discarded, bisections, truncated = _pave_parallel(
            f, contractor, x0, cfg
        )
    duration = time.perf_counter() - t0
    boundary.sort(key=Box.sort_key)
    counts = {
        "boundary": len(boundary),
        "discarded": discarded,
        "bisections": bisections,
    }
    return Paving(
        boundary=boundary,
        eps=cfg.eps,
        contractor_name=contractor.name,
        initial_box=x0,
        counts=counts,
        duration_s=duration,
        truncated=truncated,
    )


def _pave_parallel(
    f: Function,
    contractor: Contractor,
    x0: Box,
    cfg: PaverConfig,
) -> Tuple[List[Box], int, int, bool]:
    boundary: List[Box] = []
    discarded = 0
    bisections = 0
    truncated = False
    # breadth-first expansion until there is enough independent work
    queue: List[Box] = [x0]
    target = cfg.threads * 8
    while queue and len(queue) < target:
        box = queue.pop(0)
        cb = contractor.contract(box)
        if cb.is_empty:
            discarded += 1
            continue
        if cb.width <= cfg.eps:
            boundary.append(cb)
            continue
        left, right = cb.bisect(cb.widest_dim())
        bisections += 1
        queue.append(left)
        queue.append(right)
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(
        cfg.threads,
        initializer=_worker_init,
        initargs=(f, cfg.contractor, cfg.eps, cfg.max_boxes),
    ) as pool:
        for sub_boundary, sub_disc, sub_bis, sub_trunc in pool.map(
            _worker_pave, queue
        ):
            boundary.extend(sub_boundary)
            discarded += sub_disc
            bisections += sub_bis
            truncated = truncated or sub_trunc
    if len(boundary) > cfg.max_boxes:
        truncated = True
    return boundary, discarded, bisections, truncated


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def project(paving: Paving, dims: Tuple[int, int]) -> List[Box]:
    """Project boundary boxes onto two dimensions, merging exact duplicates."""
    i, j = dims
    if i == j:
        raise ValueError("projection dimensions must differ")
    out: List[Box] = []
    seen = set()
    for box in paving.boundary:
        key = (box[i].lo, box[i].hi, box[j].lo, box[j].hi)
        if key in seen:
            continue
        seen.add(key)
        out.append(Box([box[i], box[j]]))
    return out


# ---------------------------------------------------------------------------
# proximity h(A, B) in the L-infinity norm
# ---------------------------------------------------------------------------


def proximity(a_set: Sequence, b_points: Sequence[Sequence[float]]) -> float:
    """sup over a in A of the L-inf distance from a to the point set B.

    A may mix points and Boxes; boxes contribute their corners and center.
    """
    if len(b_points) == 0:
        raise ValueError("B must be a nonempty point set")
    pts: List[Tuple[float, ...]] = []
    for a in a_set:
        if isinstance(a, Box):
            pts.extend(a.corners())
            pts.append(a.center())
        else:
            pts.append(tuple(a))
    if not pts:
        return 0.0
    arr_a = np.asarray(pts, dtype=float)
    arr_b = np.asarray(list(b_points), dtype=float)
    worst = 0.0
    chunk = max(1, int(4e6) // max(len(arr_b), 1))
    for s in range(0, len(arr_a), chunk):
        block = arr_a[s : s + chunk]
        d = np.abs(block[:, None, :] - arr_b[None, :, :]).max(axis=2).min(axis=1)
        worst = max(worst, float(d.max()))
    return worst


def point_box_distance(point: Sequence[float], box: Box) -> float:
    """L-inf distance from a point to a (non-empty) box."""
    d = 0.0
    for v, iv in zip(point, box.ivs):
        if v < iv.lo:
            d = max(d, iv.lo - v)
        elif v > iv.hi:
            d = max(d, v - iv.hi)
    return d


def box_proximity(a: Box, b: Box) -> float:
    """h({a}, {b}) for boxes: sup over a of the L-inf distance to b."""
    if a.is_empty:
        return 0.0
    if b.is_empty:
        raise ValueError("B must be nonempty")
    return max(point_box_distance(c, b) for c in a.corners())


# ---------------------------------------------------------------------------
# curve oracle: brute-force solution sampling for p = n-1 systems
# ---------------------------------------------------------------------------


def _newton_fixed_coord(
    f: Function,
    fixed_dim: int,
    fixed_val: float,
    start: Sequence[float],
    box: Box,
    tol: float = 1e-13,
    max_iter: int = 60,
) -> Optional[Tuple[float, ...]]:
    """Damped Newton on f(x)=0 with x[fixed_dim] pinned; None if no root."""
    free = [d for d in range(f.n) if d != fixed_dim]
    x = list(start)
    x[fixed_dim] = fixed_val
    fv = f.eval_real(x)
    if any(v != v for v in fv):
        return None
    err = max(abs(v) for v in fv)
    for _ in range(max_iter):
        if err <= tol:
            pt = tuple(x)
            if box.contains_point(pt):
                return pt
            return None
        jac = f.jacobian_real(x)
        jr = [[jac[i][d] for d in free] for i in range(f.p)]
        try:
            step = solve(jr, [-v for v in fv])
        except SingularMatrixError:
            return None
        lam = 1.0
        improved = False
        while lam > 1e-6:
            xn = list(x)
            for d, s in zip(free, step):
                xn[d] = x[d] + lam * s
            fn = f.eval_real(xn)
            if not any(v != v for v in fn):
                err_n = max(abs(v) for v in fn)
                if err_n < err * (1.0 - 0.25 * lam) or err_n <= tol:
                    x, fv, err = xn, fn, err_n
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            return None
    return None


def _lattice_starts(box: Box, fixed_dim: int, per_dim: int = 3) -> List[List[float]]:
    grids: List[List[float]] = []
    for d, iv in enumerate(box.ivs):
        if d == fixed_dim:
            grids.append([iv.mid])
        else:
            w = iv.width
            grids.append(
                [iv.lo + (i + 0.5) * w / per_dim for i in range(per_dim)]
                if w > 0.0
                else [iv.lo]
            )
    starts: List[List[float]] = [[]]
    for g in grids:
        starts = [s + [v] for s in starts for v in g]
    return starts


def curve_oracle(
    f: Function,
    x0: Box,
    density: int = 200,
    residual_tol: float = 1e-9,
    seed: int = 0,
) -> List[Tuple[float, ...]]:
    """Dense solution samples of f(x)=0 in x0 for curve systems (p = n-1).

    Grids each coordinate in turn and runs damped Newton on the remaining
    square system from a lattice of starts plus a few random ones.  Every
    returned point has residual at most residual_tol (the solver itself
    targets 1e-13).
    """
    if f.p != f.n - 1:
        raise ValueError("curve oracle expects p = n - 1")
    rng = random.Random(seed)
    found: List[Tuple[float, ...]] = []
    seen = set()
    for fixed_dim in range(f.n):
        iv = x0[fixed_dim]
        if density == 1:
            values = [iv.mid]
        else:
            w = iv.width
            values = [iv.lo + i * w / (density - 1) for i in range(density)]
        starts = _lattice_starts(x0, fixed_dim)
        n_rand = 4
        for v in values:
            rand_starts = [
                [x0[d].lo + rng.random() * x0[d].width for d in range(f.n)]
                for _ in range(n_rand)
            ]
            for start in starts + rand_starts:
                pt = _newton_fixed_coord(f, fixed_dim, v, start, x0)
                if pt is None:
                    continue
                if max(abs(u) for u in f.eval_real(pt)) > residual_tol:
                    continue
                key = tuple(round(u, 11) for u in pt)
                if key not in seen:
                    seen.add(key)
                    found.append(pt)
    return found


def solution_hull(
    f: Function, box: Box, density: int = 120, seed: int = 0
) -> Optional[Box]:
    """Hull of oracle curve samples inside the box; None if none found."""
    pts = curve_oracle(f, box, density=density, seed=seed)
    if not pts:
        return None
    lows = [min(p[d] for p in pts) for d in range(f.n)]
    highs = [max(p[d] for p in pts) for d in range(f.n)]
    return Box.from_bounds(list(zip(lows, highs)))
