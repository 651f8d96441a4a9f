"""Grid-based variational estimator for Hardy constants.

Assembles the 5-point finite-difference Dirichlet energy A on the interior
lattice of a planar domain, weights nodes by D = diag(1/dist^2) with dist
the distance to the relevant boundary part, and returns the smallest
eigenvalue of the pencil (A, D) by inverse power iteration with
conjugate-gradient inner solves.  Nodes closer to the weighted boundary
than half a mesh width are excluded, which keeps the nodal weight bounded
by ~(2/h)^2 and the discrete quotient an upper estimate of the constant.

Accuracy caveat, documented on purpose: minimizing sequences of Hardy
quotients concentrate over exponentially many length scales, so the
discrete minimum converges to the constant only like 1/log^2(1/h).  On
lattices of a few hundred nodes per side the estimate sits a few tenths
above the constant and decreases monotonically under refinement.  The
module is a consistency validator (estimates must stay above certified
constants and shrink toward them), not a precision instrument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .certify import Dbeta, DomainSpec, Ebg, OneReflexPolygon, Sector, SectorCapConvex, ensure_ccw

__all__ = [
    "GridProblem",
    "RayleighEstimate",
    "NumericalError",
    "build_grid",
    "strip_proxy",
    "estimate_constant",
]

PI = math.pi

_MIN_INTERIOR_NODES = 100
_ARC_SAMPLES = 256


class NumericalError(RuntimeError):
    """Iterative solve failed to converge within its cap."""


@dataclass
class GridProblem:
    """Assembled discrete Hardy quotient on a square lattice.

    mask marks interior nodes on the nx-by-ny lattice; dist holds the
    per-node distance to the weighted boundary part (all of the boundary,
    or the Dirichlet part only for mixed problems); matrix is the 5-point
    Dirichlet energy over the masked nodes, Neumann crossings simply
    dropped from the stencil.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    h: float
    mask: np.ndarray
    dist: np.ndarray
    nodes: np.ndarray
    matrix: sp.csr_matrix

    @property
    def interior_count(self) -> int:
        return len(self.dist)

    def node_coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x0 + self.nodes[:, 0] * self.h, self.y0 + self.nodes[:, 1] * self.h

    def component_count(self) -> int:
        ncomp, _ = connected_components(self.matrix, directed=False)
        return int(ncomp)


@dataclass(frozen=True)
class RayleighEstimate:
    """Smallest generalized eigenvalue of (A, D) and the work it took."""

    lam: float
    iterations: int
    h: float

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "iterations": self.iterations, "h": self.h}


# ---------------------------------------------------------------------------
# Geometry helpers.

def _segment_distance(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    ll = vx * vx + vy * vy
    if ll == 0.0:
        return np.hypot(px - ax, py - ay)
    t = np.clip(((px - ax) * vx + (py - ay) * vy) / ll, 0.0, 1.0)
    return np.hypot(px - ax - t * vx, py - ay - t * vy)


def _polyline_distance(px, py, verts: np.ndarray, closed: bool = True):
    n = len(verts)
    last = n if closed else n - 1
    best = np.full(np.shape(px), np.inf)
    for i in range(last):
        a = verts[i]
        b = verts[(i + 1) % n]
        best = np.minimum(best, _segment_distance(px, py, a[0], a[1], b[0], b[1]))
    return best


def _points_in_polygon(px, py, verts: np.ndarray):
    """Even-odd rule, vectorized over points."""
    inside = np.zeros(np.shape(px), dtype=bool)
    n = len(verts)
    for i in range(n):
        xa, ya = verts[i]
        xb, yb = verts[(i + 1) % n]
        if ya == yb:
            continue
        cond = (ya > py) != (yb > py)
        xint = xa + (py - ya) * (xb - xa) / (yb - ya)
        inside ^= cond & (px < xint)
    return inside


def _square_box(x0, x1, y0, y1, pad):
    """Expand to a square box (uniform spacing needs equal side lengths)."""
    x0, x1 = x0 - pad, x1 + pad
    y0, y1 = y0 - pad, y1 + pad
    side = max(x1 - x0, y1 - y0)
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return cx - 0.5 * side, cx + 0.5 * side, cy - 0.5 * side, cy + 0.5 * side


# ---------------------------------------------------------------------------
# Core assembly.

def _assemble(
    inside: Callable,
    weight_dist: Callable,
    x0: float,
    x1: float,
    y0: float,
    y1: float,
    n: int,
    neumann_side: Optional[Callable] = None,
    link_cut: Optional[Callable] = None,
) -> GridProblem:
    """Build mask, weights and the 5-point energy on an n-by-n lattice.

    inside and weight_dist take vectorized coordinates.  A link to an
    out-of-mask neighbor is a Dirichlet half-link unless the neighbor point
    lies outside the domain and neumann_side says the crossing is through
    the Neumann part, in which case the link is dropped entirely.

    Dirichlet half-links carry the cut-link correction: the boundary
    crossing is located at fraction s of the link and the diagonal
    contribution is 1/s instead of 1.  Without it a wall passing mid-link
    is penalized as if it were a full mesh width away while the nodal
    weight uses the true distance, and the quotient can dip below the
    Hardy constant; with it the discrete energy matches the linear
    interpolant cut at the wall and the estimate stays an upper one.

    Crossings are detected by the midpoint-inside test, except for domains
    that pass link_cut(ax, ay, bx, by) -> (blocked, fraction): slits and
    near-degenerate wedges have (near) measure-zero cross sections that
    point sampling misses in floating point, so those domains supply an
    analytic segment-crossing predicate.
    """
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    h = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    if abs(h - hy) > 1e-9 * max(h, hy):
        raise ValueError("lattice spacing must be square")
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    mask = inside(gx, gy)
    dist_grid = np.where(mask, weight_dist(gx, gy), np.inf)
    # keep the nodal weight bounded: interior nodes sit at least h/2 from
    # the weighted boundary part
    mask &= dist_grid >= 0.5 * h * (1.0 - 1e-9)

    for _ in range(4):  # peel to the largest component if splinters remain
        idx = -np.ones((n, n), dtype=np.int64)
        ii = np.where(mask)
        count = len(ii[0])
        if count < _MIN_INTERIOR_NODES:
            raise ValueError(
                f"only {count} interior nodes; raise the resolution (need >= {_MIN_INTERIOR_NODES})"
            )
        idx[ii] = np.arange(count)
        rows, cols, vals = [], [], []
        diag = np.zeros(count)
        px, py = gx[ii], gy[ii]
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ji = ii[0] + dx
            jj = ii[1] + dy
            in_lattice = (ji >= 0) & (ji < n) & (jj >= 0) & (jj < n)
            jidx = np.full(count, -1, dtype=np.int64)
            jidx[in_lattice] = idx[ji[in_lattice], jj[in_lattice]]
            nx_, ny_ = px + dx * h, py + dy * h
            # endpoint average is bit-identical from either side of the link,
            # so open/closed decisions cannot come out asymmetric
            mid_in = inside(0.5 * (px + nx_), 0.5 * (py + ny_))
            nbr_in = inside(nx_, ny_)
            if link_cut is not None:
                blocked, frac = link_cut(px, py, nx_, ny_)
            else:
                blocked = ~mid_in
                frac = np.full(count, np.nan)
            open_link = (jidx >= 0) & ~blocked
            closed = ~open_link
            if neumann_side is None:
                neumann = np.zeros(count, dtype=bool)
            else:
                neumann = closed & ~nbr_in & neumann_side(nx_, ny_)
            dirichlet = closed & ~neumann
            # locate the wall along each cut link: fraction s in (0, 1]
            s = np.ones(count)
            analytic = dirichlet & blocked & np.isfinite(frac)
            s[analytic] = frac[analytic]
            needs_bisect = dirichlet & ~analytic & ~(nbr_in & ~blocked)
            if np.any(needs_bisect):
                lo_c = np.zeros(int(needs_bisect.sum()))
                hi_c = np.ones_like(lo_c)
                mid_ok = mid_in[needs_bisect]
                lo_c[mid_ok] = 0.5
                hi_c[~mid_ok] = 0.5
                bx, by = px[needs_bisect], py[needs_bisect]
                for _bisect in range(20):
                    mid = 0.5 * (lo_c + hi_c)
                    inside_mid = inside(bx + mid * dx * h, by + mid * dy * h)
                    lo_c = np.where(inside_mid, mid, lo_c)
                    hi_c = np.where(inside_mid, hi_c, mid)
                s[needs_bisect] = 0.5 * (lo_c + hi_c)
            s = np.maximum(s, 0.05)
            diag += np.where(dirichlet, 1.0 / s, np.where(neumann, 0.0, 1.0))
            sel = np.where(open_link)[0]
            rows.append(sel)
            cols.append(jidx[sel])
            vals.append(-np.ones(len(sel)))
        matrix = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(count, count),
        )
        matrix = (matrix + sp.diags(diag)) / (h * h)
        ncomp, labels = connected_components(matrix, directed=False)
        if ncomp == 1:
            break
        largest = np.argmax(np.bincount(labels))
        drop = labels != largest
        new_mask = mask.copy()
        new_mask[ii[0][drop], ii[1][drop]] = False
        mask = new_mask
    nodes = np.column_stack(ii)
    return GridProblem(
        x0=x0,
        x1=x1,
        y0=y0,
        y1=y1,
        h=h,
        mask=mask,
        dist=dist_grid[ii],
        nodes=nodes,
        matrix=matrix,
    )


# ---------------------------------------------------------------------------
# Domain-specific builders.

def _ray_link_cut(directions, lengths=None):
    """Segment-vs-ray crossing test for edges through the origin.

    Returns a vectorized predicate (blocked, fraction) for links a -> b.
    Slits (full openings) have measure-zero cross sections, so midpoint
    sampling cannot detect them reliably; the sign change of the cross
    product against each edge direction can.
    """

    def link_cut(ax, ay, bx, by):
        blocked = np.zeros(np.shape(ax), dtype=bool)
        frac = np.full(np.shape(ax), np.nan)
        for k, (ux, uy) in enumerate(directions):
            c1 = ux * ay - uy * ax
            c2 = ux * by - uy * bx
            flip = (c1 > 0.0) != (c2 > 0.0)
            denom = np.where(flip, c1 - c2, 1.0)
            tau = np.where(flip, c1 / denom, np.nan)
            pxc = ax + tau * (bx - ax)
            pyc = ay + tau * (by - ay)
            along = pxc * ux + pyc * uy
            hit = flip & (along > 0.0)
            if lengths is not None:
                hit &= np.hypot(pxc, pyc) <= lengths[k]
            better = hit & (~blocked | (tau < frac))
            frac = np.where(better, tau, frac)
            blocked |= hit
        return blocked, frac

    return link_cut


def _sector_functions(beta: float, radius: float):
    e1 = np.array([radius, 0.0])
    e2 = radius * np.array([math.cos(beta), math.sin(beta)])

    def inside(px, py):
        r = np.hypot(px, py)
        ang = np.mod(np.arctan2(py, px), 2.0 * PI)
        return (r < radius) & (ang > 0.0) & (ang < beta) & (r > 0.0)

    def dist(px, py):
        d = _segment_distance(px, py, 0.0, 0.0, e1[0], e1[1])
        d = np.minimum(d, _segment_distance(px, py, 0.0, 0.0, e2[0], e2[1]))
        return np.minimum(d, radius - np.hypot(px, py))

    link_cut = _ray_link_cut([(1.0, 0.0), (math.cos(beta), math.sin(beta))])
    return inside, dist, link_cut


def _polygon_functions(verts: np.ndarray):
    def inside(px, py):
        return _points_in_polygon(px, py, verts)

    def dist(px, py):
        return _polyline_distance(px, py, verts, closed=True)

    return inside, dist


def _ebg_polygon(beta: float, gamma: float, radius: float) -> np.ndarray:
    """Truncated two-halfline domain as a polygon, arc sampled densely.

    Built symmetrically about x = 1/2 when beta == gamma so symmetric
    inputs produce exactly mirror-symmetric lattices.
    """
    if beta >= 2.0 * PI - 1e-9 or gamma >= 2.0 * PI - 1e-9:
        raise ValueError("slit-degenerate two-halfline domain is not grid-buildable")
    o = np.array([0.0, 0.0])
    p = np.array([1.0, 0.0])
    m = np.array([0.5, 0.0])
    u = np.array([math.cos(beta), math.sin(beta)])  # halfline from the origin
    v = np.array([-math.cos(gamma), math.sin(gamma)])  # halfline from P

    def ray_hit(base, direction):
        w = base - m
        b = float(np.dot(direction, w))
        disc = b * b - (float(np.dot(w, w)) - radius * radius)
        return base + (-b + math.sqrt(disc)) * direction

    a3 = ray_hit(o, u)
    a1 = ray_hit(p, v)
    ang1 = math.atan2(a1[1] - m[1], a1[0] - m[0])
    ang3 = math.atan2(a3[1] - m[1], a3[0] - m[0])
    symmetric = abs(beta - gamma) < 1e-14
    if symmetric:
        # sample up to the top of the circle and mirror, so the polygon is
        # exactly symmetric about x = 1/2 in floating point
        half = np.linspace(ang1, 0.5 * PI, _ARC_SAMPLES // 2 + 1)[1:]
        pts_right = m + radius * np.column_stack([np.cos(half), np.sin(half)])
        pts_left = pts_right[:-1][::-1].copy()
        pts_left[:, 0] = 1.0 - pts_left[:, 0]  # exact mirror
        arc = np.vstack([pts_right, pts_left])
    else:
        while ang3 <= ang1 + 1e-12:
            ang3 += 2.0 * PI
        sweep = np.linspace(ang1, ang3, _ARC_SAMPLES + 1)[1:-1]
        arc = m + radius * np.column_stack([np.cos(sweep), np.sin(sweep)])
    return np.vstack([o, p, a1, arc, a3])


def _dbeta_functions(d: Dbeta):
    samples = np.asarray(sorted(d.r_samples), dtype=float)
    thetas, rvals = samples[:, 0], samples[:, 1]
    if np.any(rvals <= 0.0):
        raise ValueError("polar graph r(theta) must stay positive")
    beta = d.beta
    gamma0_a = np.array([rvals[0], 0.0])
    gamma0_b = rvals[-1] * np.array([math.cos(beta), math.sin(beta)])
    graph = np.column_stack([rvals * np.cos(thetas), rvals * np.sin(thetas)])

    def r_of(ang):
        return np.interp(ang, thetas, rvals)

    def inside(px, py):
        r = np.hypot(px, py)
        ang = np.mod(np.arctan2(py, px), 2.0 * PI)
        return (ang > 0.0) & (ang < beta) & (r > 0.0) & (r < r_of(ang))

    def dirichlet_dist(px, py):
        d1 = _segment_distance(px, py, 0.0, 0.0, gamma0_a[0], gamma0_a[1])
        d2 = _segment_distance(px, py, 0.0, 0.0, gamma0_b[0], gamma0_b[1])
        return np.minimum(d1, d2)

    def neumann_side(px, py):
        dn = _polyline_distance(px, py, graph, closed=False)
        return dn < dirichlet_dist(px, py)

    link_cut = _ray_link_cut(
        [(1.0, 0.0), (math.cos(beta), math.sin(beta))],
        lengths=[float(rvals[0]), float(rvals[-1])],
    )
    return inside, dirichlet_dist, neumann_side, link_cut, float(np.max(rvals))


def build_grid(domain: DomainSpec, n: int, radius: Optional[float] = None) -> GridProblem:
    """Lattice, weights and energy matrix for a domain description.

    n is the node count per side of the (square) bounding box.  Unbounded
    domains are truncated at `radius` (sector: default 1, scale-free;
    two-halfline domains: default 8 segment lengths) with Dirichlet
    conditions on the truncation arc.  Convex-cap descriptions carry no
    concrete cap geometry and cannot be gridded.
    """
    if isinstance(domain, Sector):
        if not PI < domain.beta <= 2.0 * PI + 1e-12:
            raise ValueError(f"opening angle {domain.beta} outside (pi, 2pi]")
        r = 1.0 if radius is None else float(radius)
        inside, dist, link_cut = _sector_functions(domain.beta, r)
        return _assemble(inside, dist, -r, r, -r, r, n, link_cut=link_cut)
    if isinstance(domain, OneReflexPolygon):
        verts = ensure_ccw(domain.vertices)
        x0, y0 = verts.min(axis=0)
        x1, y1 = verts.max(axis=0)
        x0, x1, y0, y1 = _square_box(x0, x1, y0, y1, 0.0)
        inside, dist = _polygon_functions(verts)
        return _assemble(inside, dist, x0, x1, y0, y1, n)
    if isinstance(domain, Ebg):
        r = 8.0 if radius is None else float(radius)
        verts = _ebg_polygon(domain.beta, domain.gamma, r)
        x0, y0 = verts.min(axis=0)
        x1, y1 = verts.max(axis=0)
        x0, x1, y0, y1 = _square_box(x0, x1, y0, y1, 0.0)
        inside, dist = _polygon_functions(verts)
        return _assemble(inside, dist, x0, x1, y0, y1, n)
    if isinstance(domain, Dbeta):
        inside, dist, neumann_side, link_cut, rmax = _dbeta_functions(domain)
        b = 1.01 * rmax
        return _assemble(
            inside, dist, -b, b, -b, b, n, neumann_side=neumann_side, link_cut=link_cut
        )
    if isinstance(domain, SectorCapConvex):
        raise ValueError(
            "convex-cap descriptions have no concrete cap geometry; certify them instead"
        )
    raise TypeError(f"unknown domain description {type(domain).__name__}")


def strip_proxy(n: int, length: float = 3.0) -> GridProblem:
    """Thin-rectangle proxy for the half-plane: weight measures the bottom side only.

    The rectangle is length x 1 with square cells; n is the node count
    across the short side, so the lattice is wider than n but the spacing
    matches an n-node column.  All four sides are Dirichlet; only the
    distance to the bottom side enters the weight.
    """
    h = 1.0 / (n - 1)
    nx = int(round(length / h)) + 1

    def inside(px, py):
        return (px > 0.0) & (px < (nx - 1) * h) & (py > 0.0) & (py < 1.0)

    def dist(px, py):
        return _segment_distance(px, py, 0.0, 0.0, (nx - 1) * h, 0.0)

    xs0, xs1 = 0.0, (nx - 1) * h
    # assemble on the true (non-square) lattice directly
    xs = np.arange(nx) * h
    ys = np.linspace(0.0, 1.0, n)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    mask = inside(gx, gy)
    dist_grid = np.where(mask, dist(gx, gy), np.inf)
    mask &= dist_grid >= 0.5 * h * (1.0 - 1e-9)
    idx = -np.ones((nx, n), dtype=np.int64)
    ii = np.where(mask)
    count = len(ii[0])
    if count < _MIN_INTERIOR_NODES:
        raise ValueError(f"only {count} interior nodes")
    idx[ii] = np.arange(count)
    rows, cols, vals = [], [], []
    diag = np.zeros(count)
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ji, jj = ii[0] + dx, ii[1] + dy
        in_lattice = (ji >= 0) & (ji < nx) & (jj >= 0) & (jj < n)
        jidx = np.full(count, -1, dtype=np.int64)
        jidx[in_lattice] = idx[ji[in_lattice], jj[in_lattice]]
        open_link = jidx >= 0
        diag += 1.0
        sel = np.where(open_link)[0]
        rows.append(sel)
        cols.append(jidx[sel])
        vals.append(-np.ones(len(sel)))
    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(count, count),
    ) + sp.diags(diag)
    matrix = matrix / (h * h)
    return GridProblem(
        x0=xs0,
        x1=xs1,
        y0=0.0,
        y1=1.0,
        h=h,
        mask=mask,
        dist=dist_grid[ii],
        nodes=np.column_stack(ii),
        matrix=matrix.tocsr(),
    )


# ---------------------------------------------------------------------------
# Pencil eigenvalue.

def _cg(a: sp.csr_matrix, b: np.ndarray, x: np.ndarray, tol: float, cap: int = 20000) -> np.ndarray:
    """Plain conjugate gradients with a warm start; fixed-order reductions."""
    r = b - a @ x
    p = r.copy()
    rs = float(r @ r)
    bnorm = math.sqrt(float(b @ b))
    if bnorm == 0.0:
        return x
    for _ in range(cap):
        ap = a @ p
        alpha = rs / float(p @ ap)
        x = x + alpha * p
        r = r - alpha * ap
        rs_new = float(r @ r)
        if math.sqrt(rs_new) <= tol * bnorm:
            break
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def estimate_constant(
    grid: GridProblem,
    tol: float = 1e-9,
    max_iterations: int = 600,
    cg_tol: float = 1e-8,
    return_vector: bool = False,
):
    """Smallest eigenvalue of the pencil (A, D) by inverse power iteration.

    Each outer step solves A y = D x by warm-started conjugate gradients
    (tolerance cg_tol) and renormalizes in the D-inner product; the
    Rayleigh quotient stops when its relative change drops below tol.
    Deterministic for a fixed grid: the start vector is the distance
    profile and all reductions are fixed-order.
    """
    a = grid.matrix
    d_weight = 1.0 / grid.dist**2
    x = grid.dist / math.sqrt(float(np.sum(d_weight * grid.dist**2)))
    y = x.copy()
    lam_old = math.inf
    lam = math.inf
    for it in range(1, max_iterations + 1):
        y = _cg(a, d_weight * x, y, cg_tol)
        x = y / math.sqrt(float(np.sum(d_weight * y * y)))
        lam = float(x @ (a @ x)) / float(np.sum(d_weight * x * x))
        if abs(lam - lam_old) < tol * max(lam, 1e-300):
            est = RayleighEstimate(lam=lam, iterations=it, h=grid.h)
            return (est, x) if return_vector else est
        lam_old = lam
    raise NumericalError(f"inverse power iteration did not converge in {max_iterations} steps")
