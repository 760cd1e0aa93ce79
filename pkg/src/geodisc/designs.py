"""t-design verification, geometric statistics, and built-in configurations.

A set is a t-design when its zonal sums phi_l vanish for l = 1..t (phi_0 is
always N^2, so degree zero is excluded).  Verification compares phi_l / N^2
against a tolerance: exact fixtures pass at 1e-9, numerically constructed
families at 1e-6.

The covering count nu is a certified lower bound: the maximum over a
documented candidate list (the set itself, geodesic midpoints where a
midpoint construction exists, and random centers); exact maximization over
a continuum of centers is out of scope and the quantity only feeds upper
bound audits.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import discrepancy, jacobi
from .jacobi import WeightFunction
from .spaces import Family, Point, PointSet, Space, cos_geodesic_to, \
    geodesic_point, make_space, sample_points

DESIGN_TOL_EXACT = 1e-9
DESIGN_TOL_NUMERIC = 1e-6


def verify_design(pset: PointSet, t: int, tol: float = DESIGN_TOL_EXACT) -> bool:
    """True iff phi_l <= tol * N^2 for l = 1..t."""
    if t < 1:
        raise ValueError("design strength must be >= 1")
    phi = discrepancy.zonal_sum_table(pset, t)
    n2 = len(pset) ** 2
    return bool(np.all(phi[1:t + 1] <= tol * n2))


def design_strength(pset: PointSet, max_t: int, tol: float = DESIGN_TOL_EXACT) -> int:
    """Largest t <= max_t with phi_l <= tol N^2 for all l = 1..t (0 if none)."""
    phi = discrepancy.zonal_sum_table(pset, max_t)
    n2 = len(pset) ** 2
    for l in range(1, max_t + 1):
        if phi[l] > tol * n2:
            return l - 1
    return max_t


def quadrature_cross_check(pset: PointSet, t: int, rng: np.random.Generator,
                           trials: int = 4) -> float:
    """Max deviation of sum_x f(cos theta(x, y)) from N * (radial average of f)
    over monomials f(z) = z^k, k <= t, and random centers y."""
    space = pset.space
    n = len(pset)
    worst = 0.0
    for _ in range(trials):
        y = sample_points(space, 1, rng)
        z = cos_geodesic_to(pset, y.coords)[:, 0]
        for k in range(t + 1):
            lhs = float(np.sum(z ** k))
            rhs = n * jacobi.radial_average(space, lambda x: x ** k, m=t + 4)
            worst = max(worst, abs(lhs - rhs))
    return worst


def covering_count(pset: PointSet, r: float, rng: np.random.Generator | None = None,
                   random_centers: int = 1000) -> int:
    """Certified lower bound on max_y #(B_r(y) intersect D).

    Candidates: the set's own points, normalized pairwise midpoints on
    spheres, and random centers.  Monotone in r; returns N for r > pi.
    """
    n = len(pset)
    if r > math.pi:
        return n
    if r <= 0.0:
        return 0
    space = pset.space
    cands = [pset.coords]
    if space.is_sphere and n >= 2:
        iu, ju = np.triu_indices(n, k=1)
        if len(iu) > 4000:
            sub = np.random.default_rng(0).choice(len(iu), 4000, replace=False)
            iu, ju = iu[sub], ju[sub]
        mids = pset.coords[iu] + pset.coords[ju]
        norms = np.linalg.norm(mids, axis=1)
        keep = norms > 1e-9
        cands.append(mids[keep] / norms[keep, None])
    if random_centers > 0:
        rng = rng if rng is not None else np.random.default_rng(2024)
        cands.append(sample_points(space, random_centers, rng).coords)
    best = 0
    thr = math.cos(r)
    for block in cands:
        cos_t = cos_geodesic_to(pset, block)
        best = max(best, int((cos_t > thr).sum(axis=0).max(initial=0)))
    return best


def separation(pset: PointSet) -> float:
    """Half the minimal pairwise geodesic distance; zero for duplicates."""
    if len(pset) < 2:
        raise ValueError("separation needs at least two points")
    from .spaces import pairwise_cos_upper
    z = pairwise_cos_upper(pset)
    return 0.5 * float(np.arccos(np.clip(z.max(), -1.0, 1.0)))


@dataclass
class DesignAudit:
    space: str
    n_points: int
    t_verified: int
    phi_over_n2: np.ndarray = field(repr=False)
    nu_at_scale: int
    delta: float
    bound_ratio: float | None


def design_bound_audit(pset: PointSet, t: int, weight: WeightFunction,
                       scale_const: float = 4.0,
                       tol_design: float = DESIGN_TOL_NUMERIC) -> DesignAudit:
    """Ratio lambda[eta, D] / (t^(d-1) nu[D, scale/t]^2) for a verified design.

    The proportionality constant of the underlying bound is nonconstructive,
    so only the ratio is reported; families of designs should exhibit a
    bounded band of ratios.  Raises if the set fails verification at t, or
    if t < 2 * scale_const / pi (the bound's validity range).
    """
    if not verify_design(pset, t, tol_design):
        raise ValueError(f"set is not a verified {t}-design at tol {tol_design:g}")
    if t < 2.0 * scale_const / math.pi:
        raise ValueError("design strength too small for the configured scale")
    space = pset.space
    r = scale_const / t
    nu = covering_count(pset, r)
    lam = discrepancy.quadratic_discrepancy_series(pset, weight).value
    ratio = lam / (t ** (space.d - 1) * nu * nu)
    phi = discrepancy.zonal_sum_table(pset, max(t + 1, 8)) / len(pset) ** 2
    return DesignAudit(space.label(), len(pset),
                       design_strength(pset, t, tol_design), phi,
                       nu, separation(pset), ratio)


def audit(pset: PointSet, max_t: int = 12, tol: float = DESIGN_TOL_EXACT,
          nu_radius: float | None = None) -> DesignAudit:
    """Verification-only audit: strength, zonal sums, covering count, separation."""
    n = len(pset)
    phi = discrepancy.zonal_sum_table(pset, max_t) / max(n * n, 1)
    t_ver = design_strength(pset, max_t, tol)
    r = nu_radius if nu_radius is not None else len(pset) ** (-1.0 / pset.space.d)
    return DesignAudit(pset.space.label(), n, t_ver, phi,
                       covering_count(pset, r),
                       separation(pset) if n >= 2 else math.nan, None)


# ---------------------------------------------------------------------------
# Built-in configurations
# ---------------------------------------------------------------------------

def builtin_configuration(space: Space, name: str, **params) -> PointSet:
    """Named fixture sets.

    Supported: simplex, cross_polytope, cube, icosahedron (S^2),
    orthonormal_lines (projective), geodesic_orbit (k=...),
    spiral (S^2, count=...), random (count=..., seed=...).
    """
    if name == "simplex":
        return _require_sphere(space, name, _simplex)
    if name == "cross_polytope":
        return _require_sphere(space, name, _cross_polytope)
    if name == "cube":
        return _require_sphere(space, name, _cube)
    if name == "icosahedron":
        if not (space.is_sphere and space.d == 2):
            raise ValueError("icosahedron is defined on S2 only")
        return _icosahedron(space)
    if name == "orthonormal_lines":
        if space.is_sphere:
            raise ValueError("orthonormal_lines needs a projective space")
        return _orthonormal_lines(space)
    if name == "geodesic_orbit":
        k = int(params.get("k", 8))
        if k < 1:
            raise ValueError("orbit size must be positive")
        pts = [geodesic_point(space, j * math.pi / k) for j in range(k)]
        return PointSet.from_points(pts)
    if name == "spiral":
        if not (space.is_sphere and space.d == 2):
            raise ValueError("spiral points are defined on S2 only")
        return _spiral(space, int(params.get("count", 100)))
    if name == "random":
        count = int(params.get("count", 100))
        rng = np.random.default_rng(params.get("seed", 0))
        return sample_points(space, count, rng)
    raise ValueError(f"unknown configuration {name!r} for {space.label()}")


def _require_sphere(space: Space, name: str, builder) -> PointSet:
    if not space.is_sphere:
        raise ValueError(f"{name} is defined on spheres only")
    return builder(space)


def _simplex(space: Space) -> PointSet:
    """Regular simplex: d + 2 unit vectors with pairwise dot -1/(d+1)."""
    d = space.d
    m = d + 2
    basis = np.eye(m) - np.full((m, m), 1.0 / m)
    # orthonormal basis of the sum-zero hyperplane (Helmert rows)
    H = np.zeros((m - 1, m))
    for k in range(1, m):
        H[k - 1, :k] = 1.0
        H[k - 1, k] = -k
        H[k - 1] /= math.sqrt(k * (k + 1))
    verts = basis @ H.T
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    return PointSet(space, verts)


def _cross_polytope(space: Space) -> PointSet:
    eye = np.eye(space.d + 1)
    return PointSet(space, np.vstack([eye, -eye]))


def _cube(space: Space) -> PointSet:
    d1 = space.d + 1
    corners = np.array(np.meshgrid(*([[-1.0, 1.0]] * d1))).T.reshape(-1, d1)
    return PointSet(space, corners / math.sqrt(d1))


def _icosahedron(space: Space) -> PointSet:
    phi = 0.5 * (1.0 + math.sqrt(5.0))
    raw = []
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            raw += [(0.0, s1, s2 * phi), (s1, s2 * phi, 0.0), (s2 * phi, 0.0, s1)]
    verts = np.asarray(raw) / math.sqrt(1.0 + phi * phi)
    return PointSet(space, verts)


def _orthonormal_lines(space: Space) -> PointSet:
    m = space.n + 1
    dim = space.algebra.dim
    coords = np.zeros((m, m, m, dim))
    for i in range(m):
        coords[i, i, i, 0] = 1.0
    return PointSet(space, coords)


def _spiral(space: Space, count: int) -> PointSet:
    """Fibonacci spiral: equal-area latitudes, golden-angle azimuths."""
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    azim = i * math.pi * (3.0 - math.sqrt(5.0))
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return PointSet(space, np.stack([s * np.cos(azim), s * np.sin(azim), z], axis=1))


def parse_configuration(space: Space, text: str) -> PointSet:
    """Parse 'name', 'name:arg' or 'name:arg:arg' (e.g. spiral:200, random:64:7)."""
    parts = text.split(":")
    name = parts[0]
    if name == "geodesic_orbit" and len(parts) > 1:
        return builtin_configuration(space, name, k=int(parts[1]))
    if name == "spiral" and len(parts) > 1:
        return builtin_configuration(space, name, count=int(parts[1]))
    if name == "random":
        count = int(parts[1]) if len(parts) > 1 else 100
        seed = int(parts[2]) if len(parts) > 2 else 0
        return builtin_configuration(space, name, count=count, seed=seed)
    return builtin_configuration(space, name)
