"""Pairwise kernels and radial metrics driven by the coefficient expansions.

All kernels are zonal: they depend on a point pair only through the geodesic
distance t, so every evaluator here takes t (or cos t) rather than points.
Series evaluations are truncated with certified tail bounds from
:func:`geodisc.jacobi.tail_bound`; callers that need the budget use the
expansion objects directly.

Tolerance defaults: fixed-radius kernels use 1e-6.  Weight-averaged kernels
default to 1e-4 because their coefficients require Gauss-Jacobi rules with
at least L nodes, and node generation is quadratic in L; the tolerance is a
parameter wherever tighter budgets are affordable.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from . import backend, jacobi
from .jacobi import ExpansionCoefficients, WeightFunction
from .spaces import Point, PointSet, Space, ball_volume, cos_geodesic_matrix, \
    cos_geodesic_to, geodesic_point

DEFAULT_TOL_RADIUS = 1e-6
DEFAULT_TOL_WEIGHT = 1e-4

_RADIAL_EXP_CACHE: dict[tuple, ExpansionCoefficients] = {}


def radial_expansion(space: Space, r: float, tol: float = DEFAULT_TOL_RADIUS
                     ) -> ExpansionCoefficients:
    """Coefficients kappa l^-2 M_l a_l(r), truncated so the tail is < tol."""
    key = (space.d, space.d0, float(r), float(tol))
    hit = _RADIAL_EXP_CACHE.get(key)
    if hit is None:
        L = jacobi.truncation_order(space, tol, r=r)
        terms = backend.radial_coefficients(space.alpha, space.beta, space.kappa,
                                            math.cos(r), L)
        hit = ExpansionCoefficients(space.alpha, space.beta, terms,
                                    jacobi.tail_bound(space, L, r=r), r=r)
        _RADIAL_EXP_CACHE[key] = hit
    return hit


def weight_expansion(space: Space, weight: WeightFunction,
                     tol: float = DEFAULT_TOL_WEIGHT) -> ExpansionCoefficients:
    """Coefficients kappa l^-2 M_l A_l(eta), truncated so the tail is < tol.

    The coefficients need an L-node Gauss-Jacobi rule and node generation is
    quadratic in L, so the order is capped; radius-fixed kernels (closed-form
    coefficients) remain the route to tighter budgets.
    """
    if not math.isfinite(weight.class_norm(space.d, space.d0)):
        raise ValueError("weight outside the admissible class for this space")
    L = jacobi.truncation_order(space, tol, weight=weight, max_order=30_000)
    A = jacobi.weight_coefficient_table(space, weight, L)
    ls = np.arange(1, L + 1, dtype=float)
    terms = space.kappa * jacobi.norm_constant_table(space.alpha, space.beta, L) \
        * A / (ls * ls)
    return ExpansionCoefficients(space.alpha, space.beta, terms,
                                 jacobi.tail_bound(space, L, weight=weight),
                                 weight=weight)


def series_pair(exp: ExpansionCoefficients, t) -> tuple[np.ndarray, np.ndarray]:
    """(sum_l c_l Phi_l(cos t), sum_l c_l (1 - Phi_l(cos t)))."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    return backend.zonal_series_pair(np.cos(t_arr), exp.terms, exp.alpha, exp.beta)


def ball_intersection_volume(space: Space, r: float, t,
                             tol: float = DEFAULT_TOL_RADIUS):
    """Volume of the intersection of two radius-r balls with centers t apart."""
    exp = radial_expansion(space, r, tol)
    v = float(ball_volume(space, r))
    plus, _ = series_pair(exp, t)
    out = v * v + plus
    return float(out[0]) if np.isscalar(t) else out


def discrepancy_kernel_at_radius(space: Space, r: float, t,
                                 tol: float = DEFAULT_TOL_RADIUS):
    """lambda_r(t): covariance of ball-count errors at radius r."""
    exp = radial_expansion(space, r, tol)
    plus, _ = series_pair(exp, t)
    return float(plus[0]) if np.isscalar(t) else plus


def symmetric_difference_at_radius(space: Space, r: float, t,
                                   tol: float = DEFAULT_TOL_RADIUS):
    """Half the measure of the symmetric difference of two radius-r balls."""
    exp = radial_expansion(space, r, tol)
    _, minus = series_pair(exp, t)
    return float(minus[0]) if np.isscalar(t) else minus


def discrepancy_kernel(space: Space, weight: WeightFunction, t,
                       tol: float = DEFAULT_TOL_WEIGHT):
    """lambda(eta, t): the radius-averaged discrepancy kernel."""
    exp = weight_expansion(space, weight, tol)
    plus, _ = series_pair(exp, t)
    return float(plus[0]) if np.isscalar(t) else plus


def symmetric_difference_metric(space: Space, weight: WeightFunction, t,
                                tol: float = DEFAULT_TOL_WEIGHT):
    """theta^Delta(eta, t): the radius-averaged symmetric difference metric."""
    exp = weight_expansion(space, weight, tol)
    _, minus = series_pair(exp, t)
    return float(minus[0]) if np.isscalar(t) else minus


# ---------------------------------------------------------------------------
# Averages and the invariance constants
# ---------------------------------------------------------------------------

def mean_symmetric_difference(space: Space, weight: WeightFunction) -> float:
    """<theta^Delta(eta)> = int v_r (1 - v_r) eta(r) dr (distance-invariant)."""
    def integrand(r):
        v = ball_volume(space, r)
        return v * (1.0 - v) * weight(r)

    if weight.kind == "indicator":
        val, _ = quad(integrand, 0.0, weight.r0, epsabs=1e-13, epsrel=1e-12, limit=200)
    else:
        val, _ = quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return float(val)


def mean_chordal(space: Space) -> float:
    """<tau> = B((d+1)/2, d0/2) / B(d/2, d0/2)."""
    d, d0 = space.d, space.d0
    return math.exp(
        gammaln(0.5 * (d + 1)) + gammaln(0.5 * (d + d0))
        - gammaln(0.5 * (d + d0 + 1)) - gammaln(0.5 * d))


def mean_geodesic(space: Space) -> float:
    """<theta> by quadrature of r against the volume density."""
    val, _ = quad(lambda r: r * space.kappa * math.sin(0.5 * r) ** (space.d - 1)
                  * math.cos(0.5 * r) ** (space.d0 - 1),
                  0.0, math.pi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return float(val)


def stolarsky_constant(space: Space) -> float:
    """gamma(Q) = <tau> / <theta^Delta(sin)>: the chordal metric equals
    gamma(Q) times the sin-averaged symmetric difference metric."""
    return mean_chordal(space) / mean_symmetric_difference(space, WeightFunction.sin())


def chordal_from_degree_one(space: Space, t):
    """Chordal distance reproduced from the degree-one spherical function:
    sqrt(d/(d+d0)) * sqrt(1 - Phi_1(cos t)); equals sin(t/2) identically."""
    t_arr = np.asarray(t, dtype=float)
    alpha, beta = space.alpha, space.beta
    z = np.cos(t_arr)
    phi1 = (0.5 * (alpha + beta + 2.0) * z + 0.5 * (alpha - beta)) / (alpha + 1.0)
    c = math.sqrt(space.d / (space.d + space.d0))
    out = c * np.sqrt(np.maximum(1.0 - phi1, 0.0))
    return float(out) if np.isscalar(t) else out


def sphere_geodesic_series(space: Space, t, tol: float = DEFAULT_TOL_RADIUS):
    """Geodesic distance on a sphere as 2 pi times the hemisphere symmetric
    difference metric; the series carries odd degrees only."""
    if not space.is_sphere:
        raise ValueError("geodesic series applies to spheres only")
    return 2.0 * math.pi * np.asarray(
        symmetric_difference_at_radius(space, 0.5 * math.pi, t, tol))


# ---------------------------------------------------------------------------
# Metrics on point sets and Levy-Schoenberg kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricKind:
    """A metric usable in distance sums and Levy-Schoenberg Gram matrices."""
    name: str                       # tau | geodesic | theta_delta_eta | theta_delta_r
    weight: WeightFunction | None = None
    r: float | None = None

    @staticmethod
    def tau() -> "MetricKind":
        return MetricKind("tau")

    @staticmethod
    def geodesic() -> "MetricKind":
        return MetricKind("geodesic")

    @staticmethod
    def symmetric_difference(weight: WeightFunction) -> "MetricKind":
        return MetricKind("theta_delta_eta", weight=weight)

    @staticmethod
    def symmetric_difference_at(r: float) -> "MetricKind":
        return MetricKind("theta_delta_r", r=r)


def metric_from_cos(space: Space, metric: MetricKind, cos_t: np.ndarray,
                    tol: float = DEFAULT_TOL_WEIGHT) -> np.ndarray:
    """Evaluate the metric on an array of cos(geodesic distance) values."""
    z = np.asarray(cos_t, dtype=float)
    if metric.name == "tau":
        return np.sqrt(np.maximum(0.5 * (1.0 - z), 0.0))
    if metric.name == "geodesic":
        return np.arccos(np.clip(z, -1.0, 1.0))
    if metric.name == "theta_delta_eta":
        exp = weight_expansion(space, metric.weight, tol)
    elif metric.name == "theta_delta_r":
        exp = radial_expansion(space, metric.r, min(tol, DEFAULT_TOL_RADIUS))
    else:
        raise ValueError(f"unknown metric {metric.name!r}")
    flat = z.reshape(-1)
    _, minus = backend.zonal_series_pair(flat, exp.terms, exp.alpha, exp.beta)
    return minus.reshape(z.shape)


def levy_schoenberg(space: Space, metric: MetricKind, y1: Point, y2: Point,
                    y0: Point, tol: float = DEFAULT_TOL_WEIGHT) -> float:
    """k(rho, y1, y2) = rho(y1, y0) + rho(y2, y0) - rho(y1, y2)."""
    pset = PointSet.from_points([y1, y2, y0])
    M = cos_geodesic_matrix(pset)
    rho = metric_from_cos(space, metric, np.array([M[0, 2], M[1, 2], M[0, 1]]), tol)
    return float(rho[0] + rho[1] - rho[2])


def levy_schoenberg_gram(space: Space, metric: MetricKind, pset: PointSet,
                         y0: Point, tol: float = DEFAULT_TOL_WEIGHT) -> np.ndarray:
    """Gram matrix of the Levy-Schoenberg kernel over a point set."""
    M = cos_geodesic_matrix(pset)
    to0 = cos_geodesic_to(pset, y0.rep[None, ...])[:, 0]
    rho_pairs = metric_from_cos(space, metric, M, tol)
    np.fill_diagonal(rho_pairs, 0.0)  # exact zero; avoids sqrt(ulp) noise
    rho_0 = metric_from_cos(space, metric, to0, tol)
    return rho_0[:, None] + rho_0[None, :] - rho_pairs


def min_eigenvalue_ratio(gram: np.ndarray) -> float:
    """Smallest eigenvalue divided by the spectral norm of the matrix."""
    eigs = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    scale = max(abs(eigs[0]), abs(eigs[-1]), 1e-300)
    return float(eigs[0] / scale)


# ---------------------------------------------------------------------------
# Monte Carlo oracles
# ---------------------------------------------------------------------------

def _pair_at_distance(space: Space, t: float) -> tuple[Point, Point]:
    return geodesic_point(space, 0.0), geodesic_point(space, 0.5 * t)


def mc_ball_intersection(space: Space, r: float, t: float, samples: int,
                         rng: np.random.Generator) -> tuple[float, float]:
    """Monte Carlo estimate (value, stderr) of the two-ball intersection volume."""
    from .spaces import sample_points
    y1, y2 = _pair_at_distance(space, t)
    pts = sample_points(space, samples, rng)
    cos_t = cos_geodesic_to(pts, np.stack([y1.rep, y2.rep]))
    thr = math.cos(r)
    hits = np.logical_and(cos_t[:, 0] > thr, cos_t[:, 1] > thr)
    p = hits.mean()
    return float(p), float(math.sqrt(max(p * (1 - p), 0.0) / samples))


def survival_function(weight: WeightFunction, r) -> np.ndarray:
    """sigma(r) = int_r^pi eta(u) du for the built-in weights."""
    r_arr = np.asarray(r, dtype=float)
    if weight.kind == "sin":
        out = 1.0 + np.cos(r_arr)
    elif weight.kind == "const":
        out = math.pi - r_arr
    elif weight.kind == "indicator":
        out = np.maximum(weight.r0 - r_arr, 0.0)
    else:
        grid, cdf = weight._cdf_table()
        total = weight.total_mass()
        out = total * (1.0 - np.interp(r_arr, grid, cdf))
    return out


def mc_symmetric_difference(space: Space, weight: WeightFunction, t: float,
                            samples: int, rng: np.random.Generator
                            ) -> tuple[float, float]:
    """Monte Carlo estimate of theta^Delta(eta, t) via the representation
    (1/2) int |sigma(theta(y1, y)) - sigma(theta(y2, y))| dmu(y)."""
    from .spaces import sample_points
    y1, y2 = _pair_at_distance(space, t)
    pts = sample_points(space, samples, rng)
    cos_t = cos_geodesic_to(pts, np.stack([y1.rep, y2.rep]))
    th = np.arccos(np.clip(cos_t, -1.0, 1.0))
    vals = 0.5 * np.abs(survival_function(weight, th[:, 0])
                        - survival_function(weight, th[:, 1]))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))
