"""Jacobi polynomials, quadrature, and the coefficients driving all kernels.

Conventions: a space with dimensions (d, d0) carries the parameters
alpha = d/2 - 1, beta = d0/2 - 1, and the radial volume density
w(r) = (sin r/2)^(d-1) (cos r/2)^(d0-1) up to the constant kappa.
Fourier coefficients of radial functions are taken against P_l^(alpha,beta)
and this density.

The workhorse objects are

  * ball_coefficient(space, l, r): coefficient of the ball indicator, with
    the closed form l^-1 (sin r/2)^d (cos r/2)^d0 P^(alpha+1,beta+1)_{l-1},
  * radial_coefficient(space, l, r): its square scaled to the intersection
    kernel, (sin r/2)^(2d) (cos r/2)^(2d0) P^(alpha+1,beta+1)_{l-1}^2,
  * weight_coefficient_table(space, weight, L): the radial coefficient
    averaged over r against a weight function, evaluated by Gauss-Jacobi
    rules that are polynomially exact for the built-in weights.

Truncation orders come from the envelope bound
M_l * radial_coefficient <= C * w(r): the recorded constant C makes the
series tail summable and yields certified bounds of the form
kappa * C * (weight factor) / L.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, gammaln, roots_jacobi

from . import backend
from .spaces import Space, ball_volume

_EPS = 1e-12


def jacobi_eval(alpha: float, beta: float, l: int, z):
    """P_l^(alpha,beta)(z) by the three-term recurrence; z in [-1, 1]."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < -1.0 - _EPS) or np.any(z_arr > 1.0 + _EPS):
        raise ValueError("Jacobi argument outside [-1, 1]")
    z_arr = np.clip(z_arr, -1.0, 1.0)
    scalar = np.isscalar(z) or z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if l < 0:
        raise ValueError("degree must be nonnegative")
    p_prev = np.ones_like(z_arr)
    if l == 0:
        return float(p_prev[0]) if scalar else p_prev
    p_cur = 0.5 * (alpha + beta + 2.0) * z_arr + 0.5 * (alpha - beta)
    for n in range(2, l + 1):
        tn = 2.0 * n + alpha + beta
        c1 = 2.0 * n * (n + alpha + beta) * (tn - 2.0)
        c2 = (tn - 1.0) * (alpha * alpha - beta * beta)
        c3 = (tn - 2.0) * (tn - 1.0) * tn
        c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * tn
        p_prev, p_cur = p_cur, ((c2 + c3 * z_arr) * p_cur - c4 * p_prev) / c1
    return float(p_cur[0]) if scalar else p_cur


def jacobi_at_one(alpha: float, beta: float, l: int) -> float:
    """P_l^(alpha,beta)(1) = binom(alpha + l, l), via log-gamma."""
    if l == 0:
        return 1.0
    return math.exp(gammaln(alpha + l + 1.0) - gammaln(alpha + 1.0) - gammaln(l + 1.0))


def norm_constant(alpha: float, beta: float, l: int) -> float:
    """M_l: reciprocal squared norm of P_l against the radial density.

    M_0 equals kappa = 1/B(alpha+1, beta+1); for l >= 1,
    M_l = (2l+alpha+beta+1) Gamma(l+1) Gamma(l+alpha+beta+1)
          / (Gamma(l+alpha+1) Gamma(l+beta+1)).
    """
    if l == 0:
        return math.exp(gammaln(alpha + beta + 2.0) - gammaln(alpha + 1.0)
                        - gammaln(beta + 1.0))
    s = alpha + beta + 1.0
    return (2.0 * l + s) * math.exp(
        gammaln(l + 1.0) + gammaln(l + s) - gammaln(l + alpha + 1.0)
        - gammaln(l + beta + 1.0)
    )


def norm_constant_table(alpha: float, beta: float, L: int) -> np.ndarray:
    """M_l for l = 1..L via a cumulative ratio product."""
    if L == 0:
        return np.empty(0)
    ls = np.arange(2, L + 1, dtype=float)
    s = alpha + beta + 1.0
    ratios = ((2 * ls + s) / (2 * ls - 2 + s)) * (ls * (ls - 1 + s)) \
        / ((ls + alpha) * (ls + beta))
    out = np.empty(L)
    out[0] = norm_constant(alpha, beta, 1)
    out[1:] = out[0] * np.cumprod(ratios)
    return out


def rep_dimension(alpha: float, beta: float, l: int) -> float:
    """Dimension of the degree-l eigenspace: M_l B(alpha+1,beta+1) P_l(1)^2."""
    kappa = norm_constant(alpha, beta, 0)
    return norm_constant(alpha, beta, l) / kappa * jacobi_at_one(alpha, beta, l) ** 2


def scaled_jacobi(alpha: float, beta: float, l: int, r) -> np.ndarray | float:
    """Endpoint-damped polynomial
    (sin r/2)^(alpha+1/2) (cos r/2)^(beta+1/2) P_l(cos r);
    uniformly O((l+1)^(-1/2)) on [0, pi].
    """
    r_arr = np.asarray(r, dtype=float)
    val = (np.sin(0.5 * r_arr) ** (alpha + 0.5)
           * np.cos(0.5 * r_arr) ** (beta + 0.5)
           * jacobi_eval(alpha, beta, l, np.cos(r_arr)))
    return float(val) if np.isscalar(r) or r_arr.ndim == 0 else val


def radial_coefficient(space: Space, l: int, r: float) -> float:
    """a_l(r) of the ball-intersection expansion, l >= 1."""
    if l < 1:
        raise ValueError("defined for l >= 1")
    sh = math.sin(0.5 * r)
    ch = math.cos(0.5 * r)
    p = jacobi_eval(space.alpha + 1.0, space.beta + 1.0, l - 1, math.cos(r))
    return sh ** (2 * space.d) * ch ** (2 * space.d0) * float(p) ** 2


def ball_coefficient(space: Space, l: int, r: float) -> float:
    """Fourier coefficient of the ball indicator at radius r.

    l = 0 gives v_r / kappa; for l >= 1 the closed form
    l^-1 (sin r/2)^d (cos r/2)^d0 P^(alpha+1,beta+1)_{l-1}(cos r).
    """
    if l == 0:
        return float(ball_volume(space, r)) / space.kappa
    sh = math.sin(0.5 * r)
    ch = math.cos(0.5 * r)
    p = jacobi_eval(space.alpha + 1.0, space.beta + 1.0, l - 1, math.cos(r))
    return sh ** space.d * ch ** space.d0 * float(p) / l


def ball_coefficient_quadrature(space: Space, l: int, r: float, m: int = 160) -> float:
    """Independent evaluation of the same coefficient by Gauss-Jacobi
    quadrature of  int_cos(r)^1 (1-z)^alpha (1+z)^beta P_l(z) dz / 2^(a+b+1).

    The sub-interval [cos r, 1] is mapped to [-1, 1] so that the (alpha, 0)
    rule absorbs the (1-z)^alpha factor; the rest of the integrand is
    analytic, giving geometric convergence.
    """
    if l == 0:
        return float(ball_volume(space, r)) / space.kappa
    alpha, beta = space.alpha, space.beta
    x, w = gauss_jacobi_rule(alpha, 0.0, max(m, 2 * l + 16))
    half_len = 0.5 * (1.0 - math.cos(r))
    z = 1.0 - half_len * (1.0 - x)
    vals = (1.0 + z) ** beta * jacobi_eval(alpha, beta, l, z)
    integral = (half_len ** (alpha + 1.0)) * float(np.dot(w, vals))
    return integral * 0.5 ** (alpha + beta + 1.0)


# ---------------------------------------------------------------------------
# Gauss-Jacobi rules
# ---------------------------------------------------------------------------

_RULE_CACHE: dict[tuple[float, float, int], tuple[np.ndarray, np.ndarray]] = {}


def gauss_jacobi_rule(alpha: float, beta: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for weight (1-z)^alpha (1+z)^beta on [-1, 1];
    exact for polynomials of degree <= 2m - 1.  Cached per (alpha, beta, m).
    """
    if m < 1:
        raise ValueError("need at least one node")
    key = (float(alpha), float(beta), int(m))
    hit = _RULE_CACHE.get(key)
    if hit is None:
        hit = roots_jacobi(m, alpha, beta)
        _RULE_CACHE[key] = hit
    return hit


def gauss_legendre_rule(a: float, b: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to [a, b]."""
    x, w = gauss_jacobi_rule(0.0, 0.0, m)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def radial_average(space: Space, fn, m: int = 256) -> float:
    """int fn(cos theta(x, y)) dmu(x), independent of y."""
    x, w = gauss_jacobi_rule(space.alpha, space.beta, m)
    return space.kappa * 0.5 ** (space.alpha + space.beta + 1.0) \
        * float(np.dot(w, fn(x)))


# ---------------------------------------------------------------------------
# Weight functions on [0, pi]
# ---------------------------------------------------------------------------

class WeightFunction:
    """Nonnegative radial weight: built-in sin r / constant / ball indicator,
    or user samples interpreted as piecewise linear."""

    def __init__(self, kind: str, r0: float | None = None,
                 knots: np.ndarray | None = None, values: np.ndarray | None = None):
        if kind not in ("sin", "const", "indicator", "tabulated"):
            raise ValueError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.r0 = r0
        if kind == "indicator":
            if r0 is None or not (0.0 < r0 <= math.pi):
                raise ValueError("indicator radius must lie in (0, pi]")
        if kind == "tabulated":
            knots = np.asarray(knots, dtype=float)
            values = np.asarray(values, dtype=float)
            if knots.ndim != 1 or knots.shape != values.shape or len(knots) < 2:
                raise ValueError("tabulated weight needs matching 1-d knots/values")
            if np.any(np.diff(knots) <= 0) or knots[0] < 0 or knots[-1] > math.pi:
                raise ValueError("knots must increase within [0, pi]")
            if np.any(values < 0):
                raise ValueError("weight must be nonnegative")
        self.knots = knots
        self.values = values

    # construction helpers -------------------------------------------------
    @staticmethod
    def sin() -> "WeightFunction":
        return WeightFunction("sin")

    @staticmethod
    def const() -> "WeightFunction":
        return WeightFunction("const")

    @staticmethod
    def indicator(r0: float) -> "WeightFunction":
        return WeightFunction("indicator", r0=r0)

    @staticmethod
    def tabulated(knots, values) -> "WeightFunction":
        return WeightFunction("tabulated", knots=knots, values=values)

    # evaluation ------------------------------------------------------------
    def __call__(self, r):
        r_arr = np.asarray(r, dtype=float)
        if self.kind == "sin":
            out = np.sin(r_arr)
        elif self.kind == "const":
            out = np.ones_like(r_arr)
        elif self.kind == "indicator":
            out = (r_arr < self.r0).astype(float)
        else:
            out = np.interp(r_arr, self.knots, self.values, left=0.0, right=0.0)
        return float(out) if np.isscalar(r) else out

    def key(self) -> tuple:
        if self.kind == "tabulated":
            return ("tabulated", self.knots.tobytes(), self.values.tobytes())
        return (self.kind, self.r0)

    def describe(self) -> str:
        if self.kind == "indicator":
            return f"indicator:{self.r0:g}"
        if self.kind == "tabulated":
            return f"tabulated[{len(self.knots)}]"
        return self.kind

    # integrals -------------------------------------------------------------
    def total_mass(self) -> float:
        if self.kind == "sin":
            return 2.0
        if self.kind == "const":
            return math.pi
        if self.kind == "indicator":
            return self.r0
        return float(np.trapezoid(self.values, self.knots))

    def class_norm(self, a: float, b: float) -> float:
        """int (sin r/2)^(a-1) (cos r/2)^(b-1) eta(r) dr."""
        if self.kind == "sin":
            return 2.0 * math.exp(
                gammaln(0.5 * (a + 1)) + gammaln(0.5 * (b + 1))
                - gammaln(0.5 * (a + b) + 1.0))
        if self.kind == "const":
            return math.exp(gammaln(0.5 * a) + gammaln(0.5 * b) - gammaln(0.5 * (a + b)))
        if self.kind == "indicator":
            beta_ab = math.exp(gammaln(0.5 * a) + gammaln(0.5 * b) - gammaln(0.5 * (a + b)))
            return beta_ab * float(betainc(0.5 * a, 0.5 * b, math.sin(0.5 * self.r0) ** 2))
        total = 0.0
        for i in range(len(self.knots) - 1):
            u, w = gauss_legendre_rule(self.knots[i], self.knots[i + 1], 16)
            f = np.sin(0.5 * u) ** (a - 1.0) * np.cos(0.5 * u) ** (b - 1.0) * self(u)
            total += float(np.dot(w, f))
        return total

    # radius sampling for Monte Carlo ----------------------------------------
    def sample_radii(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse-CDF draws from eta(r) dr / ||eta||_1."""
        u = rng.random(count)
        if self.kind == "sin":
            return np.arccos(1.0 - 2.0 * u)
        if self.kind == "const":
            return math.pi * u
        # indicator and tabulated: binary search on a dense CDF table
        grid, cdf = self._cdf_table()
        return np.interp(u, cdf, grid)

    def _cdf_table(self, n: int = 10_000) -> tuple[np.ndarray, np.ndarray]:
        if getattr(self, "_cdf_cache", None) is None:
            lo = 0.0
            hi = self.r0 if self.kind == "indicator" else math.pi
            grid = np.linspace(lo, hi, n)
            dens = self(grid)
            cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1])
                                                   * np.diff(grid))])
            if cdf[-1] <= 0:
                raise ValueError("weight integrates to zero")
            self._cdf_cache = (grid, cdf / cdf[-1])
        return self._cdf_cache


# ---------------------------------------------------------------------------
# Weighted coefficient tables A_l = int eta(u) a_l(u) du
# ---------------------------------------------------------------------------

_WEIGHT_TABLE_CACHE: dict[tuple, tuple[int, np.ndarray]] = {}


def weight_coefficient_table(space: Space, weight: WeightFunction, L: int) -> np.ndarray:
    """A_l for l = 1..L.

    sin and const weights reduce to single Gauss-Jacobi rules that integrate
    the squared polynomial exactly; indicator and tabulated weights use
    composite Gauss-Legendre in r with node-doubling verification.
    """
    key = (space.d, space.d0) + weight.key()
    cached = _WEIGHT_TABLE_CACHE.get(key)
    if cached is not None and cached[0] >= L:
        return cached[1][:L]
    table = _weight_table_impl(space, weight, L)
    _WEIGHT_TABLE_CACHE[key] = (L, table)
    return table


def _weight_table_impl(space: Space, weight: WeightFunction, L: int) -> np.ndarray:
    d, d0 = space.d, space.d0
    a1, b1 = space.alpha + 1.0, space.beta + 1.0
    if weight.kind == "sin":
        # (1-z)^d (1+z)^d0 absorbs eta and the Jacobian: exact rule
        z, w = gauss_jacobi_rule(float(d), float(d0), L + 2)
        W = w * 0.5 ** (d + d0)
        return backend.squared_poly_sums(z, W, a1, b1, L)
    if weight.kind == "const":
        z, w = gauss_jacobi_rule(d - 0.5, d0 - 0.5, L + 2)
        W = w * 0.5 ** (d + d0)
        return backend.squared_poly_sums(z, W, a1, b1, L)
    # r-domain composite rules for indicator / tabulated
    if weight.kind == "indicator":
        segments = [(0.0, weight.r0)]
    else:
        segments = list(zip(weight.knots[:-1], weight.knots[1:]))
    m0 = max(64, L + 64)
    prev = None
    for trial in range(3):
        nodes, wts = [], []
        for (ra, rb) in segments:
            m_seg = max(16, int(math.ceil(m0 * (rb - ra) / math.pi)) + 8)
            u, w = gauss_legendre_rule(ra, rb, m_seg)
            nodes.append(u)
            wts.append(w * weight(u)
                       * np.sin(0.5 * u) ** (2 * d) * np.cos(0.5 * u) ** (2 * d0))
        u_all = np.concatenate(nodes)
        table = backend.squared_poly_sums(np.cos(u_all), np.concatenate(wts), a1, b1, L)
        if prev is not None and np.max(np.abs(table - prev)) < 1e-11:
            return table
        prev = table
        m0 *= 2
    return prev


def weight_coefficient(space: Space, l: int, weight: WeightFunction) -> float:
    """A_l for a single degree (table-backed)."""
    if l < 1:
        raise ValueError("defined for l >= 1")
    if not math.isfinite(weight.class_norm(space.d, space.d0)):
        raise ValueError("weight outside the admissible class for this space")
    return float(weight_coefficient_table(space, weight, l)[l - 1])


# ---------------------------------------------------------------------------
# Envelope constant and truncation policy
# ---------------------------------------------------------------------------

_ENVELOPE_CACHE: dict[tuple[int, int], float] = {}
_ENVELOPE_SWEEP_L = 500
_ENVELOPE_MARGIN = 1.5


def envelope_constant(space: Space) -> float:
    """Recorded constant C with M_l a_l(r) <= C (sin r/2)^(d-1)(cos r/2)^(d0-1).

    Empirical sweep over l <= 500 and an r-grid, widened by a 1.5x safety
    margin.  The no-growth property of the sweep itself is covered by tests.
    """
    key = (space.d, space.d0)
    if key not in _ENVELOPE_CACHE:
        _ENVELOPE_CACHE[key] = _ENVELOPE_MARGIN * envelope_sweep_max(
            space, _ENVELOPE_SWEEP_L)
    return _ENVELOPE_CACHE[key]


def envelope_sweep_max(space: Space, L: int, grid: int = 201) -> float:
    """max over the sweep of M_l a_l(r) / w(r) (no margin applied)."""
    rs = np.linspace(0.01, math.pi - 0.01, grid)
    ls = np.arange(1, L + 1, dtype=float)
    worst = 0.0
    for r in rs:
        c = backend.radial_coefficients(space.alpha, space.beta, space.kappa,
                                        math.cos(r), L)
        w = math.sin(0.5 * r) ** (space.d - 1) * math.cos(0.5 * r) ** (space.d0 - 1)
        ratio = c * ls * ls / (space.kappa * w)
        worst = max(worst, float(ratio.max()))
    return worst


def tail_bound(space: Space, L: int, *, weight: WeightFunction | None = None,
               r: float | None = None) -> float:
    """Certified bound on kappa * sum_{l > L} l^-2 M_l {a_l(r) | A_l(eta)}."""
    c = envelope_constant(space)
    if weight is not None:
        factor = weight.class_norm(space.d, space.d0)
    elif r is not None:
        factor = math.sin(0.5 * r) ** (space.d - 1) * math.cos(0.5 * r) ** (space.d0 - 1)
    else:
        raise ValueError("need a weight or a radius")
    return space.kappa * c * factor / L


def truncation_order(space: Space, tol: float, *, weight: WeightFunction | None = None,
                     r: float | None = None, max_order: int = 20_000_000) -> int:
    """Smallest L whose certified tail bound is below tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    L = max(32, int(math.ceil(tail_bound(space, 1, weight=weight, r=r) / tol)))
    if L > max_order:
        raise ValueError(
            f"truncation order {L} exceeds {max_order}; relax the tolerance")
    return L


@dataclass
class ExpansionCoefficients:
    """Truncated coefficient sequence kappa l^-2 M_l {a_l(r) | A_l(eta)}
    for l = 1..L, with its certified tail bound."""
    alpha: float
    beta: float
    terms: np.ndarray
    tail: float
    r: float | None = None
    weight: WeightFunction | None = None

    @property
    def order(self) -> int:
        return len(self.terms)
