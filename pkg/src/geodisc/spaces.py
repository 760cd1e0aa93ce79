"""Catalog of compact two-point homogeneous spaces and their geometry.

A space is determined by the pair (d, d0): the sphere S^d has d0 = d, the
projective spaces over R, C, H, O have d = n * d0 with d0 = 1, 2, 4, 8.
Points are unit vectors in R^(d+1) for spheres and rank-one trace-one
Hermitian projectors for projective spaces.  The geodesic metric is
normalized to diameter pi and the invariant measure to total mass one, so
the volume of a ball of radius r is the regularized incomplete beta
function I_{sin^2(r/2)}(d/2, d0/2).
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import betainc, gammaln

from . import algebra
from .algebra import Algebra

_CLIP = 1e-12  # slack for acos arguments produced by dot products


class Family(Enum):
    SPHERE = "sphere"
    REAL_PROJ = "real_proj"
    COMPLEX_PROJ = "complex_proj"
    QUAT_PROJ = "quat_proj"
    OCT_PROJ = "oct_proj"


_FAMILY_ALGEBRA = {
    Family.REAL_PROJ: Algebra.R,
    Family.COMPLEX_PROJ: Algebra.C,
    Family.QUAT_PROJ: Algebra.H,
    Family.OCT_PROJ: Algebra.O,
}


@dataclass(frozen=True)
class Space:
    family: Family
    n: int
    d: int
    d0: int
    alpha: float
    beta: float

    @property
    def is_sphere(self) -> bool:
        return self.family is Family.SPHERE

    @property
    def algebra(self) -> Algebra | None:
        return _FAMILY_ALGEBRA.get(self.family)

    @property
    def kappa(self) -> float:
        """1 / B(d/2, d0/2), the normalizing constant of the volume density."""
        return math.exp(
            gammaln(0.5 * (self.d + self.d0))
            - gammaln(0.5 * self.d) - gammaln(0.5 * self.d0)
        )

    def label(self) -> str:
        if self.is_sphere:
            return f"S{self.d}"
        prefix = {Family.REAL_PROJ: "RP", Family.COMPLEX_PROJ: "CP",
                  Family.QUAT_PROJ: "HP", Family.OCT_PROJ: "OP"}[self.family]
        return f"{prefix}{self.n}"


def make_space(family: Family | str, n: int) -> Space:
    """Build the space descriptor; n is the dimension d for spheres."""
    if isinstance(family, str):
        family = Family(family)
    if n < 1:
        raise ValueError("n must be >= 1")
    if family is Family.OCT_PROJ and n != 2:
        raise ValueError("octonionic projective spaces exist only for n = 2")
    if family is Family.SPHERE:
        d = d0 = n
    else:
        d0 = _FAMILY_ALGEBRA[family].dim
        d = n * d0
    return Space(family=family, n=n, d=d, d0=d0,
                 alpha=0.5 * d - 1.0, beta=0.5 * d0 - 1.0)


def parse_space(text: str) -> Space:
    """Parse labels like 'S2', 'RP3', 'CP2', 'HP2', 'OP2' or 'sphere:2'."""
    text = text.strip()
    if ":" in text:
        fam, n = text.split(":", 1)
        return make_space(fam, int(n))
    prefixes = [("RP", Family.REAL_PROJ), ("CP", Family.COMPLEX_PROJ),
                ("HP", Family.QUAT_PROJ), ("OP", Family.OCT_PROJ),
                ("S", Family.SPHERE)]
    for prefix, fam in prefixes:
        if text.upper().startswith(prefix) and text[len(prefix):].isdigit():
            return make_space(fam, int(text[len(prefix):]))
    raise ValueError(f"cannot parse space label {text!r}")


@dataclass(frozen=True)
class Point:
    space: Space
    rep: np.ndarray  # (d+1,) unit vector, or (n+1, n+1, dim) projector


@dataclass
class PointSet:
    """Ordered list of points sharing a space; duplicates are allowed."""
    space: Space
    coords: np.ndarray = field(repr=False)  # (N, d+1) or (N, n+1, n+1, dim)

    def __len__(self) -> int:
        return self.coords.shape[0]

    def point(self, i: int) -> Point:
        return Point(self.space, self.coords[i])

    @staticmethod
    def from_points(points: list[Point]) -> "PointSet":
        if not points:
            raise ValueError("empty point list")
        space = points[0].space
        for p in points:
            if p.space != space:
                raise ValueError("points from different spaces")
        return PointSet(space, np.stack([p.rep for p in points]))


def _check_same_space(x: Point, y: Point) -> None:
    if x.space != y.space:
        raise ValueError("points belong to different spaces")


def _flatten(coords: np.ndarray) -> np.ndarray:
    return coords.reshape(coords.shape[0], -1)


def cos_geodesic_matrix(pset: PointSet) -> np.ndarray:
    """cos theta(x_i, x_j) as an (N, N) matrix.

    For every space the cosine is an affine function of the Euclidean inner
    product of the raw coordinate vectors (cos theta = x.y on spheres,
    cos theta = 2 <P1, P2> - 1 on projective spaces), so this is one GEMM.
    """
    F = _flatten(pset.coords)
    G = F @ F.T
    if pset.space.is_sphere:
        return np.clip(G, -1.0, 1.0)
    return np.clip(2.0 * G - 1.0, -1.0, 1.0)


def cos_geodesic_to(pset: PointSet, coords: np.ndarray) -> np.ndarray:
    """cos theta between each point of pset and each row of coords."""
    F = _flatten(pset.coords)
    C = coords.reshape(coords.shape[0], -1) if coords.ndim > 1 else coords.reshape(1, -1)
    G = F @ C.T
    if pset.space.is_sphere:
        return np.clip(G, -1.0, 1.0)
    return np.clip(2.0 * G - 1.0, -1.0, 1.0)


def pairwise_cos_upper(pset: PointSet) -> np.ndarray:
    """cos theta(x_i, x_j) for i < j, flattened (each unordered pair once)."""
    M = cos_geodesic_matrix(pset)
    iu = np.triu_indices(len(pset), k=1)
    return M[iu]


def geodesic_distance(x: Point, y: Point) -> float:
    """Geodesic distance in [0, pi]."""
    _check_same_space(x, y)
    if x.space.is_sphere:
        c = float(np.dot(x.rep, y.rep))
        return math.acos(_clamp(c, -1.0, 1.0))
    inn = float(algebra.inner(x.rep, y.rep))
    return 2.0 * math.acos(math.sqrt(_clamp(inn, 0.0, 1.0)))


def chordal_distance(x: Point, y: Point) -> float:
    """Chordal distance sin(theta/2) in [0, 1]."""
    _check_same_space(x, y)
    if x.space.is_sphere:
        return 0.5 * float(np.linalg.norm(x.rep - y.rep))
    inn = float(algebra.inner(x.rep, y.rep))
    return math.sqrt(_clamp(1.0 - inn, 0.0, 1.0))


def _clamp(v: float, lo: float, hi: float) -> float:
    # dot products overshoot the acos domain by a few ulp; anything larger
    # than _CLIP would indicate an invalid point, which validation catches
    return min(max(v, lo), hi)


def geodesic_point(space: Space, u: float) -> Point:
    """Point Z(u) on the reference closed geodesic, theta(Z(u), Z(0)) = 2|u|.

    For projective spaces this is the rotating rank-one block
    [[cos^2 u, sin u cos u], [sin u cos u, sin^2 u]] padded with zeros; for
    spheres the unit vector (cos 2u, sin 2u, 0, ...).
    """
    if space.is_sphere:
        v = np.zeros(space.d + 1)
        v[0] = math.cos(2.0 * u)
        v[1] = math.sin(2.0 * u)
        return Point(space, v)
    alg = space.algebra
    m = space.n + 1
    P = np.zeros((m, m, alg.dim))
    c, s = math.cos(u), math.sin(u)
    P[0, 0, 0] = c * c
    P[0, 1, 0] = s * c
    P[1, 0, 0] = s * c
    P[1, 1, 0] = s * s
    return Point(space, P)


def antipodal_pair(space: Space) -> tuple[Point, Point]:
    """A pair at distance pi: poles on spheres, the half-sum blocks otherwise."""
    if space.is_sphere:
        v = np.zeros(space.d + 1)
        v[0] = 1.0
        return Point(space, v), Point(space, -v)
    alg = space.algebra
    m = space.n + 1
    plus = np.zeros((m, m, alg.dim))
    minus = np.zeros((m, m, alg.dim))
    for (i, j) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        plus[i, j, 0] = 0.5
        minus[i, j, 0] = 0.5 if i == j else -0.5
    return Point(space, plus), Point(space, minus)


def ball_volume(space: Space, r) -> np.ndarray | float:
    """Volume of the geodesic ball of radius r; r > pi gives the whole space."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("radius must be nonnegative")
    x = np.sin(0.5 * np.minimum(r_arr, math.pi)) ** 2
    v = betainc(0.5 * space.d, 0.5 * space.d0, x)
    v = np.where(r_arr >= math.pi, 1.0, v)
    return float(v) if np.isscalar(r) or r_arr.ndim == 0 else v


from functools import lru_cache


@lru_cache(maxsize=8)
def _leggauss(m: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(m)


def ball_volume_quadrature(space: Space, r: float, m: int = 240) -> float:
    """Direct numerical integration of the volume density (test oracle)."""
    x, w = _leggauss(m)
    top = min(r, math.pi)
    u = 0.5 * top * (x + 1.0)
    f = np.sin(0.5 * u) ** (space.d - 1) * np.cos(0.5 * u) ** (space.d0 - 1)
    return float(space.kappa * 0.5 * top * np.dot(w, f))


# ---------------------------------------------------------------------------
# Uniform sampling
# ---------------------------------------------------------------------------

def sample_points(space: Space, count: int, rng: np.random.Generator) -> PointSet:
    """Draw count independent points from the invariant measure.

    Spheres and the associative projective families use normalized Gaussian
    vectors (projectors [a_i conj(a_j)]); the octonionic plane uses the top
    idempotent of a Gaussian Hermitian matrix, whose law is invariant under
    the isometry group and hence uniform.
    """
    if space.is_sphere:
        v = rng.standard_normal((count, space.d + 1))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return PointSet(space, v)
    if space.family is Family.OCT_PROJ:
        return PointSet(space, _sample_oct_projectors(count, rng))
    dim = space.algebra.dim
    a = rng.standard_normal((count, space.n + 1, dim))
    a /= np.sqrt((a * a).sum(axis=(1, 2)))[:, None, None]
    return PointSet(space, algebra.projector_from_vector(a))


def _sample_oct_projectors(count: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty((count, 3, 3, 8))
    filled = 0
    while filled < count:
        X = algebra.random_hermitian(rng, batch=count - filled)
        P1, ok = algebra.top_idempotent_batch(X)
        good = int(ok.sum())
        out[filled:filled + good] = P1[ok]
        filled += good
    return out


def sample_uniform(space: Space, seed_or_rng) -> Point:
    """One uniform point; accepts a seed or a Generator."""
    rng = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) \
        else np.random.default_rng(seed_or_rng)
    return sample_points(space, 1, rng).point(0)


def ks_distance_statistic(space: Space, thetas: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance between observed geodesic distances to a
    fixed point and the radial volume law v_r."""
    t = np.sort(np.asarray(thetas, dtype=float))
    n = len(t)
    F = ball_volume(space, t)
    up = np.abs(np.arange(1, n + 1) / n - F).max()
    lo = np.abs(np.arange(0, n) / n - F).max()
    return float(max(up, lo))


# ---------------------------------------------------------------------------
# CSV point-set files: one point per line, `# space=<family>,n=<n>` header
# ---------------------------------------------------------------------------

def save_point_set(pset: PointSet, path) -> None:
    header = f"# space={pset.space.family.value},n={pset.space.n}"
    F = _flatten(pset.coords)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in F:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def load_point_set(path) -> PointSet:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# space="):
            raise ValueError(f"{path}: missing point-set header")
        body = header[2:]
        fields = dict(kv.split("=", 1) for kv in body.split(","))
        space = make_space(fields["space"], int(fields["n"]))
        rows = [
            [float(v) for v in line.split(",")]
            for line in fh
            if line.strip() and not line.startswith("#")
        ]
    raw = np.asarray(rows, dtype=float)
    if space.is_sphere:
        if raw.shape[1] != space.d + 1:
            raise ValueError(f"{path}: expected {space.d + 1} columns")
        return PointSet(space, raw)
    m = space.n + 1
    dim = space.algebra.dim
    if raw.shape[1] != m * m * dim:
        raise ValueError(f"{path}: expected {m * m * dim} columns")
    return PointSet(space, raw.reshape(-1, m, m, dim))


def catalog() -> list[Space]:
    """The spaces exercised throughout the test-suite and CLI defaults."""
    return [
        make_space(Family.SPHERE, 2),
        make_space(Family.SPHERE, 4),
        make_space(Family.REAL_PROJ, 2),
        make_space(Family.COMPLEX_PROJ, 2),
        make_space(Family.QUAT_PROJ, 2),
        make_space(Family.OCT_PROJ, 2),
    ]
