"""Arithmetic of the four normed division algebras and Hermitian matrices.

Elements of R, C, H, O are stored as real coordinate arrays whose trailing
axis has length 1, 2, 4 or 8 (coefficient of 1 first, then the imaginary
units).  All operations broadcast over leading axes, so batches of octonions
or batches of Hermitian matrices are first-class.

Octonion multiplication uses Cayley-Dickson doubling of the quaternions,
(a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c)),
which needs no multiplication table and keeps the algebra identities
(|xy| = |x||y|, alternativity, conj(xy) = conj(y) conj(x)) testable.

Hermitian matrices over F are arrays of shape (..., n+1, n+1, dim(F)).
Matrix products over the octonions are not associative; they are evaluated
row-by-column with left-to-right accumulation and consumed only through the
Jordan product and the real trace inner product, which are insensitive to
that choice for Hermitian arguments.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Algebra(Enum):
    R = 1
    C = 2
    H = 4
    O = 8

    @property
    def dim(self) -> int:
        return self.value


class DegenerateSpectrumError(ValueError):
    """Raised when the cubic spectrum has (numerically) coincident eigenvalues."""


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(
            f"mixed-algebra operands: coordinate lengths {a.shape[-1]} != {b.shape[-1]}"
        )


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product in the algebra determined by the trailing axis length."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dim(a, b)
    return _cd_mul(a, b)


def _cd_mul(a, b):
    k = a.shape[-1]
    if k == 1:
        return a * b
    h = k // 2
    a1, a2 = a[..., :h], a[..., h:]
    b1, b2 = b[..., :h], b[..., h:]
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.empty(shape, dtype=float)
    out[..., :h] = _cd_mul(a1, b1) - _cd_mul(_cd_conj(b2), a2)
    out[..., h:] = _cd_mul(b2, a1) + _cd_mul(a2, _cd_conj(b1))
    return out


def conj(a: np.ndarray) -> np.ndarray:
    """Conjugation: negates every imaginary coordinate."""
    return _cd_conj(np.asarray(a, dtype=float))


def _cd_conj(a):
    out = -a
    out[..., 0] = a[..., 0]
    return out


def re(a: np.ndarray) -> np.ndarray:
    """Real part."""
    return np.asarray(a, dtype=float)[..., 0]


def norm(a: np.ndarray) -> np.ndarray:
    """Euclidean norm of the coordinate vector (= |a|)."""
    a = np.asarray(a, dtype=float)
    return np.sqrt((a * a).sum(axis=-1))


def one(algebra: Algebra) -> np.ndarray:
    e = np.zeros(algebra.dim)
    e[0] = 1.0
    return e


def unit(algebra: Algebra, i: int) -> np.ndarray:
    """Basis element e_i (e_0 = 1)."""
    if not 0 <= i < algebra.dim:
        raise ValueError(f"basis index {i} out of range for {algebra}")
    e = np.zeros(algebra.dim)
    e[i] = 1.0
    return e


# ---------------------------------------------------------------------------
# Hermitian matrices, shape (..., n, n, dim)
# ---------------------------------------------------------------------------

def identity(size: int, algebra: Algebra) -> np.ndarray:
    out = np.zeros((size, size, algebra.dim))
    for i in range(size):
        out[i, i, 0] = 1.0
    return out


def dagger(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return conj(np.swapaxes(A, -3, -2))


def is_hermitian(A: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.abs(A - dagger(A)).max() <= tol)


def mat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product, row-by-column with left-to-right accumulation."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_same_dim(A, B)
    if A.shape[-2] != B.shape[-3]:
        raise ValueError(f"matrix size mismatch: {A.shape} @ {B.shape}")
    rows, inner, cols = A.shape[-3], A.shape[-2], B.shape[-2]
    lead = np.broadcast_shapes(A.shape[:-3], B.shape[:-3])
    out = np.zeros(lead + (rows, cols, A.shape[-1]))
    for i in range(rows):
        for j in range(cols):
            acc = _cd_mul(A[..., i, 0, :], B[..., 0, j, :])
            for k in range(1, inner):
                acc = acc + _cd_mul(A[..., i, k, :], B[..., k, j, :])
            out[..., i, j, :] = acc
    return out


def jordan(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Jordan product (AB + BA) / 2; Hermitian for Hermitian arguments."""
    return 0.5 * (mat_mul(A, B) + mat_mul(B, A))


def trace(A: np.ndarray) -> np.ndarray:
    """Real trace (diagonal entries of a Hermitian matrix are real)."""
    n = A.shape[-2]
    return sum(A[..., i, i, 0] for i in range(n))


def inner(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Re Tr AB for Hermitian A, B.

    For Hermitian pairs this equals the Euclidean dot product of the raw
    coordinate arrays, which is how it is evaluated; the equivalence with the
    trace form is covered by tests.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_same_dim(A, B)
    if A.shape[-2] != B.shape[-2]:
        raise ValueError(f"matrix size mismatch: {A.shape} vs {B.shape}")
    return (A * B).sum(axis=(-3, -2, -1))


def frobenius_norm(A: np.ndarray) -> np.ndarray:
    return np.sqrt(inner(A, A))


def projector_from_vector(a: np.ndarray) -> np.ndarray:
    """Rank-one projector [a_i conj(a_j)] from a unit vector a in F^n.

    a has shape (..., n, dim).  Over the octonions the result is a valid
    projective point only for admissible vectors (coordinates generating an
    associative subalgebra); generic octonion triples are not admissible.
    """
    a = np.asarray(a, dtype=float)
    ai = a[..., :, None, :]
    aj = conj(a)[..., None, :, :]
    return mul(ai, aj)


@dataclass
class CubicSpectrum:
    """Spectral data of a 3x3 Hermitian matrix over O."""
    eigenvalues: np.ndarray   # (..., 3), descending
    idempotents: np.ndarray   # (..., 3, 3, 3, 8); [k] is the projector of eigenvalue k


def freudenthal_det(X: np.ndarray) -> np.ndarray:
    """Cubic form det X of a 3x3 Hermitian matrix:

    det X = x00 x11 x22 - x00 |X_12|^2 - x11 |X_20|^2 - x22 |X_01|^2
            + 2 Re(X_12 X_20 X_01).
    """
    d0 = X[..., 0, 0, 0]
    d1 = X[..., 1, 1, 0]
    d2 = X[..., 2, 2, 0]
    x = X[..., 1, 2, :]
    y = X[..., 2, 0, :]
    z = X[..., 0, 1, :]
    sq = lambda v: (v * v).sum(axis=-1)
    triple = mul(mul(x, y), z)[..., 0]
    return d0 * d1 * d2 - d0 * sq(x) - d1 * sq(y) - d2 * sq(z) + 2.0 * triple


def _cubic_roots(s1, s2, s3):
    """Real roots of lambda^3 - s1 lambda^2 + s2 lambda - s3, descending.

    Trigonometric method for the depressed cubic; valid because Hermitian
    input guarantees three real roots.  acos argument clamped to [-1, 1].
    """
    p = s2 - s1 * s1 / 3.0
    q = -2.0 * s1 ** 3 / 27.0 + s1 * s2 / 3.0 - s3
    m = 2.0 * np.sqrt(np.maximum(-p / 3.0, 0.0))
    safe = np.where(m > 0.0, m, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.clip(3.0 * q / (p * safe), -1.0, 1.0)
    arg = np.where(m > 0.0, arg, 0.0)
    phi = np.arccos(arg) / 3.0
    roots = np.stack(
        [m * np.cos(phi - 2.0 * np.pi * k / 3.0) + s1 / 3.0 for k in range(3)],
        axis=-1,
    )
    return -np.sort(-roots, axis=-1)


def _eigenvalues(X: np.ndarray) -> np.ndarray:
    s1 = trace(X)
    s2 = 0.5 * (s1 * s1 - trace(mat_mul(X, X)))
    s3 = freudenthal_det(X)
    return _cubic_roots(s1, s2, s3)


def _generic_seed() -> np.ndarray:
    """Fixed admissible projector used to split degenerate eigenvalue pairs."""
    a = np.zeros((3, 8))
    a[0, :2] = (1.0, 0.3)
    a[1, :2] = (0.7, -0.4)
    a[2, :2] = (0.2, 0.9)
    a /= np.sqrt((a * a).sum())
    return projector_from_vector(a)


def cubic_spectrum(X: np.ndarray, tol: float = 1e-8) -> CubicSpectrum:
    """Eigenvalues and idempotents of a single 3x3 Hermitian matrix over O.

    The eigenvalues solve the characteristic cubic built from Tr X, the
    second invariant ((Tr X)^2 - Tr X.X)/2 and the Freudenthal determinant.
    Idempotent k comes from the Jordan polynomial
    (X - mu I) o (X - nu I) / ((lam_k - mu)(lam_k - nu))
    in the complementary eigenvalues mu, nu.

    A coincident bottom pair (lam_2 = lam_3) is split inside the rank-two
    complement of the top idempotent via the Peirce projection of a fixed
    generic projector, so inputs like diag(1, 0, 0) resolve exactly.
    Raises DegenerateSpectrumError when lam_1 - lam_2 < tol * scale (the top
    idempotent is then ill-conditioned; callers resample).
    """
    X = np.asarray(X, dtype=float)
    if X.shape != (3, 3, 8):
        raise ValueError(f"expected a single 3x3 octonionic Hermitian, got {X.shape}")
    lam = _eigenvalues(X)
    scale = max(float(frobenius_norm(X)), 1.0)
    if lam[0] - lam[1] < tol * scale:
        raise DegenerateSpectrumError("near-degenerate top eigenvalue pair; resample")
    eye = identity(3, Algebra.O)
    P1 = jordan(X - lam[1] * eye, X - lam[2] * eye) / ((lam[0] - lam[1]) * (lam[0] - lam[2]))
    if lam[1] - lam[2] >= tol * scale:
        P3 = jordan(X - lam[0] * eye, X - lam[1] * eye) \
            / ((lam[2] - lam[0]) * (lam[2] - lam[1]))
        P2 = eye - P1 - P3
    else:
        P2, P3 = _split_rank_two(eye - P1, tol)
    return CubicSpectrum(eigenvalues=lam, idempotents=np.stack([P1, P2, P3]))


def _split_rank_two(F: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Split a rank-two idempotent F into orthogonal rank-one idempotents.

    Projects a fixed generic element into the Peirce one-space of F, where
    the rank-two spectral resolution is a closed form: eigenvalues from the
    trace and norm, idempotents linear in the projected element.
    """
    Z = 2.0 * jordan(F, jordan(F, _generic_seed())) - jordan(F, _generic_seed())
    T = float(trace(Z))
    disc = max(2.0 * float(inner(Z, Z)) - T * T, 0.0)
    root = math.sqrt(disc)
    if root < tol * max(abs(T), 1.0):
        raise DegenerateSpectrumError("cannot split coincident eigenvalue pair")
    mu2 = 0.5 * (T + root)
    mu3 = 0.5 * (T - root)
    Q2 = (Z - mu3 * F) / (mu2 - mu3)
    return Q2, F - Q2


def top_idempotent_batch(X: np.ndarray, tol: float = 1e-8
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Top idempotent of each matrix in a batch plus a validity mask.

    Entries whose top spectral gap falls below tol * scale are flagged False
    and must be resampled by the caller; their idempotent slot is unusable.
    """
    X = np.asarray(X, dtype=float)
    lam = _eigenvalues(X)
    scale = np.maximum(frobenius_norm(X), 1.0)
    ok = (lam[..., 0] - lam[..., 1]) >= tol * scale
    eye = identity(3, Algebra.O)
    denom = (lam[..., 0] - lam[..., 1]) * (lam[..., 0] - lam[..., 2])
    denom = np.where(ok, denom, 1.0)
    A = X - lam[..., 1, None, None, None] * eye
    B = X - lam[..., 2, None, None, None] * eye
    P1 = jordan(A, B) / denom[..., None, None, None]
    return P1, ok


def random_hermitian(rng: np.random.Generator, batch: int | None = None) -> np.ndarray:
    """Gaussian 3x3 Hermitian octonionic matrix.

    Standard normal coordinates in the orthonormal structure of the real
    trace inner product: N(0,1) on the three diagonal entries, N(0, 1/2)
    on each of the 8 coordinates of the three independent off-diagonal
    entries (an entry and its conjugate share the coordinates).
    """
    shape = (3, 3, 8) if batch is None else (batch, 3, 3, 8)
    X = np.zeros(shape)
    for i in range(3):
        X[..., i, i, 0] = rng.standard_normal(shape[:-3])
    root_half = np.sqrt(0.5)
    for i in range(3):
        for j in range(i + 1, 3):
            v = rng.standard_normal(shape[:-3] + (8,)) * root_half
            X[..., i, j, :] = v
            X[..., j, i, :] = conj(v)
    return X
