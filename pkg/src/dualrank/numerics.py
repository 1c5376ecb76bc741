"""Deterministic numerical kernels: SVD ranks, nullspaces, 1-d polynomials."""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_RANK_TOL = 1e-8
# singular-value gap below this ratio makes a rank decision ambiguous
GAP_CONFIDENCE = 1e4
ROOT_CLUSTER_TOL = 1e-6


class InputError(ValueError):
    """Bad numerical input (non-finite entries, duplicate abscissae...)."""


class DegenerateLeafError(ValueError):
    """Identically-zero determinant polynomial: every point is singular."""


@dataclass(frozen=True)
class RankDecision:
    rank: int
    singular_values: np.ndarray
    gap_ratio: float
    ambiguous: bool
    label: str = ""

    def to_dict(self):
        return {
            "label": self.label,
            "rank": self.rank,
            "singular_values": [float(s) for s in self.singular_values],
            "gap_ratio": float(self.gap_ratio),
            "ambiguous": self.ambiguous,
        }


def _check_matrix(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def numerical_rank(M, tol=DEFAULT_RANK_TOL, label=""):
    """Rank as the number of singular values above ``tol * sigma_max``."""
    M = _check_matrix(M)
    if not 0.0 < tol < 1.0:
        raise InputError(f"tol must lie in (0, 1), got {tol}")
    s = np.linalg.svd(M, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return RankDecision(0, s, np.inf, False, label)
    rank = int(np.sum(s > tol * smax))
    if rank < s.size and s[rank] > 0.0:
        gap = float(s[rank - 1] / s[rank])
    else:
        gap = np.inf
    ambiguous = gap < GAP_CONFIDENCE and rank < min(M.shape)
    return RankDecision(rank, s, gap, ambiguous, label)


def _fix_column_signs(V):
    # largest-magnitude entry of each column made positive, for determinism
    V = V.copy()
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        if V[i, j] < 0:
            V[:, j] = -V[:, j]
    return V


def nullspace_basis(M, tol=DEFAULT_RANK_TOL):
    """Orthonormal columns spanning the (numerical) kernel of M."""
    M = _check_matrix(M)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return _fix_column_signs(Vh[rank:].T)


def orthonormal_columns(M, rank):
    """First ``rank`` left singular vectors, sign-fixed."""
    M = _check_matrix(M)
    U, _, _ = np.linalg.svd(M, full_matrices=False)
    return _fix_column_signs(U[:, :rank])


@dataclass(frozen=True)
class Poly1:
    """Univariate real polynomial, ascending coefficients."""

    coefficients: np.ndarray
    degree_bound: int

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", c)
        if c.shape[0] != self.degree_bound + 1:
            raise InputError("coefficient count must be degree_bound + 1")

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def chebyshev_points(a, b, count):
    k = np.arange(count)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * count))
    return 0.5 * (a + b) + 0.5 * (b - a) * nodes[::-1]


def poly_from_samples(xs, ys, degree_bound):
    """Interpolating polynomial through (xs, ys) via a Vandermonde solve."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape[0] != degree_bound + 1 or ys.shape[0] != degree_bound + 1:
        raise InputError("need degree_bound + 1 samples")
    if np.min(np.abs(np.subtract.outer(xs, xs) + np.eye(len(xs)))) == 0.0:
        raise InputError("duplicate abscissae")
    V = np.vander(xs, degree_bound + 1, increasing=True)
    return Poly1(np.linalg.solve(V, ys), degree_bound)


@dataclass(frozen=True)
class RootCluster:
    location: float
    multiplicity: int


def real_roots(p, interval, zero_floor=0.0, cluster_tol=ROOT_CLUSTER_TOL):
    """Real roots of ``p`` inside ``interval``, via the companion matrix.

    Nearby roots (within ``cluster_tol``) are merged; the cluster size is the
    reported multiplicity.  An identically-zero polynomial (all coefficients
    at or below ``zero_floor``) raises ``DegenerateLeafError``.
    """
    c = np.asarray(p.coefficients, dtype=float)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale <= zero_floor:
        raise DegenerateLeafError("polynomial is identically zero at tolerance")
    # trim numerically-zero leading coefficients before forming the companion
    keep = np.nonzero(np.abs(c) > 1e-13 * scale)[0]
    if keep.size == 0:
        raise DegenerateLeafError("polynomial is identically zero at tolerance")
    c = c[: keep[-1] + 1]
    a, b = interval
    if c.shape[0] == 1:
        return []
    roots = np.polynomial.polynomial.polyroots(c)
    pad = 1e-9 * max(1.0, abs(a), abs(b))
    real = sorted(
        float(r.real)
        for r in roots
        if abs(r.imag) <= cluster_tol and a - pad <= r.real <= b + pad
    )
    clusters = []
    for r in real:
        if clusters and r - clusters[-1][-1] <= cluster_tol:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    return [RootCluster(float(np.mean(c)), len(c)) for c in clusters]


def principal_angles(U, V):
    """Principal angles (radians, ascending) between column spans."""
    Uo, _ = np.linalg.qr(np.atleast_2d(U))
    Vo, _ = np.linalg.qr(np.atleast_2d(V))
    s = np.linalg.svd(Uo.T @ Vo, compute_uv=False)
    return np.arccos(np.clip(s, -1.0, 1.0))
