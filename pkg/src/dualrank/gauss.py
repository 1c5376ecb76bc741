"""Pointwise Gauss-map analysis of a chart.

At a sample point this computes the tangent frame, the Gauss rank r and
defect l, the system of second fundamental forms restricted to a transversal
of the leaf kernel, and (for ruled charts) the leaf operators and the
determinant polynomial whose roots are the focal points of a leaf line.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .charts import RuledChart
from .numerics import (
    DEFAULT_RANK_TOL,
    RankDecision,
    chebyshev_points,
    numerical_rank,
    nullspace_basis,
    orthonormal_columns,
    poly_from_samples,
)


class NonGenericPointError(RuntimeError):
    """Rank decisions stayed ambiguous after resampling retries."""


@dataclass(frozen=True)
class TangentFrame:
    point: np.ndarray          # unit homogeneous vector, sign-fixed
    tangent_basis: np.ndarray  # (N+1, n) orthonormal, orthogonal to point
    normal_basis: np.ndarray   # (N+1, N-n) orthonormal complement
    param_point: np.ndarray

    @property
    def n(self):
        return self.tangent_basis.shape[1]


@dataclass(frozen=True)
class SecondFundamentalSystem:
    B: list                     # N-n symmetric r x r matrices
    transversal_basis: np.ndarray  # (d, r)
    leaf_basis: np.ndarray         # (d, l) parameter-space leaf directions
    unrestricted: list             # N-n symmetric d x d matrices


@dataclass(frozen=True)
class GaussAnalysis:
    chart: object
    frame: TangentFrame
    n: int
    r: int
    l: int
    fiber_dim: int              # parametrization redundancy (0 for honest charts)
    sff: SecondFundamentalSystem
    rank_decisions: list
    jet: object

    @property
    def ambiguous(self):
        return any(d.ambiguous for d in self.rank_decisions)


@dataclass(frozen=True)
class LeafOperators:
    C: list                    # l matrices, r x r; the s=0 operator is I
    transversal_ambient: np.ndarray  # (N+1, r) orthonormal, the A_p directions
    leaf_ambient: np.ndarray         # (N+1, l) raw leaf-direction vectors A_a
    point: np.ndarray                # A_0, the raw chart value at the base
    base_jacobian: np.ndarray        # G0, projected base-direction derivatives


def _unit_point(x):
    nx = np.linalg.norm(x)
    if nx == 0:
        raise NonGenericPointError("chart value vanished at sample point")
    xhat = x / nx
    i = int(np.argmax(np.abs(xhat)))
    if xhat[i] < 0:
        xhat = -xhat
    return xhat, nx


def tangent_frame(chart, u, tol=DEFAULT_RANK_TOL, jet=None):
    """Orthonormal frame adapted to the tangent space at ``chart(u)``."""
    u = np.asarray(u, dtype=float)
    jet = jet if jet is not None else chart.jet(u, order=1)
    xhat, nx = _unit_point(jet.value)
    J = jet.jacobian / nx
    span = np.column_stack([xhat, J])
    dec = numerical_rank(span, tol, label="tangent span")
    n = dec.rank - 1
    proj = J - np.outer(xhat, xhat @ J)
    dec2 = numerical_rank(proj, tol, label="tangent modulo point") if n > 0 else None
    decisions = [dec] + ([dec2] if dec2 else [])
    if dec2 and dec2.rank != n:
        decisions[-1] = RankDecision(dec2.rank, dec2.singular_values, dec2.gap_ratio,
                                     True, dec2.label)
    tangent = orthonormal_columns(proj, n) if n > 0 else np.zeros((chart.N + 1, 0))
    normal = nullspace_basis(np.column_stack([xhat, tangent]).T, tol)
    frame = TangentFrame(xhat, tangent, normal, u)
    return frame, decisions, jet


def second_fundamental(chart, u=None, tol=DEFAULT_RANK_TOL, frame=None, jet=None,
                       decisions=None):
    """Second fundamental system and Gauss rank/defect at a point.

    Returns the unrestricted normal-projected Hessians together with the
    assembled :class:`GaussAnalysis`.  For charts with redundant parameters
    (rank of the Jacobian below the parameter count) the redundancy is
    reported as ``fiber_dim`` and removed from the Gauss defect.
    """
    if frame is None:
        jet = chart.jet(np.asarray(u, dtype=float), order=2)
        frame, decisions, _ = tangent_frame(chart, u, tol, jet=jet)
    elif jet is None or jet.hessians is None:
        jet = chart.jet(frame.param_point, order=2)
    decisions = list(decisions or [])
    n = frame.n
    d = chart.d
    nx = np.linalg.norm(jet.value)
    normals = frame.normal_basis
    unrestricted = [
        np.einsum("k,kij->ij", normals[:, a], jet.hessians) / nx
        for a in range(normals.shape[1])
    ]
    if unrestricted:
        stacked = np.vstack(unrestricted)
        scale = np.max(np.abs(stacked))
        dec = numerical_rank(stacked, tol, label="leaf kernel") if scale > 0 else None
        kernel = nullspace_basis(stacked, tol) if scale > 0 else np.eye(d)
        if dec is not None:
            decisions.append(dec)
    else:
        kernel = np.eye(d)
    k = kernel.shape[1]
    fiber = d - n
    l = k - fiber
    if l < 0 or fiber < 0:
        raise NonGenericPointError("inconsistent kernel dimension at sample point")
    r = n - l
    transversal = nullspace_basis(kernel.T, tol) if k < d else np.zeros((d, 0))
    B = [0.5 * (M + M.T) for M in
         (transversal.T @ M @ transversal for M in unrestricted)]
    sff = SecondFundamentalSystem(B, transversal, kernel, unrestricted)
    analysis = GaussAnalysis(chart, frame, n, r, l, fiber, sff, decisions, jet)
    return unrestricted, analysis


def analyze(chart, u, tol=DEFAULT_RANK_TOL):
    return second_fundamental(chart, u, tol)[1]


def sample_point(chart, rng, min_norm=1e-8, tries=50):
    lo, hi = chart.sample_domain()
    for _ in range(tries):
        u = rng.uniform(lo, hi)
        if np.linalg.norm(chart.value(u)) >= min_norm:
            return u
    raise NonGenericPointError("could not sample a point with nonzero value")


def analyze_generic(chart, rng, tol=DEFAULT_RANK_TOL, retries=5):
    """Analysis at a generic point, resampling while rank decisions are ambiguous."""
    last = None
    for _ in range(retries):
        u = sample_point(chart, rng)
        try:
            analysis = analyze(chart, u, tol)
        except NonGenericPointError:
            continue
        if not analysis.ambiguous:
            return analysis
        last = analysis
    if last is not None:
        return last
    raise NonGenericPointError(f"no generic point found on {chart.name}")


# ---------------------------------------------------------------------------
# ruled charts: leaf operators and focus polynomials

def leaf_operators(chart, analysis, tol=DEFAULT_RANK_TOL):
    """Extract the leaf operators C_a of a ruled chart at a base point.

    The transversal tangent directions are orthonormalized against the point
    and the ambient leaf span; the projected base-direction Jacobian G0 there
    normalizes the s = 0 operator to the identity.
    """
    if not isinstance(chart, RuledChart):
        raise TypeError("leaf operators need a ruled chart")
    jet = analysis.jet
    frame = analysis.frame
    r = analysis.r
    base_idx = chart.base_index
    leaf_idx = chart.leaf_index
    if len(base_idx) != r:
        raise NonGenericPointError(
            f"ruled split ({len(base_idx)} base) disagrees with measured rank {r}")
    x0 = jet.value
    Z = jet.jacobian[:, leaf_idx]                      # ambient leaf directions A_a
    # transversal ambient directions: tangent space minus span{x0, Z}
    T_all = np.column_stack([frame.point, frame.tangent_basis])
    drop = np.column_stack([x0, Z])
    drop_on = orthonormal_columns(drop, numerical_rank(drop, tol).rank)
    proj = T_all - drop_on @ (drop_on.T @ T_all)
    E = orthonormal_columns(proj, r)
    G0 = E.T @ jet.jacobian[:, base_idx]
    dec = numerical_rank(G0, tol, label="leaf-point Jacobi matrix")
    if dec.rank < r:
        raise NonGenericPointError("base point is singular on its leaf")
    G0inv = np.linalg.inv(G0)
    C = []
    for a in leaf_idx:
        Zp = jet.hessians[:, :, a][:, base_idx]       # d/du of leaf direction a
        C.append((E.T @ Zp) @ G0inv)
    return LeafOperators(C, E, Z, x0, G0)


def leaf_frame_forms(chart, analysis, ops):
    """Second-fundamental matrices expressed in the leaf-operator frame.

    In the transversal frame that normalizes the base-point Jacobi matrix to
    the identity, each normal-projected base-direction Hessian block W^a
    becomes B^a = G0^{-T} W^a G0^{-1}.  In this common frame the products
    B^a C_b are symmetric for every normal direction and leaf operator.
    """
    jet = analysis.jet
    base_idx = chart.base_index
    nx = np.linalg.norm(jet.value)
    G0inv = np.linalg.inv(ops.base_jacobian)
    normals = analysis.frame.normal_basis
    forms = []
    for a in range(normals.shape[1]):
        W = np.einsum("k,kij->ij", normals[:, a], jet.hessians)[
            np.ix_(base_idx, base_idx)] / nx
        forms.append(G0inv.T @ W @ G0inv)
    return forms


def form_operator_asymmetry(forms, ops):
    """Worst relative asymmetry of the products B^a C_b (0 when compatible)."""
    worst = 0.0
    for B in forms:
        for C in ops.C:
            scale = np.linalg.norm(B) * np.linalg.norm(C)
            if scale == 0:
                continue
            H = B @ C
            worst = max(worst, np.linalg.norm(H - H.T) / scale)
    return worst


@dataclass(frozen=True)
class LeafLine:
    """Line x(s) = (1 + s w0) A_0 + s sum_a w_a A_a inside a leaf."""

    w0: float
    w: np.ndarray

    @staticmethod
    def from_vector(vec, leaf_dim):
        vec = np.asarray(vec, dtype=float)
        if vec.shape[0] == leaf_dim:
            return LeafLine(0.0, vec)
        if vec.shape[0] == leaf_dim + 1:
            return LeafLine(float(vec[0]), vec[1:])
        raise ValueError("leaf direction must have l or l+1 components")


def focus_polynomial(chart, analysis, ops, line=None, interval=(-3.0, 3.0)):
    """Interpolated determinant of the Jacobi matrix along a leaf line.

    The polynomial has degree at most r; its real roots are the focal
    (singular) points of the line.
    """
    if line is None:
        line = LeafLine(0.0, np.eye(chart.leaf_dim)[:, 0])
    r = analysis.r
    samples = chebyshev_points(interval[0], interval[1], r + 1)
    dets = np.empty(r + 1)
    eye = np.eye(r)
    for i, s in enumerate(samples):
        J = (1.0 + s * line.w0) * eye
        for a in range(chart.leaf_dim):
            J = J + s * line.w[a] * ops.C[a]
        dets[i] = np.linalg.det(J)
    return poly_from_samples(samples, dets, r)


def scan_foci(chart, analysis, line=None, interval=(-3.0, 3.0), npoints=200,
              drop_tol=1e-6):
    """Independent focal-point locator: SVD rank-drop scan along a leaf line.

    Builds the tangent span at each point of the line directly from the
    chart's first and mixed second derivatives at the base point (exact for
    ruled charts, where leaf dependence is affine) and refines the minima of
    the decisive singular value.  ``drop_tol`` is relative to the largest
    scanned value; at a simple focus the dip is V-shaped and the bounded
    minimizer cannot place its abscissa closer than ~sqrt(eps)*|s|, which
    leaves a residual floor near 1e-8 even though the located root itself is
    accurate to that resolution.
    """
    if line is None:
        line = LeafLine(0.0, np.eye(chart.leaf_dim)[:, 0])
    jet = analysis.jet
    base_idx = chart.base_index
    leaf_idx = chart.leaf_index
    u = analysis.frame.param_point
    s0 = u[leaf_idx]
    x0 = jet.value
    Z = jet.jacobian[:, leaf_idx]
    Zp = [jet.hessians[:, :, a][:, base_idx] for a in leaf_idx]  # (N+1, r) each
    Jbase = jet.jacobian[:, base_idx]
    Yp = Jbase - sum(s0[a] * Zp[a] for a in range(len(leaf_idx)))

    n = analysis.n

    def span_sv(s):
        # tangent span of the variety at the line point, scaled polynomially in s
        lam = 1.0 + s * line.w0
        x = lam * x0 + s * (Z @ line.w)
        base_block = lam * Yp + sum(
            (s0[a] * lam + s * line.w[a]) * Zp[a] for a in range(len(leaf_idx))
        )
        M = np.column_stack([x, Z, base_block])
        # single global scale: a per-column one would re-inflate a column
        # that vanishes at a focus and erase the rank drop
        M = M / max(np.max(np.linalg.norm(M, axis=0)), 1e-300)
        sv = np.linalg.svd(M, compute_uv=False)
        return sv[n] if sv.size > n else 0.0

    grid = np.linspace(interval[0], interval[1], npoints)
    vals = np.array([span_sv(s) for s in grid])
    ref = np.max(vals)
    roots = []
    for i in range(npoints):
        left = max(i - 1, 0)
        right = min(i + 1, npoints - 1)
        if vals[i] <= vals[left] and vals[i] <= vals[right] and vals[i] < 0.2 * ref:
            res = minimize_scalar(span_sv, bounds=(grid[left], grid[right]),
                                  method="bounded",
                                  options={"xatol": 1e-10})
            if res.fun < drop_tol * ref:
                roots.append(float(res.x))
    roots.sort()
    merged = []
    for s in roots:
        if merged and s - merged[-1] <= 1e-7:
            continue
        merged.append(s)
    return merged
