"""Rank decisions, nullspaces, interpolation and root finding."""

import numpy as np
import pytest

from dualrank import analyze_generic, resolve
from dualrank.duality import DualChart
from dualrank.numerics import (
    DegenerateLeafError,
    InputError,
    Poly1,
    chebyshev_points,
    numerical_rank,
    nullspace_basis,
    poly_from_samples,
    principal_angles,
    real_roots,
)


def test_rank_tolerance_cutoff():
    dec = numerical_rank(np.diag([1.0, 1e-12]), 1e-8)
    assert dec.rank == 1
    assert not dec.ambiguous


def test_rank_zero_matrix():
    dec = numerical_rank(np.zeros((3, 3)), 1e-8)
    assert dec.rank == 0
    assert dec.gap_ratio == np.inf
    assert not dec.ambiguous


def test_rank_flags_small_gap_as_ambiguous():
    dec = numerical_rank(np.diag([1.0, 2e-8, 1e-8]), 1e-8)
    assert dec.ambiguous
    assert dec.gap_ratio < 1e4


def test_rank_rejects_bad_input():
    with pytest.raises(InputError):
        numerical_rank(np.array([[1.0, np.nan]]), 1e-8)
    with pytest.raises(InputError):
        numerical_rank(np.eye(2), 2.0)


def test_rank_of_dual_segre_chart():
    # the homogeneous cone over the 3-dimensional dual of Segre(1,2) has
    # Jacobian rank 4 at a generic sample
    rng = np.random.default_rng(0)
    chart = resolve("segre:1,2")
    analysis = analyze_generic(chart, rng)
    dc = DualChart(chart, analysis.frame.param_point, n=analysis.n)
    p = np.concatenate([analysis.frame.param_point,
                        rng.uniform(-0.5, 0.5, dc.fiber_dim)])
    jet = dc.jet(p, order=1)
    span = np.column_stack([jet.value, jet.jacobian])
    assert numerical_rank(span, 1e-8).rank == 4


def test_nullspace_trivial_cases():
    V = nullspace_basis(np.array([[1.0, 0.0, 0.0]]), 1e-8)
    assert V.shape == (3, 2)
    assert np.allclose(V.T @ V, np.eye(2))
    assert np.max(np.abs(np.array([[1.0, 0.0, 0.0]]) @ V)) <= 1e-12
    assert nullspace_basis(np.eye(4), 1e-8).shape == (4, 0)


def test_nullspace_residual_bound():
    rng = np.random.default_rng(7)
    for _ in range(10):
        M = rng.standard_normal((4, 7))
        M[2] = M[0] + M[1]  # force some rank deficiency in the rows
        V = nullspace_basis(M, 1e-8)
        smax = np.linalg.svd(M, compute_uv=False)[0]
        assert V.shape[1] == 7 - numerical_rank(M, 1e-8).rank
        assert np.max(np.linalg.norm(M @ V, axis=0)) <= 10 * 1e-8 * smax


def test_tangent_pencil_of_twisted_cubic():
    # rows: point and velocity of (1, t, t^2, t^3) at t=1; the annihilator is
    # the 2-parameter pencil of hyperplanes through the tangent line
    point = np.array([1.0, 1.0, 1.0, 1.0])
    vel = np.array([0.0, 1.0, 2.0, 3.0])
    V = nullspace_basis(np.vstack([point, vel]), 1e-8)
    assert V.shape == (4, 2)
    assert np.max(np.abs(np.vstack([point, vel]) @ V)) <= 1e-12


def test_rank_invariance_under_orthogonal_maps():
    rng = np.random.default_rng(11)
    M = rng.standard_normal((5, 6))
    M[:, 5] = M[:, 0]
    base = numerical_rank(M, 1e-8)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    perm = rng.permutation(6)
    for M2 in (Q @ M, M[:, perm], M[::-1]):
        dec = numerical_rank(M2, 1e-8)
        assert dec.rank == base.rank
        assert dec.singular_values == pytest.approx(
            base.singular_values, rel=1e-10)


def test_interpolation_trivial():
    p = poly_from_samples([0.0, 1.0], [0.0, 1.0], 1)
    assert p.coefficients == pytest.approx([0.0, 1.0])
    q = poly_from_samples([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0], 2)
    assert q.coefficients == pytest.approx([0.0, 0.0, 1.0], abs=1e-14)


def test_interpolation_roundtrip():
    rng = np.random.default_rng(2)
    xs = chebyshev_points(-1.0, 1.0, 7)
    ys = rng.standard_normal(7)
    p = poly_from_samples(xs, ys, 6)
    assert p(xs) == pytest.approx(ys, rel=1e-9, abs=1e-9)


def test_interpolation_rejects_duplicates():
    with pytest.raises(InputError):
        poly_from_samples([0.0, 0.0, 1.0], [1.0, 1.0, 2.0], 2)


def test_real_roots_trivial():
    roots = real_roots(Poly1([0.0, 1.0], 1), (-1.0, 1.0))
    assert len(roots) == 1
    assert roots[0].location == pytest.approx(0.0, abs=1e-12)
    assert roots[0].multiplicity == 1
    roots = real_roots(Poly1([-1.0, 0.0, 1.0], 2), (-2.0, 2.0))
    assert [r.location for r in roots] == pytest.approx([-1.0, 1.0])


def test_real_roots_window_and_multiplicity():
    # (s - 0.5)^2 (s - 5): the double root is inside, the simple one outside
    c = np.polynomial.polynomial.polyfromroots([0.5, 0.5, 5.0])
    roots = real_roots(Poly1(c, 3), (-1.0, 1.0))
    assert len(roots) == 1
    assert roots[0].location == pytest.approx(0.5, abs=1e-6)
    assert roots[0].multiplicity == 2


def test_zero_polynomial_signals_degenerate_leaf():
    with pytest.raises(DegenerateLeafError):
        real_roots(Poly1([0.0, 0.0], 1), (-1.0, 1.0))


def test_principal_angles():
    U = np.eye(4)[:, :2]
    V = np.eye(4)[:, 1:3]
    ang = principal_angles(U, V)
    assert ang == pytest.approx([0.0, np.pi / 2], abs=1e-12)
