"""Tangent frames, Gauss rank/defect, leaf operators and focal points."""

import numpy as np
import pytest

from dualrank import (
    LeafLine,
    analyze,
    analyze_generic,
    focus_polynomial,
    form_operator_asymmetry,
    leaf_frame_forms,
    leaf_operators,
    resolve,
    scan_foci,
)
from dualrank.charts import CATALOGUE_SPECS, RuledChart
from dualrank.gauss import tangent_frame
from dualrank.numerics import principal_angles, real_roots

RULED_SPECS = [s for s in CATALOGUE_SPECS if isinstance(resolve(s), RuledChart)]


def test_frame_orthonormality():
    chart = resolve("segre:1,2")
    frame, _, _ = tangent_frame(chart, np.array([0.3, -0.2, 0.5]))
    F = np.column_stack([frame.point, frame.tangent_basis, frame.normal_basis])
    assert F.shape == (6, 6)
    assert np.allclose(F.T @ F, np.eye(6), atol=1e-12)


def test_twisted_cubic_tangent_at_origin():
    chart = resolve("twisted_cubic")
    frame, _, _ = tangent_frame(chart, np.array([0.0]))
    assert frame.n == 1
    # tangent line is the rotated span of (1,0,0,0), (0,1,0,0)
    expected = chart.Q @ np.eye(4)[:, :2]
    span = np.column_stack([frame.point, frame.tangent_basis])
    assert np.max(principal_angles(expected, span)) <= 1e-6


@pytest.mark.parametrize("spec,nrl", [
    ("segre:1,1", (2, 2, 0)),
    ("segre:1,2", (3, 3, 0)),
    ("torse:twisted_cubic,l=1", (2, 1, 1)),
    ("cone:veronese,N=6", (3, 2, 1)),
    ("join:conic,conic,N=5", (3, 2, 1)),
])
def test_rank_and_defect(spec, nrl):
    rng = np.random.default_rng(4)
    analysis = analyze_generic(resolve(spec), rng)
    assert (analysis.n, analysis.r, analysis.l) == nrl


@pytest.mark.parametrize("spec", CATALOGUE_SPECS)
def test_leaf_directions_annihilate_all_forms(spec):
    chart = resolve(spec)
    rng = np.random.default_rng(19)
    analysis = analyze_generic(chart, rng)
    kernel = analysis.sff.leaf_basis
    for M in analysis.sff.unrestricted:
        resid = np.linalg.norm(M @ kernel)
        assert resid <= 1e-8 * max(np.linalg.norm(M), 1e-12)


@pytest.mark.parametrize("spec", RULED_SPECS)
def test_measured_leaves_match_declared_split(spec):
    chart = resolve(spec)
    rng = np.random.default_rng(23)
    analysis = analyze_generic(chart, rng)
    declared = np.eye(chart.d)[:, chart.leaf_index]
    measured = analysis.sff.leaf_basis
    assert measured.shape[1] == len(chart.leaf_index)
    assert np.max(principal_angles(declared, measured)) <= 1e-6


@pytest.mark.parametrize("spec", RULED_SPECS)
def test_tangent_space_constant_along_leaves(spec):
    chart = resolve(spec)
    rng = np.random.default_rng(29)
    analysis = analyze_generic(chart, rng)
    u0 = analysis.frame.param_point
    frame0 = analysis.frame
    span0 = np.column_stack([frame0.point, frame0.tangent_basis])
    ops = leaf_operators(chart, analysis)
    poly = focus_polynomial(chart, analysis, ops)
    foci = [c.location for c in real_roots(poly, (-0.6, 0.6))]
    checked = 0
    for s in rng.uniform(-0.6, 0.6, size=20):
        if any(abs(s - f) < 0.1 for f in foci):
            continue
        u = u0.copy()
        u[chart.leaf_index[0]] += s
        frame, _, _ = tangent_frame(chart, u)
        if frame.n != frame0.n:
            continue
        span = np.column_stack([frame.point, frame.tangent_basis])
        assert np.max(principal_angles(span0, span)) <= 1e-6
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize("spec", RULED_SPECS)
def test_form_operator_products_symmetric(spec):
    # the compatibility relation between second-fundamental matrices and
    # leaf operators, in the common transversal frame
    chart = resolve(spec)
    rng = np.random.default_rng(37)
    for _ in range(5):
        analysis = analyze_generic(chart, rng)
        ops = leaf_operators(chart, analysis)
        forms = leaf_frame_forms(chart, analysis, ops)
        assert form_operator_asymmetry(forms, ops) <= 1e-8


def test_leaf_operator_normalization():
    # at the base point (s = 0 offset) the Jacobi matrix is the identity
    chart = resolve("join:conic,conic,N=5")
    rng = np.random.default_rng(3)
    analysis = analyze_generic(chart, rng)
    ops = leaf_operators(chart, analysis)
    poly = focus_polynomial(chart, analysis, ops)
    assert poly(0.0) == pytest.approx(1.0, abs=1e-10)


def test_torse_focus_at_contact_point():
    # along the tangent generator the single focus is the curve point itself,
    # reached at offset -s0 from the sampled leaf coordinate
    chart = resolve("torse:twisted_cubic,l=1")
    rng = np.random.default_rng(7)
    analysis = analyze_generic(chart, rng)
    s0 = analysis.frame.param_point[chart.leaf_index][0]
    ops = leaf_operators(chart, analysis)
    poly = focus_polynomial(chart, analysis, ops)
    roots = real_roots(poly, (-3.0, 3.0))
    assert len(roots) == 1
    assert roots[0].location == pytest.approx(-s0, abs=1e-9)


def _roots_and_scan(spec, seed, line=None):
    chart = resolve(spec)
    rng = np.random.default_rng(seed)
    analysis = analyze_generic(chart, rng)
    ops = leaf_operators(chart, analysis)
    poly = focus_polynomial(chart, analysis, ops, line=line)
    roots = [c.location for c in real_roots(poly, (-3.0, 3.0))]
    scan = scan_foci(chart, analysis, line=line)
    return roots, scan


@pytest.mark.parametrize("spec,seed,line,count", [
    ("torse:twisted_cubic,l=1", 7, None, 1),
    ("join:conic,conic,N=5", 3, None, 2),
    ("join:twisted_cubic,conic,N=4", 11, None, 2),
    ("cone:conic,N=4", 5, LeafLine(-1.0, np.array([1.0])), 1),
    ("cone:veronese,N=6", 5, LeafLine(-1.0, np.array([1.0])), 1),
])
def test_focus_roots_match_rank_drop_scan(spec, seed, line, count):
    roots, scan = _roots_and_scan(spec, seed, line)
    assert len(roots) == count
    assert len(scan) == count
    for a, b in zip(roots, scan):
        assert abs(a - b) <= 1e-6


def test_cone_vertex_line_focus_at_vertex():
    # x(s) = (1-s) y + s v hits the vertex at s=1, with multiplicity r
    chart = resolve("cone:veronese,N=6")
    rng = np.random.default_rng(5)
    analysis = analyze_generic(chart, rng)
    ops = leaf_operators(chart, analysis)
    poly = focus_polynomial(chart, analysis, ops,
                            line=LeafLine(-1.0, np.array([1.0])))
    roots = real_roots(poly, (-3.0, 3.0))
    assert len(roots) == 1
    assert roots[0].location == pytest.approx(1.0, abs=1e-7)
    assert roots[0].multiplicity == analysis.r


def test_leaf_operators_require_ruled_chart():
    chart = resolve("veronese")
    rng = np.random.default_rng(1)
    analysis = analyze_generic(chart, rng)
    with pytest.raises(TypeError):
        leaf_operators(chart, analysis)
