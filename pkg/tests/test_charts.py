"""Chart catalogue: registry, construction, metadata and preconditions."""

import numpy as np
import pytest

from dualrank import ChartError, RuledChart, analyze, resolve
from dualrank.charts import (
    CATALOGUE_SPECS,
    AnalyticChart,
    make_cone,
    make_curve_chart,
    make_join,
    make_torse,
)
from dualrank.gauss import sample_point
from dualrank.jets import eval_value


@pytest.mark.parametrize("spec", CATALOGUE_SPECS)
def test_registry_resolves_catalogue(spec):
    chart = resolve(spec)
    assert chart.N >= chart.meta["n"]
    assert chart.d >= 1


def test_unknown_spec_rejected():
    with pytest.raises(ChartError):
        resolve("klein_bottle")
    with pytest.raises(ChartError):
        resolve("torse:")


def test_twisted_cubic_points():
    chart = resolve("twisted_cubic")
    # raw evaluator, before the ambient rotation
    assert eval_value(chart._eval, [0.0]) == pytest.approx([1, 0, 0, 0])
    assert eval_value(chart._eval, [1.0]) == pytest.approx([1, 1, 1, 1])


def test_segre_11_embedding():
    chart = resolve("segre:1,1")
    a, b = 0.7, -0.4
    assert eval_value(chart._eval, [a, b]) == pytest.approx([1, b, a, a * b])


def test_veronese_and_symmetroid_points():
    ver = resolve("veronese")
    x = eval_value(ver._eval, [0.0, 0.0])  # affine chart of u = (1, 0, 0)
    assert x[0] == pytest.approx(1.0)
    assert np.max(np.abs(x[1:])) <= 1e-12

    sym = resolve("symmetroid")
    # u = (1, u1, u2), v = (0, v1, v2); at u1=u2=v2=0, v1=1 the matrix is
    # diag(1, 1, 0) in the (upper-triangle) coordinates, and det = 0
    x = eval_value(sym._eval, [0.0, 0.0, 1.0, 0.0])
    M = np.array([[x[0], x[1], x[2]], [x[1], x[3], x[4]], [x[2], x[4], x[5]]])
    assert M == pytest.approx(np.diag([1.0, 1.0, 0.0]))
    assert np.linalg.det(M) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("spec", CATALOGUE_SPECS)
def test_ruled_charts_are_affine_in_leaf_parameters(spec):
    chart = resolve(spec)
    if not isinstance(chart, RuledChart):
        return
    rng = np.random.default_rng(21)
    lo, hi = chart.sample_domain()
    for _ in range(3):
        jet = chart.jet(rng.uniform(lo, hi))
        leaf_block = jet.hessians[np.ix_(range(chart.N + 1),
                                         chart.leaf_index, chart.leaf_index)]
        assert np.max(np.abs(leaf_block)) == 0.0


@pytest.mark.parametrize("spec", CATALOGUE_SPECS)
def test_measured_invariants_match_metadata(spec):
    chart = resolve(spec)
    rng = np.random.default_rng(31)
    for _ in range(5):
        analysis = analyze(chart, sample_point(chart, rng))
        if analysis.ambiguous:
            continue
        assert analysis.n == chart.meta["n"]
        assert analysis.r == chart.meta["r"]
        assert analysis.l == chart.meta["l"]


@pytest.mark.parametrize("spec", ["twisted_cubic", "veronese", "segre:1,2"])
def test_rescaling_invariance(spec):
    # a chart is projective: multiplying the output by a positive factor
    # must leave every measured invariant unchanged
    chart = resolve(spec)

    def scaled(args, ev=chart._eval):
        f = 1.0 + 0.25 * args[0] * args[0]
        return [f * c for c in ev(args)]

    wrapped = AnalyticChart(chart.name + "~scaled", chart.d, chart.N, scaled,
                            rotate=False)
    rng = np.random.default_rng(17)
    lo, hi = chart.sample_domain()
    for _ in range(3):
        u = rng.uniform(lo, hi)
        a = analyze(chart, u)
        b = analyze(wrapped, u)
        assert (a.n, a.r, a.l) == (b.n, b.r, b.l)


def test_torse_order_zero_is_the_curve():
    curve = make_curve_chart("twisted_cubic")
    assert make_torse(curve, 0) is curve


def test_join_rejects_coplanar_curves():
    conic = resolve("conic")
    c1 = AnalyticChart("c1", 1, 5, lambda a, ev=conic._eval: ev(a) + [0.0] * 3,
                       rotate=False)
    with pytest.raises(ChartError, match="common 3-space"):
        make_join(c1, c1)


def test_cone_rejects_vertex_in_director_span():
    conic = resolve("conic")
    flat = AnalyticChart("flat", 1, 4, lambda a, ev=conic._eval: ev(a) + [0.0] * 2,
                         rotate=False, meta={"n": 1, "r": 1, "l": 0})
    inside = np.eye(5)[:, [1]]  # lies in the conic's plane
    with pytest.raises(ChartError, match="vertex meets"):
        make_cone(flat, inside)


def test_cone_with_empty_vertex_is_the_base():
    conic = resolve("conic")
    assert make_cone(conic, np.zeros((3, 0))) is conic


def test_chart_values_never_vanish_on_domain():
    rng = np.random.default_rng(13)
    for spec in CATALOGUE_SPECS:
        chart = resolve(spec)
        lo, hi = chart.sample_domain()
        norms = [np.linalg.norm(chart.value(rng.uniform(lo, hi)))
                 for _ in range(20)]
        assert min(norms) >= 1e-8
