"""Parametrized charts of projective varieties and the example catalogue.

A chart is a map from an affine parameter cube into homogeneous coordinates
of P^N; it is the only representation of a variety used anywhere.  Every
constructed chart is composed with a fixed seeded orthogonal change of
ambient coordinates so sample points never align with coordinate axes.
"""

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .jets import Jet2, cos, sin
from .numerics import InputError, numerical_rank


class ChartError(ValueError):
    """Unsupported or inconsistent chart construction."""


def _seed_from_name(name):
    return zlib.crc32(name.encode()) & 0xFFFFFFFF


def random_orthogonal(size, seed):
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((size, size)))
    return Q * np.sign(np.diag(R))


def random_invertible(size, rng):
    while True:
        C = rng.standard_normal((size, size))
        s = np.linalg.svd(C, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return C


class Chart:
    """Base interface: ``value(u)`` and second-order ``jet(u)``."""

    name: str
    d: int  # parameter count
    N: int  # ambient projective dimension
    meta: dict

    def value(self, u):
        raise NotImplementedError

    def jet(self, u, order=2):
        raise NotImplementedError

    def sample_domain(self):
        # parameter cube used by generic sampling
        return np.full(self.d, -1.0), np.full(self.d, 1.0)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}: d={self.d}, N={self.N}>"


class AnalyticChart(Chart):
    def __init__(self, name, d, N, evaluator, meta=None, rotate=True, curve=None):
        self.name = name
        self.d = d
        self.N = N
        self._eval = evaluator
        self.meta = meta or {}
        self.curve = curve
        self.Q = random_orthogonal(N + 1, _seed_from_name(name)) if rotate else None

    def value(self, u):
        x = jets.eval_value(self._eval, u)
        return self.Q @ x if self.Q is not None else x

    def jet(self, u, order=2):
        j = jets.eval_jet(self._eval, u)
        return j.apply_linear(self.Q) if self.Q is not None else j


class RuledChart(AnalyticChart):
    """Chart whose trailing ``leaf_dim`` parameters enter affine-linearly."""

    def __init__(self, name, base_dim, leaf_dim, N, evaluator, meta=None, curve=None):
        super().__init__(name, base_dim + leaf_dim, N, evaluator, meta=meta, curve=curve)
        self.base_dim = base_dim
        self.leaf_dim = leaf_dim

    @property
    def base_index(self):
        return np.arange(self.base_dim)

    @property
    def leaf_index(self):
        return np.arange(self.base_dim, self.base_dim + self.leaf_dim)


class TransformedChart(Chart):
    """A chart composed with an invertible linear map of the ambient space."""

    def __init__(self, base, C, name=None):
        C = np.asarray(C, dtype=float)
        if C.shape != (base.N + 1, base.N + 1):
            raise InputError("correlation matrix has wrong shape")
        if numerical_rank(C).rank != base.N + 1:
            raise InputError("correlation matrix is singular")
        self.base = base
        self.C = C
        self.name = name or f"{base.name}|corr"
        self.d = base.d
        self.N = base.N
        self.meta = dict(base.meta)

    def value(self, u):
        return self.C @ self.base.value(u)

    def jet(self, u, order=2):
        return self.base.jet(u, order).apply_linear(self.C)


# ---------------------------------------------------------------------------
# curves with analytic derivatives of every order

class PolyCurve:
    """Coordinate-wise polynomial curve, coefficients ascending in t."""

    def __init__(self, coeffs):
        self.coeffs = [np.asarray(c, dtype=float) for c in coeffs]

    @property
    def ncoords(self):
        return len(self.coeffs)

    def eval(self, t):
        out = []
        for c in self.coeffs:
            acc = float(c[-1])
            for a in c[-2::-1]:
                acc = acc * t + float(a)
            out.append(acc)
        return out

    def deriv(self):
        return PolyCurve(
            [c[1:] * np.arange(1, len(c)) if len(c) > 1 else np.zeros(1) for c in self.coeffs]
        )


class TrigCurve:
    """Trigonometric polynomial curve: a0 + sum_j A_j cos(jt) + B_j sin(jt)."""

    def __init__(self, a0, A, B):
        self.a0 = np.asarray(a0, dtype=float)
        self.A = np.asarray(A, dtype=float)
        self.B = np.asarray(B, dtype=float)

    @property
    def ncoords(self):
        return self.a0.shape[0]

    def eval(self, t):
        out = []
        k = self.A.shape[1]
        cs = [cos(float(j) * t) for j in range(1, k + 1)]
        sn = [sin(float(j) * t) for j in range(1, k + 1)]
        for i in range(self.ncoords):
            acc = float(self.a0[i])
            for j in range(k):
                acc = acc + float(self.A[i, j]) * cs[j] + float(self.B[i, j]) * sn[j]
            out.append(acc)
        return out

    def deriv(self):
        j = np.arange(1, self.A.shape[1] + 1, dtype=float)
        return TrigCurve(np.zeros_like(self.a0), j * self.B, -j * self.A)


def curve_derivatives(curve, order):
    out = [curve]
    for _ in range(order):
        out.append(out[-1].deriv())
    return out


def _pad(vec_list, N):
    # extend a curve's coordinate list with zeros up to N+1 entries
    return lambda t, ev=vec_list: ev(t) + [0.0] * (N + 1 - len(ev(t)))


# named curves -------------------------------------------------------------

def _monomial_curve(N):
    return PolyCurve([np.eye(N + 1)[k, : k + 1] for k in range(N + 1)])


def make_curve(kind, N=None, seed=0):
    if kind == "twisted_cubic":
        return _monomial_curve(3), 3
    if kind == "conic":
        return _monomial_curve(2), 2
    if kind == "rational_normal_curve":
        if N is None or N < 1:
            raise ChartError("rational_normal_curve needs an ambient dimension")
        return _monomial_curve(N), N
    if kind == "generic_trig_curve":
        if N is None:
            raise ChartError("generic_trig_curve needs an ambient dimension")
        rng = np.random.default_rng(seed ^ 0x5EED)
        harmonics = 2
        a0 = rng.standard_normal(N + 1)
        A = rng.standard_normal((N + 1, harmonics))
        B = rng.standard_normal((N + 1, harmonics))
        return TrigCurve(a0, A, B), N
    raise ChartError(f"unsupported curve kind {kind!r}")


def make_curve_chart(kind, N=None, seed=0):
    curve, N = make_curve(kind, N, seed)
    name = kind if N is None else f"{kind}:{N}" if kind == "rational_normal_curve" else kind
    n = 1
    meta = {
        "n": n,
        "r": 1,
        "l": 0,
        "n_star": N - 1,
        "l_star": N - 2,
        "delta_star": 0,
        "dual_name": "torse" if N == 3 else "",
    }

    def evaluator(args):
        return curve.eval(args[0])

    return AnalyticChart(name, 1, N, evaluator, meta=meta, curve=curve)


def make_torse(curve_chart, l):
    """Union of osculating l-planes of a curve: x(t,s) = g(t) + sum s_a g^(a)(t)."""
    curve = curve_chart.curve
    if curve is None or curve_chart.d != 1:
        raise ChartError("make_torse needs a 1-parameter curve chart")
    N = curve_chart.N
    if l == 0:
        return curve_chart
    if l + 1 > N:
        raise ChartError("osculating order exceeds ambient dimension")
    derivs = curve_derivatives(curve, l)
    # osculating frame must be independent at probe points
    for t in (-0.7, 0.13, 0.82):
        M = np.column_stack([np.array(g.eval(t)) for g in derivs])
        if numerical_rank(M).rank < l + 1:
            raise ChartError("osculating frame degenerate at probe points")
    n = l + 1
    meta = {
        "n": n,
        "r": 1,
        "l": l,
        "n_star": N - l - 1,
        "l_star": N - l - 2,
        "delta_star": 0,
        "dual_name": "multidimensional torse",
    }

    def evaluator(args, derivs=derivs, l=l):
        t = args[0]
        coords = derivs[0].eval(t)
        for a in range(1, l + 1):
            da = derivs[a].eval(t)
            coords = [c + args[a] * dc for c, dc in zip(coords, da)]
        return coords

    name = f"torse:{curve_chart.name},l={l}"
    return RuledChart(name, 1, l, N, evaluator, meta=meta, curve=curve)


def make_cone(base_chart, vertex, name=None, dually_nondegenerate=True):
    """Cone over a director chart with vertex spanned by ``vertex`` columns."""
    vertex = np.atleast_2d(np.asarray(vertex, dtype=float))
    if vertex.ndim == 1:
        vertex = vertex[:, None]
    if vertex.shape[1] == 0:
        return base_chart
    N = base_chart.N
    if vertex.shape[0] != N + 1:
        raise ChartError("vertex vectors live in the wrong ambient space")
    l = vertex.shape[1]
    # the vertex must add l fresh dimensions to the director span
    samples = np.column_stack(
        [jets.eval_value(base_chart._eval, u) for u in _probe_points(base_chart.d)]
    )
    if numerical_rank(np.column_stack([samples, vertex])).rank != numerical_rank(samples).rank + l:
        raise ChartError("vertex meets the director subspace")
    bn = base_chart.meta.get("n", base_chart.d)
    br = base_chart.meta.get("r", bn)
    meta = {
        "n": bn + l,
        "r": br,
        "l": base_chart.meta.get("l", 0) + l,
    }
    meta["n_star"] = N - meta["l"] - 1 - base_chart.meta.get("delta_star", 0)
    meta["l_star"] = N - meta["n"] - 1
    meta["delta_star"] = base_chart.meta.get("delta_star", 0)
    meta["dual_name"] = "hypersurface of rank r in the vertex-dual subspace"

    base_eval = base_chart._eval
    bd = base_chart.d

    def evaluator(args, base_eval=base_eval, bd=bd, vertex=vertex, l=l):
        coords = base_eval(args[:bd])
        for a in range(l):
            s = args[bd + a]
            coords = [c + s * float(vertex[k, a]) for k, c in enumerate(coords)]
        return coords

    name = name or f"cone:{base_chart.name},l={l}"
    return RuledChart(name, bd, l, N, evaluator, meta=meta, curve=base_chart.curve)


def _probe_points(d, count=None, seed=1234):
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.9, 0.9, size=(count or (3 * d + 3), d))


def make_join(chart1, chart2, name=None):
    """Lines meeting two curves: x(t1,t2,s) = (1-s) g1(t1) + s g2(t2)."""
    if chart1.d != 1 or chart2.d != 1 or chart1.N != chart2.N:
        raise ChartError("join needs two curve charts in the same ambient space")
    N = chart1.N
    if N < 4:
        raise ChartError("join needs ambient dimension >= 4")
    samples = np.column_stack(
        [jets.eval_value(chart1._eval, [t]) for t in np.linspace(-0.8, 0.8, 5)]
        + [jets.eval_value(chart2._eval, [t]) for t in np.linspace(-0.8, 0.8, 5)]
    )
    if numerical_rank(samples).rank <= 4:
        raise ChartError("curves lie in a common 3-space")
    meta = {
        "n": 3,
        "r": 2,
        "l": 1,
        "n_star": N - 2,
        "l_star": N - 4,
        "delta_star": 0,
        "dual_name": "",
    }
    e1, e2 = chart1._eval, chart2._eval

    def evaluator(args, e1=e1, e2=e2):
        c1 = e1([args[0]])
        c2 = e2([args[1]])
        s = args[2]
        return [(1.0 - s) * a + s * b for a, b in zip(c1, c2)]

    name = name or f"join:{chart1.name},{chart2.name},N={N}"
    return RuledChart(name, 2, 1, N, evaluator, meta=meta)


def make_segre(m, n):
    """Affine chart of the Segre embedding P^m x P^n -> P^(mn+m+n)."""
    if m < 1 or n < 1:
        raise ChartError("Segre factors must be at least 1-dimensional")
    N = (m + 1) * (n + 1) - 1
    delta = abs(n - m)
    meta = {
        "n": m + n,
        "r": m + n,
        "l": 0,
        "n_star": N - 1 - delta,
        "delta_star": delta,
        "dual_name": "",
    }
    if delta == 0:
        meta["l_star"] = N - (m + n) - 1

    def evaluator(args, m=m, n=n):
        x = [1.0] + list(args[:m])
        y = [1.0] + list(args[m:])
        return [xi * yk for xi in x for yk in y]

    return AnalyticChart(f"segre:{m},{n}", m + n, N, evaluator, meta=meta)


def make_veronese():
    """Quadratic Veronese surface P^2 -> P^5 in an affine parameter chart."""
    meta = {
        "n": 2,
        "r": 2,
        "l": 0,
        "n_star": 4,
        "l_star": 2,
        "delta_star": 0,
        "dual_name": "cubic symmetroid",
    }

    def evaluator(args):
        u = [1.0] + list(args)
        return [u[i] * u[j] for i in range(3) for j in range(i, 3)]

    return AnalyticChart("veronese", 2, 5, evaluator, meta=meta)


def make_symmetroid():
    """Rank-2 sheet of the determinantal cubic of symmetric 3x3 matrices.

    Chart x(u, v) = u u^T + v v^T with u = (1, u1, u2), v = (0, v1, v2);
    coordinates are the 6 upper-triangle entries.
    """
    meta = {
        "n": 4,
        "r": 2,
        "l": 2,
        "n_star": 2,
        "l_star": 0,
        "delta_star": 0,
        "dual_name": "Veronese variety",
    }

    def evaluator(args):
        u = [1.0, args[0], args[1]]
        v = [0.0, args[2], args[3]]
        return [u[i] * u[j] + v[i] * v[j] for i in range(3) for j in range(i, 3)]

    return AnalyticChart("symmetroid", 4, 5, evaluator, meta=meta)


def make_cone_over_segre(m, n, l):
    """Cone with (l-1)-dimensional vertex over Segre(m, n)."""
    if l < 1:
        raise ChartError("cone vertex dimension parameter must be >= 1")
    segre = make_segre(m, n)
    Ns = segre.N
    N = Ns + l
    delta = abs(n - m)
    meta = {
        "n": m + n + l,
        "r": m + n,
        "l": l,
        "n_star": N - l - 1 - delta,
        "delta_star": delta,
        "dual_name": "",
    }
    se = segre._eval

    def evaluator(args, se=se, d=segre.d, l=l, pad=N - Ns):
        coords = se(args[:d]) + [0.0] * pad
        for a in range(l):
            coords[Ns + 1 + a] = coords[Ns + 1 + a] + args[d + a]
        return coords

    return RuledChart(f"cone_segre:{m},{n},l={l}", segre.d, l, N, evaluator, meta=meta)


# ---------------------------------------------------------------------------
# registry

def _embed_curve_chart(kind, ambient_N, seed=0):
    # curve in a low coordinate subspace of a larger ambient space
    curve, span_N = make_curve(kind, None, seed)
    if span_N > ambient_N:
        raise ChartError("curve does not fit in the requested ambient space")

    class _Padded:
        def __init__(self, curve, pad):
            self._curve = curve
            self._pad = pad

        @property
        def ncoords(self):
            return self._curve.ncoords + self._pad

        def eval(self, t):
            return self._curve.eval(t) + [0.0] * self._pad

        def deriv(self):
            return _Padded(self._curve.deriv(), self._pad)

    padded = _Padded(curve, ambient_N - span_N)
    chart = AnalyticChart(
        f"{kind}@P{ambient_N}", 1, ambient_N, lambda args: padded.eval(args[0]),
        meta={"n": 1, "r": 1, "l": 0}, rotate=False, curve=padded,
    )
    return chart


def _shifted_conic_eval(offset, N):
    # conic in the plane spanned by coordinates offset..offset+2 of P^N
    def evaluator(args, offset=offset, N=N):
        t = args[0]
        coords = [0.0] * (N + 1)
        coords[offset] = 1.0
        coords[offset + 1] = t
        coords[offset + 2] = t * t
        return coords

    return evaluator


def resolve(spec, seed=0):
    """Build a chart from a registry spec string like ``segre:1,2``."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    kv = {}
    pos = []
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            kv[k] = v
        else:
            pos.append(a)
    try:
        if head in ("twisted_cubic", "conic"):
            return make_curve_chart(head)
        if head in ("rational_normal_curve", "rnc"):
            return make_curve_chart("rational_normal_curve", N=int(pos[0]))
        if head == "trig_curve":
            return make_curve_chart("generic_trig_curve", N=int(pos[0]), seed=seed)
        if head == "torse":
            curve_spec = pos[0]
            l = int(kv.get("l", 1))
            return make_torse(resolve(curve_spec), l)
        if head == "segre":
            return make_segre(int(pos[0]), int(pos[1]))
        if head == "cone_segre":
            return make_cone_over_segre(int(pos[0]), int(pos[1]), int(kv.get("l", 1)))
        if head == "veronese":
            return make_veronese()
        if head == "symmetroid":
            return make_symmetroid()
        if head == "join":
            N = int(kv.get("N", 5))
            c1 = AnalyticChart(
                "conic_a", 1, N, _shifted_conic_eval(0, N), rotate=False,
                curve=None, meta={"n": 1, "r": 1, "l": 0},
            )
            if pos[0] == "conic" and pos[1] == "conic":
                c2 = AnalyticChart(
                    "conic_b", 1, N, _shifted_conic_eval(3, N), rotate=False,
                    meta={"n": 1, "r": 1, "l": 0},
                )
            elif pos[0] == "twisted_cubic" and pos[1] == "conic" and N == 4:
                c1 = _embed_curve_chart("twisted_cubic", 4)

                def conic_eval(args):
                    t = args[0]
                    # conic avoiding the cubic's 3-space: uses the last coordinate
                    return [t * t, 0.0, 1.0, 0.0, t]

                c2 = AnalyticChart("conic_c", 1, 4, conic_eval, rotate=False,
                                   meta={"n": 1, "r": 1, "l": 0})
            else:
                raise ChartError(f"unsupported join factors {pos}")
            return make_join(c1, c2, name=f"join:{pos[0]},{pos[1]},N={N}")
        if head == "cone":
            N = int(kv.get("N"))
            if pos[0] == "conic":
                director = _embed_curve_chart("conic", N)
                vertex = np.eye(N + 1)[:, [3]]
                base_meta = {"n": 1, "r": 1, "l": 0, "delta_star": 0}
            elif pos[0] == "veronese":
                v = make_veronese()
                if N < 6:
                    raise ChartError("cone over the Veronese needs ambient >= 6")

                def director_eval(args, ve=v._eval, pad=N - 5):
                    return ve(args) + [0.0] * pad

                director = AnalyticChart("veronese_dir", 2, N, director_eval,
                                         rotate=False, meta=dict(v.meta))
                vertex = np.eye(N + 1)[:, [6]]
                base_meta = v.meta
            else:
                raise ChartError(f"unsupported cone director {pos[0]}")
            director.meta.update(base_meta)
            return make_cone(director, vertex, name=f"cone:{pos[0]},N={N}")
    except (IndexError, KeyError, TypeError) as exc:
        raise ChartError(f"malformed chart spec {spec!r}") from exc
    raise ChartError(f"unknown chart spec {spec!r}")


CATALOGUE_SPECS = (
    "twisted_cubic",
    "rational_normal_curve:4",
    "torse:twisted_cubic,l=1",
    "torse:rational_normal_curve:5,l=2",
    "join:conic,conic,N=5",
    "cone:conic,N=4",
    "cone:veronese,N=6",
    "veronese",
    "symmetroid",
    "segre:1,2",
)


def catalogue():
    return [resolve(s) for s in CATALOGUE_SPECS]


# concrete instantiations of the worked dimension table
TABLE_ROWS = (
    (1, "spatial curve (twisted cubic)", "twisted_cubic", "torse"),
    (2, "rank-1 hypersurface in P^3 (tangent developable)", "torse:twisted_cubic,l=1",
     "tangentially nondegenerate curve"),
    (3, "join of two conics", "join:conic,conic,N=5", ""),
    (4, "cone over a conic", "cone:conic,N=4", "hypersurface"),
    (5, "multidimensional torse in P^5", "torse:rational_normal_curve:5,l=2",
     "multidimensional torse"),
    (6, "rank-1 hypersurface in P^4 (osculating 2-planes)",
     "torse:rational_normal_curve:4,l=2", "cone"),
    (7, "cubic symmetroid", "symmetroid", "Veronese variety"),
)
