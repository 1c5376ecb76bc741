"""Second-order jets of charts and finite-difference cross derivatives.

The jet scalar type lives in a backend module: the compiled Cython kernel
``_jet_cy`` when available, else the pure-numpy ``_jet_py``.  Set
``DUALRANK_JET_BACKEND=python`` (or ``cython``) to force one.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _jet_py


def _load_backend():
    choice = os.environ.get("DUALRANK_JET_BACKEND", "auto").lower()
    if choice == "python":
        return _jet_py
    try:
        from . import _jet_cy

        return _jet_cy
    except ImportError:
        if choice == "cython":
            raise
        return _jet_py


backend = _load_backend()
BACKEND_NAME = backend.BACKEND


# generic scalar functions usable on floats and jets, so the same chart
# evaluator serves exact jets and plain evaluation

def sin(x):
    return x.sin() if hasattr(x, "sin") else math.sin(x)


def cos(x):
    return x.cos() if hasattr(x, "cos") else math.cos(x)


def sqrt(x):
    return x.sqrt() if hasattr(x, "sqrt") else math.sqrt(x)


@dataclass(frozen=True)
class Jet2:
    """Value, Jacobian and per-coordinate Hessians of a map R^d -> R^m."""

    value: np.ndarray      # (m,)
    jacobian: np.ndarray   # (m, d)
    hessians: np.ndarray   # (m, d, d), each symmetric

    @property
    def dim(self):
        return self.jacobian.shape[1]

    def apply_linear(self, A):
        """Compose with a linear map of the ambient space."""
        return Jet2(
            A @ self.value,
            A @ self.jacobian,
            np.einsum("ij,jkl->ikl", A, self.hessians),
        )

    def symmetry_defect(self):
        return max(
            float(np.max(np.abs(H - H.T))) for H in self.hessians
        ) if len(self.hessians) else 0.0


def eval_jet(evaluator, u, jet_backend=None):
    """Run a generic-scalar evaluator on jet variables seeded at ``u``."""
    bk = jet_backend or backend
    u = np.asarray(u, dtype=float)
    d = u.shape[0]
    seeds = [bk.Jet.variable(u[i], i, d) for i in range(d)]
    out = evaluator(seeds)
    m = len(out)
    value = np.empty(m)
    jac = np.empty((m, d))
    hess = np.empty((m, d, d))
    for k, c in enumerate(out):
        if hasattr(c, "g"):
            value[k] = c.v
            jac[k] = np.asarray(c.g)
            hess[k] = np.asarray(c.H)
        else:
            value[k] = float(c)
            jac[k] = 0.0
            hess[k] = 0.0
    return Jet2(value, jac, 0.5 * (hess + hess.transpose(0, 2, 1)))


def eval_value(evaluator, u):
    u = np.asarray(u, dtype=float)
    return np.array([float(c) for c in evaluator(list(u))])


class FiniteDifferenceJet:
    """Central-difference jets with one Richardson step.

    Used where no closed-form jet exists (dual charts built from SVD
    nullspaces).  Function evaluations are memoized per call site.
    """

    def __init__(self, func, step=1e-3):
        self.func = func
        self.h = step

    def _probe_all(self, u, order):
        cache = {}

        def f(offset):
            key = tuple(offset)
            if key not in cache:
                cache[key] = np.asarray(self.func(u + np.asarray(offset)))
            return cache[key]

        d = len(u)
        f0 = f(np.zeros(d))
        m = f0.shape[0]

        def jac_at(h):
            J = np.empty((m, d))
            for i in range(d):
                e = np.zeros(d)
                e[i] = h
                J[:, i] = (f(e) - f(-e)) / (2 * h)
            return J

        J = (4.0 * jac_at(self.h / 2) - jac_at(self.h)) / 3.0
        if order < 2:
            return f0, J, None

        def hess_at(h):
            H = np.empty((m, d, d))
            for i in range(d):
                ei = np.zeros(d)
                ei[i] = h
                H[:, i, i] = (f(ei) - 2 * f0 + f(-ei)) / h**2
                for j in range(i + 1, d):
                    ej = np.zeros(d)
                    ej[j] = h
                    mixed = (f(ei + ej) + f(-ei - ej) - f(ei - ej) - f(-ei + ej)) / (4 * h**2)
                    H[:, i, j] = mixed
                    H[:, j, i] = mixed
            return H

        H = (4.0 * hess_at(self.h / 2) - hess_at(self.h)) / 3.0
        return f0, J, H

    def jet(self, u, order=2):
        u = np.asarray(u, dtype=float)
        f0, J, H = self._probe_all(u, order)
        if H is None:
            H = np.zeros((f0.shape[0], len(u), len(u)))
        return Jet2(f0, J, 0.5 * (H + H.transpose(0, 2, 1)))
