"""Pure-numpy second-order forward-mode jets (fallback backend).

A ``Jet`` carries a value, a gradient of length ``d`` and a symmetric
``d x d`` Hessian and propagates both through arithmetic exactly (to
rounding error).  The Cython backend in ``_jet_cy`` exposes the same API.
"""

import math

import numpy as np

BACKEND = "python"


class Jet:
    __slots__ = ("v", "g", "H")

    def __init__(self, v, g, H):
        self.v = v
        self.g = g
        self.H = H

    # -- construction -------------------------------------------------

    @staticmethod
    def variable(value, index, dim):
        g = np.zeros(dim)
        g[index] = 1.0
        return Jet(float(value), g, np.zeros((dim, dim)))

    @staticmethod
    def constant(value, dim):
        return Jet(float(value), np.zeros(dim), np.zeros((dim, dim)))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.g + other.g, self.H + other.H)
        return Jet(self.v + other, self.g.copy(), self.H.copy())

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.g, -self.H)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v - other.v, self.g - other.g, self.H - other.H)
        return Jet(self.v - other, self.g.copy(), self.H.copy())

    def __rsub__(self, other):
        return Jet(other - self.v, -self.g, -self.H)

    def __mul__(self, other):
        if isinstance(other, Jet):
            cross = np.outer(self.g, other.g)
            return Jet(
                self.v * other.v,
                self.v * other.g + other.v * self.g,
                self.v * other.H + other.v * self.H + cross + cross.T,
            )
        return Jet(self.v * other, self.g * other, self.H * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            q = self.v / other.v
            qg = (self.g - q * other.g) / other.v
            cross = np.outer(qg, other.g)
            qH = (self.H - q * other.H - cross - cross.T) / other.v
            return Jet(q, qg, qH)
        return Jet(self.v / other, self.g / other, self.H / other)

    def __rtruediv__(self, other):
        # other / self with other a plain number
        return Jet.constant(other, self.g.shape[0]).__truediv__(self)

    def __pow__(self, k):
        k = int(k)
        if k == 0:
            return Jet.constant(1.0, self.g.shape[0])
        if k < 0:
            return 1.0 / self.__pow__(-k)
        return self._lift(self.v**k, k * self.v ** (k - 1), k * (k - 1) * self.v ** (k - 2) if k >= 2 else 0.0)

    # -- elementary functions -------------------------------------------

    def _lift(self, f, fp, fpp):
        outer = np.outer(self.g, self.g)
        return Jet(f, fp * self.g, fp * self.H + fpp * outer)

    def sin(self):
        s, c = math.sin(self.v), math.cos(self.v)
        return self._lift(s, c, -s)

    def cos(self):
        s, c = math.sin(self.v), math.cos(self.v)
        return self._lift(c, -s, -c)

    def sqrt(self):
        r = math.sqrt(self.v)
        return self._lift(r, 0.5 / r, -0.25 / (r * self.v))

    def exp(self):
        e = math.exp(self.v)
        return self._lift(e, e, e)

    def __repr__(self):
        return f"Jet({self.v!r}, grad={self.g!r})"
