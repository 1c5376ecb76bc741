# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled second-order forward-mode jets (hot-kernel backend).

Same API as ``_jet_py``: a Jet carries value, gradient and symmetric
Hessian; arithmetic propagates both with straight C loops.
"""

from libc.math cimport cos as ccos
from libc.math cimport exp as cexp
from libc.math cimport sin as csin
from libc.math cimport sqrt as csqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef Jet _new(double v, int d):
    cdef Jet j = Jet.__new__(Jet)
    j.v = v
    j.d = d
    j.g = np.zeros(d)
    j.H = np.zeros((d, d))
    return j


cdef class Jet:
    cdef public double v
    cdef public int d
    cdef public double[::1] g
    cdef public double[:, ::1] H

    @staticmethod
    def variable(double value, int index, int dim):
        cdef Jet j = _new(value, dim)
        j.g[index] = 1.0
        return j

    @staticmethod
    def constant(double value, int dim):
        return _new(value, dim)

    def __add__(x, y):
        cdef Jet a, b, out
        cdef int i, j, d
        if isinstance(x, Jet) and isinstance(y, Jet):
            a = <Jet> x
            b = <Jet> y
            d = a.d
            out = _new(a.v + b.v, d)
            for i in range(d):
                out.g[i] = a.g[i] + b.g[i]
                for j in range(d):
                    out.H[i, j] = a.H[i, j] + b.H[i, j]
            return out
        if isinstance(x, Jet):
            a = <Jet> x
            out = _new(a.v + <double> y, a.d)
        else:
            a = <Jet> y
            out = _new(a.v + <double> x, a.d)
        out.g[:] = a.g
        out.H[:, :] = a.H
        return out

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __rsub__(self, other):
        cdef Jet a = self
        cdef Jet out = _new(<double> other - a.v, a.d)
        cdef int i, j
        for i in range(a.d):
            out.g[i] = -a.g[i]
            for j in range(a.d):
                out.H[i, j] = -a.H[i, j]
        return out

    def __rtruediv__(self, other):
        return Jet.constant(<double> other, self.d).__truediv__(self)

    def __neg__(self):
        cdef Jet a = self
        cdef Jet out = _new(-a.v, a.d)
        cdef int i, j
        for i in range(a.d):
            out.g[i] = -a.g[i]
            for j in range(a.d):
                out.H[i, j] = -a.H[i, j]
        return out

    def __sub__(x, y):
        cdef Jet a, b, out
        cdef int i, j, d
        if isinstance(x, Jet) and isinstance(y, Jet):
            a = <Jet> x
            b = <Jet> y
            d = a.d
            out = _new(a.v - b.v, d)
            for i in range(d):
                out.g[i] = a.g[i] - b.g[i]
                for j in range(d):
                    out.H[i, j] = a.H[i, j] - b.H[i, j]
            return out
        if isinstance(x, Jet):
            a = <Jet> x
            out = _new(a.v - <double> y, a.d)
            out.g[:] = a.g
            out.H[:, :] = a.H
            return out
        a = <Jet> y
        out = _new(<double> x - a.v, a.d)
        for i in range(a.d):
            out.g[i] = -a.g[i]
            for j in range(a.d):
                out.H[i, j] = -a.H[i, j]
        return out

    def __mul__(x, y):
        cdef Jet a, b, out
        cdef double c
        cdef int i, j, d
        if isinstance(x, Jet) and isinstance(y, Jet):
            a = <Jet> x
            b = <Jet> y
            d = a.d
            out = _new(a.v * b.v, d)
            for i in range(d):
                out.g[i] = a.v * b.g[i] + b.v * a.g[i]
                for j in range(d):
                    out.H[i, j] = (a.v * b.H[i, j] + b.v * a.H[i, j]
                                   + a.g[i] * b.g[j] + b.g[i] * a.g[j])
            return out
        if isinstance(x, Jet):
            a = <Jet> x
            c = <double> y
        else:
            a = <Jet> y
            c = <double> x
        out = _new(a.v * c, a.d)
        for i in range(a.d):
            out.g[i] = a.g[i] * c
            for j in range(a.d):
                out.H[i, j] = a.H[i, j] * c
        return out

    def __truediv__(x, y):
        cdef Jet a, b, out
        cdef double q, bv
        cdef int i, j, d
        if isinstance(x, Jet) and isinstance(y, Jet):
            a = <Jet> x
            b = <Jet> y
            d = a.d
            bv = b.v
            q = a.v / bv
            out = _new(q, d)
            for i in range(d):
                out.g[i] = (a.g[i] - q * b.g[i]) / bv
            for i in range(d):
                for j in range(d):
                    out.H[i, j] = (a.H[i, j] - q * b.H[i, j]
                                   - out.g[i] * b.g[j] - b.g[i] * out.g[j]) / bv
            return out
        if isinstance(x, Jet):
            a = <Jet> x
            return a.__mul__(1.0 / <double> y)
        a = <Jet> y
        return Jet.constant(<double> x, a.d).__truediv__(a)

    def __pow__(x, k, z):
        cdef Jet a = <Jet> x
        cdef long n = <long> k
        if n == 0:
            return Jet.constant(1.0, a.d)
        if n < 0:
            return Jet.constant(1.0, a.d).__truediv__(a._ipow(-n))
        return a._ipow(n)

    cdef Jet _ipow(self, long n):
        cdef double f = self.v ** n
        cdef double fp = n * self.v ** (n - 1)
        cdef double fpp = n * (n - 1) * self.v ** (n - 2) if n >= 2 else 0.0
        return self._lift(f, fp, fpp)

    cdef Jet _lift(self, double f, double fp, double fpp):
        cdef Jet out = _new(f, self.d)
        cdef int i, j
        for i in range(self.d):
            out.g[i] = fp * self.g[i]
            for j in range(self.d):
                out.H[i, j] = fp * self.H[i, j] + fpp * self.g[i] * self.g[j]
        return out

    def sin(self):
        return self._lift(csin(self.v), ccos(self.v), -csin(self.v))

    def cos(self):
        return self._lift(ccos(self.v), -csin(self.v), -ccos(self.v))

    def sqrt(self):
        cdef double r = csqrt(self.v)
        return self._lift(r, 0.5 / r, -0.25 / (r * self.v))

    def exp(self):
        cdef double e = cexp(self.v)
        return self._lift(e, e, e)

    def __repr__(self):
        return f"Jet({self.v!r}, grad={np.asarray(self.g)!r})"
