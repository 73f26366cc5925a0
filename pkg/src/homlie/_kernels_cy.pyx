# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernels; behaviour matches _kernels_py exactly.

Products and merges run on integer numerator/denominator pairs and
normalize once per output coefficient, which avoids most of the
Fraction object churn of the reference implementation.
"""

from fractions import Fraction
from math import gcd

ZERO = Fraction(0)


cdef object _fraction(object num, object den):
    # den is always positive here; normalize and build in place
    cdef object g = gcd(num, den)
    if g != 1:
        num //= g
        den //= g
    f = Fraction.__new__(Fraction)
    f._numerator = num
    f._denominator = den
    return f


cpdef dict poly_add(dict a, dict b):
    cdef dict out
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        if s is None:
            out[k] = v
        else:
            num = s.numerator * v.denominator + v.numerator * s.denominator
            if num:
                out[k] = _fraction(num, s.denominator * v.denominator)
            else:
                del out[k]
    return out


cpdef dict poly_neg(dict a):
    cdef dict out = {}
    for k, v in a.items():
        out[k] = -v
    return out


cpdef dict poly_scale(dict a, c):
    cdef dict out = {}
    if not c:
        return out
    for k, v in a.items():
        out[k] = c * v
    return out


cpdef dict poly_mul(dict a, dict b):
    cdef dict acc = {}
    cdef dict out = {}
    cdef tuple ka, kb, k
    cdef Py_ssize_t i, n
    cdef list exps, ent
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
    for ka, va in a.items():
        na = va.numerator
        da = va.denominator
        n = len(ka)
        for kb, vb in b.items():
            num = na * vb.numerator
            den = da * vb.denominator
            exps = [0] * n
            for i in range(n):
                exps[i] = <object> ka[i] + <object> kb[i]
            k = tuple(exps)
            ent = <list> acc.get(k)
            if ent is None:
                acc[k] = [num, den]
            else:
                ent[0] = ent[0] * den + num * ent[1]
                ent[1] = ent[1] * den
    for k, pair in acc.items():
        num = (<list> pair)[0]
        if num:
            out[k] = _fraction(num, (<list> pair)[1])
    return out


cpdef dict poly_partial(dict a, Py_ssize_t i):
    cdef dict out = {}
    cdef tuple k
    for k, v in a.items():
        e = k[i]
        if e:
            out[k[:i] + (e - 1,) + k[i + 1:]] = v * e
    return out


cpdef dict poly_substitute(dict a, list powers, Py_ssize_t nvars):
    cdef dict out = {}
    cdef dict prod
    cdef tuple k, zero_key
    cdef Py_ssize_t i
    zero_key = (0,) * nvars
    for k, v in a.items():
        prod = {zero_key: v}
        for i in range(len(k)):
            e = k[i]
            if e:
                prod = poly_mul(prod, <dict> (<list> powers[i])[e])
        out = poly_add(out, prod)
    return out
