# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled series kernels: direct product-to-sum accumulation.

cos(p)cos(q) = (cos(p-q) + cos(p+q))/2
sin(p)sin(q) = (cos(p-q) - cos(p+q))/2
sin(p)cos(q) = (sin(p-q) + sin(p+q))/2
"""

import numpy as np

BACKEND = "cython"


def trig_product(const double[::1] fc, const double[::1] fs, double f0,
                 const double[::1] gc, const double[::1] gs, double g0,
                 Py_ssize_t nout):
    cdef Py_ssize_t nf = fc.shape[0]
    cdef Py_ssize_t ng = gc.shape[0]
    cdef double[::1] hc = np.zeros(nout)
    cdef double[::1] hs = np.zeros(nout)
    cdef double h0 = f0 * g0
    cdef Py_ssize_t p, q, r, d
    cdef double a, b, cc, ss, cs, sc

    for p in range(1, nf + 1):
        a = fc[p - 1]
        b = fs[p - 1]
        for q in range(1, ng + 1):
            cc = 0.5 * a * gc[q - 1]
            ss = 0.5 * b * gs[q - 1]
            cs = 0.5 * a * gs[q - 1]
            sc = 0.5 * b * gc[q - 1]
            r = p + q
            if r <= nout:
                hc[r - 1] += cc - ss
                hs[r - 1] += cs + sc
            if p == q:
                h0 += cc + ss
            else:
                d = p - q
                if d > 0:
                    if d <= nout:
                        hc[d - 1] += cc + ss
                        hs[d - 1] += sc - cs
                elif -d <= nout:
                    hc[-d - 1] += cc + ss
                    hs[-d - 1] += cs - sc

    for q in range(1, min(ng, nout) + 1):
        hc[q - 1] += f0 * gc[q - 1]
        hs[q - 1] += f0 * gs[q - 1]
    for p in range(1, min(nf, nout) + 1):
        hc[p - 1] += g0 * fc[p - 1]
        hs[p - 1] += g0 * fs[p - 1]

    return h0, np.asarray(hc), np.asarray(hs)
