# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-node kernel for optimal backward-error sampling.

Mirrors ``_pykernel`` operation for operation; see that module for the
meaning of the outputs.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, ceil, copysign, exp, fabs, hypot, log, log1p, INFINITY

cnp.import_array()

cdef double TWO_PI = 6.283185307179586
cdef double TINY = 1e-300
cdef double BAND = 1e-12


cdef inline void cdiv(double ar, double ai, double br, double bi,
                      double* outr, double* outi) noexcept nogil:
    # Smith's algorithm
    cdef double ratio, denom
    if fabs(br) >= fabs(bi):
        ratio = bi / br
        denom = br + bi * ratio
        outr[0] = (ar + ai * ratio) / denom
        outi[0] = (ai - ar * ratio) / denom
    else:
        ratio = br / bi
        denom = br * ratio + bi
        outr[0] = (ar * ratio + ai) / denom
        outi[0] = (ai * ratio - ar) / denom


cdef inline void horner(const double* cr, const double* ci, Py_ssize_t m, double xr, double xi,
                        double* outr, double* outi) noexcept nogil:
    # raw pointers: passing memoryviews here would cost an atomic refcount per call
    cdef Py_ssize_t j
    cdef double accr = 0.0, acci = 0.0, tr
    for j in range(m - 1, -1, -1):
        tr = accr * xr - acci * xi + cr[j]
        acci = accr * xi + acci * xr + ci[j]
        accr = tr
    outr[0] = accr
    outi[0] = acci


def sample(num, den, dm1, mu):
    """Evaluate the optimal relative backward error at every entry of ``mu``.

    Returns ``(k, delta, r, abs_delta, classical, orderstar, singular)``.
    """
    cdef const double[:] nr = np.ascontiguousarray(np.real(num), dtype=np.float64)
    cdef const double[:] ni = np.ascontiguousarray(np.imag(num), dtype=np.float64)
    cdef const double[:] dr = np.ascontiguousarray(np.real(den), dtype=np.float64)
    cdef const double[:] di = np.ascontiguousarray(np.imag(den), dtype=np.float64)
    cdef const double[:] wr_c = np.ascontiguousarray(np.real(dm1), dtype=np.float64)
    cdef const double[:] wi_c = np.ascontiguousarray(np.imag(dm1), dtype=np.float64)
    mu = np.ascontiguousarray(mu, dtype=np.complex128).ravel()
    cdef const double[:] mr = np.ascontiguousarray(mu.real)
    cdef const double[:] mi = np.ascontiguousarray(mu.imag)
    cdef Py_ssize_t n = mr.shape[0]

    k_arr = np.zeros(n, dtype=np.int64)
    delta_arr = np.zeros(n, dtype=np.complex128)
    r_arr = np.zeros(n, dtype=np.complex128)
    absd_arr = np.zeros(n, dtype=np.float64)
    cls_arr = np.zeros(n, dtype=np.bool_)
    os_arr = np.zeros(n, dtype=np.int8)
    sing_arr = np.zeros(n, dtype=np.bool_)

    cdef long long[:] k_v = k_arr
    cdef double[:] dv = delta_arr.view(np.float64)
    cdef double[:] rv = r_arr.view(np.float64)
    cdef double[:] absd_v = absd_arr
    cdef cnp.npy_bool[:] cls_v = cls_arr
    cdef signed char[:] os_v = os_arr
    cdef cnp.npy_bool[:] sing_v = sing_arr

    # empty coefficient arrays (zero polynomial) still need a valid pointer
    cdef double zero = 0.0
    cdef Py_ssize_t nn = nr.shape[0], nd = dr.shape[0], nw = wr_c.shape[0]
    cdef const double* pnr = &nr[0] if nn else &zero
    cdef const double* pni = &ni[0] if nn else &zero
    cdef const double* pdr = &dr[0] if nd else &zero
    cdef const double* pdi = &di[0] if nd else &zero
    cdef const double* pwr = &wr_c[0] if nw else &zero
    cdef const double* pwi = &wi_c[0] if nw else &zero
    cdef Py_ssize_t p
    cdef double xr, xi, numr, numi, denr, deni, rr, ri, wr, wi, absr
    cdef double lr, li, a, kk, er, ei, odr, odi, v, t

    with nogil:
        for p in range(n):
            xr = mr[p]
            xi = mi[p]
            horner(pdr, pdi, nd, xr, xi, &denr, &deni)
            if fabs(denr) < TINY and fabs(deni) < TINY and hypot(denr, deni) < TINY:
                rv[2 * p] = INFINITY
                rv[2 * p + 1] = 0.0
                dv[2 * p] = INFINITY
                dv[2 * p + 1] = 0.0
                absd_v[p] = INFINITY
                os_v[p] = 1
                sing_v[p] = 1
                continue
            horner(pnr, pni, nn, xr, xi, &numr, &numi)
            cdiv(numr, numi, denr, deni, &rr, &ri)
            ri = ri + 0.0
            rv[2 * p] = rr
            rv[2 * p + 1] = ri
            absr = hypot(rr, ri)
            cls_v[p] = absr <= 1.0
            if absr < TINY:
                dv[2 * p] = INFINITY
                dv[2 * p + 1] = 0.0
                absd_v[p] = INFINITY
                os_v[p] = -1
                sing_v[p] = 1
                continue
            horner(pwr, pwi, nw, xr, xi, &wr, &wi)
            cdiv(wr, wi, denr, deni, &wr, &wi)
            if wr * wr + wi * wi < 0.25:
                lr = 0.5 * log1p(2.0 * wr + (wr * wr + wi * wi))
                li = atan2(wi, 1.0 + wr)
            else:
                lr = log(absr)
                li = atan2(ri, rr)
            a = (xi - li) / TWO_PI
            kk = copysign(ceil(fabs(a) - 0.5), a)
            k_v[p] = <long long>kk
            er = lr - xr
            ei = (li - xi) + TWO_PI * kk
            cdiv(er, ei, xr, xi, &odr, &odi)
            dv[2 * p] = odr
            dv[2 * p + 1] = odi
            absd_v[p] = hypot(odr, odi)
            v = exp(lr - xr)
            if fabs(v - 1.0) <= BAND:
                os_v[p] = 0
            elif v > 1.0:
                os_v[p] = 1
            else:
                os_v[p] = -1
    return k_arr, delta_arr, r_arr, absd_arr, cls_arr, os_arr, sing_arr
