# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops: context filtering, dominance
scans, and the per-tuple fact matrix used by the exhaustive engine, the
invariant audits, and prominence scoring."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "c"


def facts_matrix(cnp.int32_t[:, :] dim_codes,
                 cnp.float64_t[:, :] measures,
                 cnp.int32_t[:] t_dims,
                 cnp.float64_t[:] t_meas,
                 cnp.int64_t[:] cmasks,
                 cnp.int64_t[:] mmasks):
    cdef Py_ssize_t nrows = dim_codes.shape[0]
    cdef Py_ssize_t n = t_dims.shape[0]
    cdef Py_ssize_t s = t_meas.shape[0]
    cdef Py_ssize_t nc = cmasks.shape[0]
    cdef Py_ssize_t nm = mmasks.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = np.ones((nc, nm), dtype=np.uint8)
    if nrows == 0:
        return out

    cdef cnp.ndarray[cnp.int64_t, ndim=1] match_np = np.zeros(nrows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ge_np = np.zeros(nrows, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] gt_np = np.zeros(nrows, dtype=np.int64)
    cdef cnp.int64_t[:] match = match_np
    cdef cnp.int64_t[:] ge = ge_np
    cdef cnp.int64_t[:] gt = gt_np

    cdef Py_ssize_t r, i, ci, mi
    cdef cnp.int64_t mbits, gbits, cmask, mmask
    cdef double v
    for r in range(nrows):
        mbits = 0
        for i in range(n):
            if dim_codes[r, i] == t_dims[i]:
                mbits |= (<cnp.int64_t>1) << i
        match[r] = mbits
        mbits = 0
        gbits = 0
        for i in range(s):
            v = measures[r, i]
            if v >= t_meas[i]:
                mbits |= (<cnp.int64_t>1) << i
                if v > t_meas[i]:
                    gbits |= (<cnp.int64_t>1) << i
        ge[r] = mbits
        gt[r] = gbits

    for ci in range(nc):
        cmask = cmasks[ci]
        for r in range(nrows):
            if (match[r] & cmask) != cmask:
                continue
            for mi in range(nm):
                if out[ci, mi] == 0:
                    continue
                mmask = mmasks[mi]
                if (ge[r] & mmask) == mmask and (gt[r] & mmask) != 0:
                    out[ci, mi] = 0
    return out


def skyline_flags(cnp.float64_t[:, :] measures, cnp.int64_t mask):
    cdef Py_ssize_t k = measures.shape[0]
    cdef Py_ssize_t s = measures.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.ones(k, dtype=np.uint8)
    cdef Py_ssize_t i, j, a
    cdef bint ge_all, gt_any
    cdef double vi, vj
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            ge_all = True
            gt_any = False
            for a in range(s):
                if mask & ((<cnp.int64_t>1) << a):
                    vj = measures[j, a]
                    vi = measures[i, a]
                    if vj < vi:
                        ge_all = False
                        break
                    if vj > vi:
                        gt_any = True
            if ge_all and gt_any:
                out[i] = 0
                break
    return out


def context_rows(cnp.int32_t[:, :] dim_codes, cnp.int32_t[:] t_dims, cnp.int64_t cmask):
    cdef Py_ssize_t nrows = dim_codes.shape[0]
    cdef Py_ssize_t n = t_dims.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] buf = np.empty(nrows, dtype=np.int64)
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t r, i
    cdef bint ok
    for r in range(nrows):
        ok = True
        for i in range(n):
            if cmask & ((<cnp.int64_t>1) << i):
                if dim_codes[r, i] != t_dims[i]:
                    ok = False
                    break
        if ok:
            buf[count] = r
            count += 1
    return buf[:count].copy()
