# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: per-pixel simplex retrieval and stage filtering.

Integer arithmetic mirrors _kernels_py exactly; outputs are byte-identical.
"""

import numpy as np

cimport numpy as cnp


cdef inline long _interp4d(const unsigned char* lut, int q0, int q1, int q2, int q3) noexcept nogil:
    cdef int msb[4]
    cdef int lsb[4]
    cdef int order[4]
    cdef int weights[5]
    cdef int q[4]
    cdef int d, i, j, key, best
    cdef long acc
    cdef int idx0, idx1, idx2, idx3

    q[0] = q0; q[1] = q1; q[2] = q2; q[3] = q3
    for d in range(4):
        msb[d] = q[d] >> 4
        lsb[d] = q[d] & 15
        if msb[d] == 15:
            # Top cell is 15 wide: rescale the fraction to the 0..16 range.
            lsb[d] = (16 * lsb[d] + 7) // 15

    # Insertion sort: LSB descending, ties keep the lower dimension first.
    order[0] = 0; order[1] = 1; order[2] = 2; order[3] = 3
    for i in range(1, 4):
        key = order[i]
        j = i - 1
        while j >= 0 and lsb[order[j]] < lsb[key]:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key

    weights[0] = 16 - lsb[order[0]]
    weights[1] = lsb[order[0]] - lsb[order[1]]
    weights[2] = lsb[order[1]] - lsb[order[2]]
    weights[3] = lsb[order[2]] - lsb[order[3]]
    weights[4] = lsb[order[3]]

    idx0 = msb[0]; idx1 = msb[1]; idx2 = msb[2]; idx3 = msb[3]
    acc = weights[0] * <long>lut[((idx0 * 17 + idx1) * 17 + idx2) * 17 + idx3]
    for i in range(4):
        d = order[i]
        if d == 0:
            idx0 = min(idx0 + 1, 16)
        elif d == 1:
            idx1 = min(idx1 + 1, 16)
        elif d == 2:
            idx2 = min(idx2 + 1, 16)
        else:
            idx3 = min(idx3 + 1, 16)
        if weights[i + 1] != 0:
            acc += weights[i + 1] * <long>lut[((idx0 * 17 + idx1) * 17 + idx2) * 17 + idx3]
    return (acc + 8) >> 4


def interp4d_many(const unsigned char[::1] lut_flat, q_arr):
    """Vectorized wrapper matching _kernels_py.interp4d_many."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] q = np.ascontiguousarray(q_arr, dtype=np.int64)
    cdef Py_ssize_t n = q.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i
    cdef const unsigned char* lut = &lut_flat[0]
    with nogil:
        for i in range(n):
            out[i] = _interp4d(lut, <int>q[0, i], <int>q[1, i], <int>q[2, i], <int>q[3, i])
    return out


def filter_stage(const unsigned char[:, ::1] plane,
                 const int[:, :, :, ::1] offsets,
                 const unsigned char[:, ::1] luts_flat,
                 const long[::1] weights,
                 int weight_scale):
    """One filtering stage over a whole plane (see _kernels_py.filter_stage)."""
    cdef Py_ssize_t h = plane.shape[0]
    cdef Py_ssize_t w = plane.shape[1]
    cdef Py_ssize_t n_patterns = offsets.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out_v = out
    cdef Py_ssize_t y, x, p
    cdef int r, t, yy, xx
    cdef long total, acc, ensemble, result
    cdef int taps[4]
    cdef long half = weight_scale // 2

    with nogil:
        for y in range(h):
            for x in range(w):
                acc = 0
                for p in range(n_patterns):
                    total = 0
                    for r in range(4):
                        for t in range(4):
                            yy = <int>y + offsets[p, r, t, 0]
                            xx = <int>x + offsets[p, r, t, 1]
                            if yy < 0:
                                yy = 0
                            elif yy >= h:
                                yy = <int>h - 1
                            if xx < 0:
                                xx = 0
                            elif xx >= w:
                                xx = <int>w - 1
                            taps[t] = plane[yy, xx]
                        total += _interp4d(&luts_flat[p, 0], taps[0], taps[1], taps[2], taps[3])
                    ensemble = (total + 2) >> 2
                    acc += weights[p] * ensemble
                result = (acc + half) // weight_scale
                if result < 0:
                    result = 0
                elif result > 255:
                    result = 255
                out_v[y, x] = <unsigned char>result
    return out
