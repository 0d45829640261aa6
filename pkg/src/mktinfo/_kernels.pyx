# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: binary word counting and the lagged AR recursion.

Signatures mirror mktinfo._kernels_py exactly; the two backends must return
identical values.
"""

import numpy as np


def word_counts(const unsigned char[::1] bits, Py_ssize_t word_length,
                Py_ssize_t stride, Py_ssize_t n_windows):
    """Count length-`word_length` words with entries spaced `stride` apart.

    Window k reads bits[k], bits[k+stride], ..., earliest entry is the most
    significant bit of the word code.  Returns int64 counts of size
    2**word_length.  Caller guarantees n_windows windows fit in `bits`.
    """
    counts = np.zeros(1 << word_length, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef Py_ssize_t i, k, code
    for i in range(n_windows):
        code = 0
        for k in range(word_length):
            code = (code << 1) | bits[i + k * stride]
        c[code] += 1
    return counts


def ar_lagged_recursion(const double[::1] shocks, double feedback,
                        Py_ssize_t lag, double innovation_scale):
    """out[i] = shocks[i] for i < lag, else feedback*out[i-lag] + innovation_scale*shocks[i]."""
    cdef Py_ssize_t n = shocks.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] r = out
    cdef Py_ssize_t i
    for i in range(n):
        if i < lag:
            r[i] = shocks[i]
        else:
            r[i] = feedback * r[i - lag] + innovation_scale * shocks[i]
    return out
