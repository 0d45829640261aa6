"""Pure numpy/Python fallback for the compiled kernels in _kernels.pyx.

Must return values identical to the compiled versions: integer counts match
exactly, and the AR recursion applies the same operations in the same order
(IEEE doubles), so outputs are bit-equal.
"""

import numpy as np


def word_counts(bits, word_length, stride, n_windows):
    """Count length-`word_length` words with entries spaced `stride` apart."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    codes = np.zeros(n_windows, dtype=np.int64)
    for k in range(word_length):
        np.left_shift(codes, 1, out=codes)
        codes |= bits[k * stride : k * stride + n_windows]
    return np.bincount(codes, minlength=1 << word_length).astype(np.int64)


def ar_lagged_recursion(shocks, feedback, lag, innovation_scale):
    """out[i] = shocks[i] for i < lag, else feedback*out[i-lag] + innovation_scale*shocks[i]."""
    n = len(shocks)
    out = np.empty(n, dtype=np.float64)
    out[:lag] = shocks[:lag]
    # sequential by construction; n is small enough for a plain loop
    for i in range(lag, n):
        out[i] = feedback * out[i - lag] + innovation_scale * shocks[i]
    return out
