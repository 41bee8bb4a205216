"""
Data-parallel block kernels

Blocks of one parity touch disjoint amplitudes, so every block is gathered,
rotated and scattered independently. The per-block arithmetic order is fixed,
which makes the result bit-identical for any thread count.
"""

import logging
from typing import Optional

import numba
import numpy as np
from numba import njit, prange

logger = logging.getLogger(__name__)


@njit(parallel=True, nogil=True)
def rotate_blocks(amp, members, signs, c, coef):  # pragma: no cover - compiled
    """amp[block] <- c * amp[block] + coef * K_sparse amp[block], in place"""
    nblocks = members.shape[0]
    corners = members.shape[1]
    ndir = signs.shape[1]
    for blk in prange(nblocks):
        local = np.empty(corners)
        for k in range(corners):
            local[k] = amp[members[blk, k]]
        for k in range(corners):
            acc = 0.0
            for j in range(ndir):
                acc += signs[k, j] * local[k ^ (1 << j)]
            amp[members[blk, k]] = c * local[k] + coef * acc


def available_threads() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


def set_threads(threads: Optional[int]) -> int:
    """Set the block-level thread count (None means all available); returns the count used"""
    limit = available_threads()
    count = limit if threads is None else max(1, min(int(threads), limit))
    if threads is not None and threads > limit:
        logger.warning("requested %d threads, only %d available", threads, limit)
    numba.set_num_threads(count)
    return count
