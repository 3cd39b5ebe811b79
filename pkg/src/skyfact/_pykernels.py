"""Pure-Python/numpy kernel fallback.

Same contract as the compiled extension in ``_ckernels.pyx``; selected at
import time by :mod:`skyfact.kernels` when the extension is unavailable or
explicitly disabled.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _row_bitmasks(dim_codes, measures, t_dims, t_meas):
    # Per row: which dims match t, which measures are >=, which are >.
    n = t_dims.shape[0]
    s = t_meas.shape[0]
    dim_bits = (1 << np.arange(n, dtype=np.int64))
    meas_bits = (1 << np.arange(s, dtype=np.int64))
    match = (dim_codes == t_dims[None, :]) @ dim_bits
    ge = (measures >= t_meas[None, :]) @ meas_bits
    gt = (measures > t_meas[None, :]) @ meas_bits
    return match, ge, gt


def facts_matrix(dim_codes, measures, t_dims, t_meas, cmasks, mmasks):
    """For each (constraint bound-mask, subspace mask) pair: 1 iff no prior
    row matching the tuple's values on the bound dims dominates the tuple
    in the subspace."""
    nc, nm = len(cmasks), len(mmasks)
    out = np.ones((nc, nm), dtype=np.uint8)
    if dim_codes.shape[0] == 0:
        return out
    match, ge, gt = _row_bitmasks(dim_codes, measures, t_dims, t_meas)
    mmasks = np.asarray(mmasks, dtype=np.int64)
    for ci, cmask in enumerate(cmasks):
        in_ctx = (match & cmask) == cmask
        if not in_ctx.any():
            continue
        sub_ge = ge[in_ctx][:, None]
        sub_gt = gt[in_ctx][:, None]
        dominated = ((sub_ge & mmasks) == mmasks) & ((sub_gt & mmasks) != 0)
        out[ci] = ~dominated.any(axis=0)
    return out


def skyline_flags(measures, mask):
    """Per row of a context: 1 iff no other row dominates it in the subspace."""
    k = measures.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.uint8)
    cols = [i for i in range(measures.shape[1]) if mask & (1 << i)]
    sub = measures[:, cols]
    ge = (sub[:, None, :] >= sub[None, :, :]).all(axis=2)
    gt = (sub[:, None, :] > sub[None, :, :]).any(axis=2)
    dominated = (ge & gt).any(axis=0)
    return (~dominated).astype(np.uint8)


def context_rows(dim_codes, t_dims, cmask):
    """Indices of rows matching the tuple's values on the bound dims."""
    if dim_codes.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    n = t_dims.shape[0]
    dim_bits = (1 << np.arange(n, dtype=np.int64))
    match = (dim_codes == t_dims[None, :]) @ dim_bits
    return np.nonzero((match & cmask) == cmask)[0].astype(np.int64)
