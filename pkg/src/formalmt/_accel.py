"""Numeric kernels with a numba path and a pure-numpy path.

numba is optional.  Set ``FORMALMT_DISABLE_NUMBA=1`` to force the numpy
implementations even when numba is importable.  Both paths agree up to
floating-point summation order; the tests run each one directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

_disabled = os.environ.get("FORMALMT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _disabled


def _njit(fn):
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


# --- coincidence matrix ---------------------------------------------------

def _coincidence_loop(codes, n_labels):
    # codes: (units, raters) int64, -1 = missing
    n_units, n_raters = codes.shape
    out = np.zeros((n_labels, n_labels), dtype=np.float64)
    counts = np.zeros(n_labels, dtype=np.int64)
    for u in range(n_units):
        m = 0
        for r in range(n_raters):
            c = codes[u, r]
            if c >= 0:
                counts[c] += 1
                m += 1
        if m >= 2:
            w = 1.0 / (m - 1)
            for c in range(n_labels):
                nc = counts[c]
                if nc == 0:
                    continue
                for k in range(n_labels):
                    nk = counts[k]
                    if nk == 0:
                        continue
                    if c == k:
                        out[c, k] += nc * (nc - 1) * w
                    else:
                        out[c, k] += nc * nk * w
        for c in range(n_labels):
            counts[c] = 0
    return out


_coincidence_numba = _njit(_coincidence_loop)


def coincidence_matrix_numpy(codes: np.ndarray, n_labels: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    n_units = codes.shape[0]
    # per-unit label counts: (units, labels)
    onehot = np.zeros((n_units, n_labels + 1), dtype=np.int64)
    rows = np.repeat(np.arange(n_units), codes.shape[1])
    cols = np.where(codes.ravel() >= 0, codes.ravel(), n_labels)
    np.add.at(onehot, (rows, cols), 1)
    counts = onehot[:, :n_labels]
    m = counts.sum(axis=1)
    keep = m >= 2
    counts = counts[keep].astype(np.float64)
    w = 1.0 / (m[keep] - 1)
    out = np.einsum("u,uc,uk->ck", w, counts, counts)
    out -= np.diag((w[:, None] * counts).sum(axis=0))
    return out


def coincidence_matrix_numba(codes: np.ndarray, n_labels: int) -> np.ndarray:
    if _coincidence_numba is None:
        raise RuntimeError("numba is not available")
    return _coincidence_numba(np.ascontiguousarray(codes, dtype=np.int64), n_labels)


def coincidence_matrix(codes: np.ndarray, n_labels: int) -> np.ndarray:
    """Krippendorff coincidence matrix for integer-coded nominal ratings.

    ``codes`` has one row per unit and one column per rater, with -1 for a
    missing rating.  Units with fewer than two ratings contribute nothing.
    """
    if USE_NUMBA:
        return coincidence_matrix_numba(codes, n_labels)
    return coincidence_matrix_numpy(codes, n_labels)


# --- clipped n-gram matches -----------------------------------------------

def _clipped_loop(hyp_keys, hyp_offsets, ref_keys, ref_offsets):
    total = 0
    for s in range(hyp_offsets.shape[0] - 1):
        h = np.sort(hyp_keys[hyp_offsets[s]:hyp_offsets[s + 1]])
        r = np.sort(ref_keys[ref_offsets[s]:ref_offsets[s + 1]])
        i = 0
        j = 0
        # equal keys line up one-to-one, which is exactly min(count_h, count_r)
        while i < h.shape[0] and j < r.shape[0]:
            if h[i] == r[j]:
                total += 1
                i += 1
                j += 1
            elif h[i] < r[j]:
                i += 1
            else:
                j += 1
    return total


_clipped_numba = _njit(_clipped_loop)


def clipped_matches_numpy(hyp_keys, hyp_offsets, ref_keys, ref_offsets) -> int:
    hyp_keys = np.asarray(hyp_keys, dtype=np.int64)
    ref_keys = np.asarray(ref_keys, dtype=np.int64)
    n_sent = len(hyp_offsets) - 1
    if len(hyp_keys) == 0 or len(ref_keys) == 0:
        return 0
    hyp_sent = np.repeat(np.arange(n_sent, dtype=np.int64), np.diff(hyp_offsets))
    ref_sent = np.repeat(np.arange(n_sent, dtype=np.int64), np.diff(ref_offsets))
    base = int(max(hyp_keys.max(), ref_keys.max())) + 1
    hk, hc = np.unique(hyp_sent * base + hyp_keys, return_counts=True)
    rk, rc = np.unique(ref_sent * base + ref_keys, return_counts=True)
    _, hi, ri = np.intersect1d(hk, rk, assume_unique=True, return_indices=True)
    return int(np.minimum(hc[hi], rc[ri]).sum())


def clipped_matches_numba(hyp_keys, hyp_offsets, ref_keys, ref_offsets) -> int:
    if _clipped_numba is None:
        raise RuntimeError("numba is not available")
    return int(_clipped_numba(
        np.ascontiguousarray(hyp_keys, dtype=np.int64),
        np.ascontiguousarray(hyp_offsets, dtype=np.int64),
        np.ascontiguousarray(ref_keys, dtype=np.int64),
        np.ascontiguousarray(ref_offsets, dtype=np.int64),
    ))


def clipped_matches(hyp_keys, hyp_offsets, ref_keys, ref_offsets) -> int:
    """Sum over sentences of clipped n-gram matches.

    Keys are integer n-gram ids; sentence ``s`` owns
    ``keys[offsets[s]:offsets[s + 1]]``.  For every sentence and every
    distinct key the contribution is ``min(count in hyp, count in ref)``.
    """
    if USE_NUMBA:
        return clipped_matches_numba(hyp_keys, hyp_offsets, ref_keys, ref_offsets)
    return clipped_matches_numpy(hyp_keys, hyp_offsets, ref_keys, ref_offsets)
