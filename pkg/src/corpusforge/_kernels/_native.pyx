# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``pure.py``.

The whole greedy dedup pass runs in one C call instead of one NumPy call
per document, and the mask fill fuses selection and replacement into a
single pass without boolean temporaries.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

LABEL_IGNORE = -100


def greedy_dedup_scan(embeddings, double threshold):
    emb_arr = np.ascontiguousarray(embeddings, dtype=np.float64)
    cdef double[:, ::1] emb = emb_arr
    cdef Py_ssize_t n = emb.shape[0]
    cdef Py_ssize_t d = emb.shape[1]

    dup_idx_arr = np.full(n, -1, dtype=np.int64)
    best_sim_arr = np.full(n, -2.0, dtype=np.float64)
    kept_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] dup_idx = dup_idx_arr
    cdef double[::1] best_sim = best_sim_arr
    cdef cnp.int64_t[::1] kept = kept_arr

    cdef Py_ssize_t i, t, k, n_kept = 0
    cdef cnp.int64_t j, best_j
    cdef double s, best

    for i in range(n):
        if n_kept > 0:
            best = -2.0
            best_j = -1
            for t in range(n_kept):
                j = kept[t]
                s = 0.0
                for k in range(d):
                    s += emb[i, k] * emb[j, k]
                if s > best:
                    best = s
                    best_j = j
            best_sim[i] = best
            if best >= threshold:
                dup_idx[i] = best_j
                continue
        kept[n_kept] = i
        n_kept += 1
    return dup_idx_arr, best_sim_arr


def mask_fill(ids, select_draws, branch_draws, random_ids,
              double select_prob, double mask_frac, double random_frac,
              long long mask_token_id):
    ids_arr = np.ascontiguousarray(ids, dtype=np.int64)
    cdef cnp.int64_t[::1] ids_v = ids_arr
    cdef double[::1] sel_v = np.ascontiguousarray(select_draws, dtype=np.float64)
    cdef double[::1] branch_v = np.ascontiguousarray(branch_draws, dtype=np.float64)
    cdef cnp.int64_t[::1] rand_v = np.ascontiguousarray(random_ids, dtype=np.int64)
    cdef Py_ssize_t n = ids_v.shape[0]

    input_ids_arr = ids_arr.copy()
    labels_arr = np.full(n, LABEL_IGNORE, dtype=np.int64)
    selected_arr = np.zeros(n, dtype=bool)
    cdef cnp.int64_t[::1] input_ids = input_ids_arr
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef cnp.uint8_t[::1] selected = selected_arr.view(np.uint8)

    cdef double cutoff2 = mask_frac + random_frac
    cdef Py_ssize_t i
    for i in range(n):
        if sel_v[i] < select_prob:
            selected[i] = 1
            labels[i] = ids_v[i]
            if branch_v[i] < mask_frac:
                input_ids[i] = mask_token_id
            elif branch_v[i] < cutoff2:
                input_ids[i] = rand_v[i]
    return input_ids_arr, labels_arr, selected_arr
