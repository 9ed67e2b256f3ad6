"""NumPy fallback implementations of the hot kernels.

Semantics are defined here; the compiled extension in ``_native.pyx`` is a
drop-in twin. Both consume pre-drawn random arrays and pre-normalized
embeddings, so backend choice never changes results (floating-point
comparisons are performed on identical values; only dot-product summation
order may differ at the last ulp).
"""

from __future__ import annotations

import numpy as np

# label value marking unselected positions in masked sequences
LABEL_IGNORE = -100


def greedy_dedup_scan(
    embeddings: np.ndarray, threshold: float
) -> tuple[np.ndarray, np.ndarray]:
    """Sequential first-seen near-duplicate scan.

    ``embeddings`` is an (n, d) float64 array of L2-normalized rows in
    input order. Row i is a duplicate iff its maximum cosine similarity to
    an already-retained row is >= threshold. Returns ``(dup_idx, best_sim)``
    where ``dup_idx[i]`` is the most-similar retained row (-1 if row i was
    retained) and ``best_sim[i]`` the similarity it was judged on (-2.0
    sentinel when nothing was retained yet).
    """
    emb = np.ascontiguousarray(embeddings, dtype=np.float64)
    n = emb.shape[0]
    dup_idx = np.full(n, -1, dtype=np.int64)
    best_sim = np.full(n, -2.0, dtype=np.float64)
    kept = np.empty(n, dtype=np.int64)
    n_kept = 0
    for i in range(n):
        if n_kept:
            sims = emb[kept[:n_kept]] @ emb[i]
            j = int(np.argmax(sims))
            best = float(sims[j])
            best_sim[i] = best
            if best >= threshold:
                dup_idx[i] = kept[j]
                continue
        kept[n_kept] = i
        n_kept += 1
    return dup_idx, best_sim


def mask_fill(
    ids: np.ndarray,
    select_draws: np.ndarray,
    branch_draws: np.ndarray,
    random_ids: np.ndarray,
    select_prob: float,
    mask_frac: float,
    random_frac: float,
    mask_token_id: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Apply the select/corrupt decision per position.

    A position is selected when its uniform draw is < select_prob; selected
    positions become the mask token when the branch draw is < mask_frac,
    a pre-drawn random id when it is < mask_frac + random_frac, and stay
    unchanged otherwise. Returns (input_ids, labels, selection_mask) with
    labels holding the original id at selected positions and LABEL_IGNORE
    elsewhere.
    """
    ids = np.asarray(ids, dtype=np.int64)
    selected = select_draws < select_prob
    input_ids = ids.copy()
    labels = np.full(ids.shape, LABEL_IGNORE, dtype=np.int64)
    labels[selected] = ids[selected]
    cutoff2 = mask_frac + random_frac
    mask_branch = selected & (branch_draws < mask_frac)
    random_branch = selected & ~(branch_draws < mask_frac) & (branch_draws < cutoff2)
    input_ids[mask_branch] = mask_token_id
    input_ids[random_branch] = np.asarray(random_ids, dtype=np.int64)[random_branch]
    return input_ids, labels, selected
