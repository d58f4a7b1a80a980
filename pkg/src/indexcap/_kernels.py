"""Batch digraph canonicalization kernels.

Enumerating nonisomorphic problems canonicalizes every one of the
2^(n(n-1)) labeled digraphs on n nodes: per adjacency mask, take the
minimum over all n! vertex relabelings. That inner loop is pure integer
bit shuffling, so it gets a numba @njit kernel with a vectorized numpy
fallback. Selection is by environment flag:

    INDEXCAP_KERNEL=numba   force the numba kernel (error if unavailable)
    INDEXCAP_KERNEL=numpy   force the pure-numpy path
    unset                   numba when importable, else numpy

Bit layout (shared with indexcap.problem): ordered pairs (j, k), j != k,
are listed row-major; pair index 0 occupies the MOST significant of the
n(n-1) bits, so ascending mask integers coincide with ascending
adjacency bit strings.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_ENV_FLAG = "INDEXCAP_KERNEL"


def pair_order(n: int) -> list:
    """Ordered pairs (j, k), 1-based, row-major, diagonal skipped."""
    return [(j, k) for j in range(1, n + 1) for k in range(1, n + 1) if k != j]


def bit_position(n: int, j: int, k: int) -> int:
    """Integer bit holding the (j, k) entry; pair index 0 is the MSB."""
    pairs = pair_order(n)
    length = len(pairs)
    return length - 1 - pairs.index((j, k))


def perm_target_tables(n: int) -> np.ndarray:
    """table[t, b] = integer bit where source bit b lands under permutation t.

    Permutation t maps vertex j to perms[t][j-1]; an edge (j, k) becomes
    (perm[j], perm[k]).
    """
    pairs = pair_order(n)
    length = len(pairs)
    index_of = {pair: i for i, pair in enumerate(pairs)}
    perms = list(itertools.permutations(range(1, n + 1)))
    table = np.empty((len(perms), length), dtype=np.uint8)
    for t, perm in enumerate(perms):
        for b in range(length):
            j, k = pairs[length - 1 - b]
            target_pair = (perm[j - 1], perm[k - 1])
            table[t, b] = length - 1 - index_of[target_pair]
    return table


def _canon_numpy(masks: np.ndarray, tables: np.ndarray) -> np.ndarray:
    best = masks.copy()
    n_perms, n_bits = tables.shape
    out = np.zeros_like(masks)
    for t in range(n_perms):
        out[:] = 0
        row = tables[t]
        for b in range(n_bits):
            out |= ((masks >> np.uint32(b)) & np.uint32(1)) << np.uint32(row[b])
        np.minimum(best, out, out=best)
    return best


_NUMBA_FN = None


def _canon_numba_compiled():
    global _NUMBA_FN
    if _NUMBA_FN is None:
        import warnings

        import numba

        # the TBB threading layer probe warns on older TBB; harmless here
        warnings.filterwarnings(
            "ignore", message=".*TBB.*", category=Warning, module="numba.*"
        )

        @numba.njit(cache=True, parallel=True)
        def kern(masks, bitvals):  # pragma: no cover - compiled
            n_perms, n_bits = bitvals.shape
            out = np.empty_like(masks)
            for i in numba.prange(masks.shape[0]):
                m = masks[i]
                best = m
                for t in range(n_perms):
                    v = np.uint32(0)
                    for b in range(n_bits):
                        if (m >> np.uint32(b)) & np.uint32(1):
                            v |= bitvals[t, b]
                    if v < best:
                        best = v
                out[i] = best
            return out

        _NUMBA_FN = kern
    return _NUMBA_FN


def kernel_name() -> str:
    """Which implementation batch_canonical will use right now."""
    flag = os.environ.get(_ENV_FLAG, "").strip().lower()
    if flag == "numpy":
        return "numpy"
    if flag == "numba":
        return "numba"
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:  # pragma: no cover
        return "numpy"


def batch_canonical(masks: np.ndarray, n: int, impl: str | None = None) -> np.ndarray:
    """Canonical (minimum-over-relabelings) mask for each input mask."""
    if n * (n - 1) > 31:
        raise ValueError("batch kernel supports n(n-1) <= 31 bits, got n=%d" % n)
    impl = impl or kernel_name()
    masks = np.ascontiguousarray(masks, dtype=np.uint32)
    tables = perm_target_tables(n)
    if impl == "numpy":
        return _canon_numpy(masks, tables)
    if impl == "numba":
        bitvals = (np.uint32(1) << tables.astype(np.uint32)).astype(np.uint32)
        return _canon_numba_compiled()(masks, bitvals)
    raise ValueError("unknown kernel %r (want numba or numpy)" % impl)
