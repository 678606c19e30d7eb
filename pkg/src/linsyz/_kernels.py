"""Hot numeric kernels: modular row reduction and multiset weight counting.

Each kernel exists as a plain-loop implementation (compiled with
``numba.njit`` when available) and a vectorised pure-numpy implementation.
Set ``LINSYZ_DISABLE_NUMBA=1`` to force the numpy path; the two paths return
identical integer results.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("LINSYZ_DISABLE_NUMBA", "") in ("", "0")


# ---------------------------------------------------------------------------
# row reduction mod p


def _rref_loops(a, p):
    """In-place reduced row echelon form mod p; returns the pivot columns."""
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        # modular inverse by Fermat
        inv = 1
        base = a[r, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(c, cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r:
                f = a[i, c]
                if f != 0:
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


def _rref_numpy(a, p):
    p = int(p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[np.ix_(hit, np.arange(c, cols))] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


# ---------------------------------------------------------------------------
# multiset weight counting: character of S^t(W) from the weights of W


def _multiset_counts_loops(offsets, t, length):
    """counts[k, x] = number of size-k multisets of the weights whose sum packs to x."""
    counts = np.zeros((t + 1, length), dtype=np.int64)
    counts[0, 0] = 1
    for w in offsets:
        for k in range(1, t + 1):
            for x in range(length - w):
                v = counts[k - 1, x]
                if v != 0:
                    counts[k, x + w] += v
    return counts


def _multiset_counts_numpy(offsets, t, length):
    counts = np.zeros((t + 1, length), dtype=np.int64)
    counts[0, 0] = 1
    for w in offsets:
        w = int(w)
        for k in range(1, t + 1):
            if w == 0:
                counts[k] += counts[k - 1]
            else:
                counts[k, w:] += counts[k - 1, :length - w]
    return counts


if USE_NUMBA:
    _rref_impl = numba.njit(cache=True)(_rref_loops)
    _multiset_impl = numba.njit(cache=True)(_multiset_counts_loops)
else:
    _rref_impl = _rref_numpy
    _multiset_impl = _multiset_counts_numpy


def rref_mod_p(a, p: int, inplace: bool = False):
    """Reduced row echelon form of an integer matrix over F_p.

    Returns ``(R, pivots)``.  Entries are reduced into ``[0, p)`` first.
    """
    arr = np.asarray(a, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    arr = arr % p if not inplace else np.remainder(arr, p, out=arr)
    if arr.size == 0:
        return arr, np.zeros(0, dtype=np.int64)
    piv = _rref_impl(arr, np.int64(p))
    return arr, piv


def rank_mod_p(a, p: int) -> int:
    arr = np.asarray(a, dtype=np.int64)
    if arr.size == 0:
        return 0
    # fewer rows than columns keeps the elimination loop short
    if arr.shape[0] > arr.shape[1]:
        arr = arr.T
    return int(len(rref_mod_p(np.ascontiguousarray(arr), p)[1]))


def nullspace_mod_p(a, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0 mod p}."""
    arr = np.asarray(a, dtype=np.int64)
    cols = arr.shape[1]
    r, piv = rref_mod_p(arr, p)
    piv = [int(c) for c in piv]
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(piv):
            basis[k, c] = (-r[i, f]) % p
    return basis


def multiset_weight_counts(offsets, t: int, length: int) -> np.ndarray:
    offs = np.asarray(offsets, dtype=np.int64)
    return _multiset_impl(offs, int(t), int(length))


# both paths stay importable for the benchmark and equivalence tests
rref_loops_python = _rref_loops
rref_numpy = _rref_numpy
multiset_counts_loops_python = _multiset_counts_loops
multiset_counts_numpy = _multiset_counts_numpy
