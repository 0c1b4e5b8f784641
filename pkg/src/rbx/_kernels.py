"""Integer hot loops for the grid searches.

Each kernel has an ``@njit`` version and a vectorised numpy version with the
same signature.  ``RBX_DISABLE_NUMBA=1`` (or numba failing to import) selects
the numpy path.  Candidates are numbered in lexicographic order of their
row-major entry tuples over the grid, most significant entry first, so a
range of indices is a contiguous slice of that order.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_REQUESTED = os.environ.get("RBX_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")

try:
    if not NUMBA_REQUESTED:
        raise ImportError("disabled by RBX_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def decode(indices: np.ndarray, grid: np.ndarray, length: int) -> np.ndarray:
    """Candidate indices -> (N, length) entry arrays over the grid."""
    g = len(grid)
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((len(idx), length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        out[:, pos] = grid[idx % g]
        idx //= g
    return out


# --- RB identity over a grid --------------------------------------------------


def _rb_search_numpy(tensor, grid, p, q, pd, start, stop, chunk=1 << 18):
    d = tensor.shape[0]
    pairs = [(i, i) for i in range(d)] + [(i, j) for i in range(d) for j in range(d) if i != j]
    hits = []
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        S = decode(idx, grid, d * d).reshape(-1, d, d)
        for i, j in pairs:
            if not len(idx):
                break
            Si, Sj = S[:, :, i], S[:, :, j]
            lhs = q * np.einsum("na,nb,abk->nk", Si, Sj, tensor)
            z = q * (Si @ tensor[:, j, :]) + q * (Sj @ tensor[i, :, :]) + pd * tensor[i, j, :]
            rhs = np.einsum("nrk,nk->nr", S, z)
            keep = np.all(lhs == rhs, axis=1)
            idx, S = idx[keep], S[keep]
        hits.append(idx)
    return np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)


def _rb_search_loop(tensor, grid, p, q, pd, start, stop):
    d = tensor.shape[0]
    g = grid.shape[0]
    m = d * d
    S = np.zeros((d, d), dtype=np.int64)
    lhs = np.zeros(d, dtype=np.int64)
    z = np.zeros(d, dtype=np.int64)
    out = np.empty(stop - start, dtype=np.int64)
    n_hits = 0
    for idx in range(start, stop):
        rest = idx
        for pos in range(m - 1, -1, -1):
            S[pos // d, pos % d] = grid[rest % g]
            rest //= g
        ok = True
        for step in range(m):
            if step < d:
                i = step
                j = step
            else:
                t = step - d
                i = t // (d - 1)
                j = t % (d - 1)
                if j >= i:
                    j += 1
            for k in range(d):
                acc_l = 0
                acc_z = pd * tensor[i, j, k]
                for a in range(d):
                    sai = S[a, i]
                    saj = S[a, j]
                    if sai != 0:
                        acc_z += q * sai * tensor[a, j, k]
                        for b in range(d):
                            if S[b, j] != 0:
                                acc_l += sai * S[b, j] * tensor[a, b, k]
                    if saj != 0:
                        acc_z += q * saj * tensor[i, a, k]
                lhs[k] = q * acc_l
                z[k] = acc_z
            for r in range(d):
                acc = 0
                for k in range(d):
                    acc += S[r, k] * z[k]
                if acc != lhs[r]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out[n_hits] = idx
            n_hits += 1
    return out[:n_hits]


if HAVE_NUMBA:
    _rb_search_jit = njit(cache=True, nogil=True)(_rb_search_loop)


def rb_search(tensor: np.ndarray, grid: np.ndarray, p: int, q: int, pd: int, start: int, stop: int) -> np.ndarray:
    """Indices in [start, stop) whose scaled matrix S satisfies the integer RB identity.

    With S = D R and weight p/q the identity reads
    q S(x)S(y) = S(q S(x)y + q xS(y) + pD xy); ``pd`` is pD.
    """
    tensor = np.ascontiguousarray(tensor, dtype=np.int64)
    grid = np.ascontiguousarray(grid, dtype=np.int64)
    if HAVE_NUMBA:
        return _rb_search_jit(tensor, grid, p, q, pd, start, stop)
    return _rb_search_numpy(tensor, grid, p, q, pd, start, stop)


# --- conjugator grid ------------------------------------------------------------
#
# For T in the grid we test P psi = psi Q, where psi(X) = T^-1 X' T and X' is X
# or its transpose.  Replacing T^-1 by adj(T) keeps everything integral.  The
# unit gives the cheap necessary condition T P(1) = Q(1)' T.


def _adjugate_loop(T, adj):
    n = T.shape[0]
    if n == 2:
        adj[0, 0] = T[1, 1]
        adj[0, 1] = -T[0, 1]
        adj[1, 0] = -T[1, 0]
        adj[1, 1] = T[0, 0]
        return T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    # n == 3
    adj[0, 0] = T[1, 1] * T[2, 2] - T[1, 2] * T[2, 1]
    adj[0, 1] = T[0, 2] * T[2, 1] - T[0, 1] * T[2, 2]
    adj[0, 2] = T[0, 1] * T[1, 2] - T[0, 2] * T[1, 1]
    adj[1, 0] = T[1, 2] * T[2, 0] - T[1, 0] * T[2, 2]
    adj[1, 1] = T[0, 0] * T[2, 2] - T[0, 2] * T[2, 0]
    adj[1, 2] = T[0, 2] * T[1, 0] - T[0, 0] * T[1, 2]
    adj[2, 0] = T[1, 0] * T[2, 1] - T[1, 1] * T[2, 0]
    adj[2, 1] = T[0, 1] * T[2, 0] - T[0, 0] * T[2, 1]
    adj[2, 2] = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    return T[0, 0] * adj[0, 0] + T[0, 1] * adj[1, 0] + T[0, 2] * adj[2, 0]


def _psi_matches(P, Q, T, adj, n, transposed, psi):
    m = n * n
    # psi column (a, b) = adj e_ab' T
    for a in range(n):
        for b in range(n):
            col = a * n + b
            aa, bb = (b, a) if transposed else (a, b)
            for r in range(n):
                for s in range(n):
                    psi[r * n + s, col] = adj[r, aa] * T[bb, s]
    for r in range(m):
        for c in range(m):
            left = 0
            right = 0
            for k in range(m):
                left += P[r, k] * psi[k, c]
                right += psi[r, k] * Q[k, c]
            if left != right:
                return False
    return True


def _conj_search_loop(P, Q, P1, Q1, grid, transposed, start, stop):
    n = P1.shape[0]
    g = grid.shape[0]
    m = n * n
    T = np.zeros((n, n), dtype=np.int64)
    adj = np.zeros((n, n), dtype=np.int64)
    psi = np.zeros((m, m), dtype=np.int64)
    for idx in range(start, stop):
        rest = idx
        for pos in range(m - 1, -1, -1):
            T[pos // n, pos % n] = grid[rest % g]
            rest //= g
        ok = True
        for r in range(n):
            for c in range(n):
                acc = 0
                for k in range(n):
                    acc += T[r, k] * P1[k, c] - Q1[r, k] * T[k, c]
                if acc != 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if _adjugate_loop(T, adj) == 0:
            continue
        if _psi_matches(P, Q, T, adj, n, transposed, psi):
            return idx
    return -1


if HAVE_NUMBA:
    # the loop resolves these globals at compile time, so jit them first
    _adjugate_loop = njit(cache=True)(_adjugate_loop)
    _psi_matches = njit(cache=True)(_psi_matches)
    _conj_search_jit = njit(cache=True, nogil=True)(_conj_search_loop)


def _conj_search_numpy(P, Q, P1, Q1, grid, transposed, start, stop, chunk=1 << 17):
    n = P1.shape[0]
    adj = np.zeros((n, n), dtype=np.int64)
    psi = np.zeros((n * n, n * n), dtype=np.int64)
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        T = decode(idx, grid, n * n).reshape(-1, n, n)
        keep = np.all((T @ P1 - Q1 @ T) == 0, axis=(1, 2))
        for k in np.flatnonzero(keep):
            t = T[k]
            if _adjugate_loop(t, adj) == 0:
                continue
            if _psi_matches(P, Q, t, adj, n, transposed, psi):
                return int(idx[k])
    return -1


def conj_search(P, Q, P1, Q1, grid, transposed: bool, start: int, stop: int) -> int:
    """First grid index in [start, stop) giving a conjugator, or -1."""
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (P, Q, P1, Q1, grid)]
    if HAVE_NUMBA:
        return int(_conj_search_jit(*args, bool(transposed), start, stop))
    return _conj_search_numpy(*args, bool(transposed), start, stop)
