"""Compiled inner loops for the permutation sampler.

The random stream mirrors ``_rng`` exactly.  All integer arithmetic on the
stream is uint64; mixing uint64 with int64 in numba silently promotes to
float64, hence the explicit casts.
"""

import numpy as np
from numba import njit

_U = np.uint64
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_LO32 = np.uint64(0xFFFFFFFF)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S32 = np.uint64(32)

_BIG = np.iinfo(np.int64).max


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _mulhi(a, b):
    # floor(a * b / 2**64) for b < 2**32
    lo = (a & _LO32) * b
    hi = (a >> _S32) * b
    return (hi + (lo >> _S32)) >> _S32


@njit(cache=True)
def _sample_key(seed, index):
    return _mix64(seed ^ _mix64(_U(index + 1) * _GAMMA))


@njit(cache=True)
def _fill_permutation(key, perm):
    n = perm.shape[0]
    for a in range(n):
        perm[a] = a + 1
    t = 0
    for pos in range(n - 1, 0, -1):
        x = _mix64(key + _U(t + 1) * _GAMMA)
        j = np.int64(_mulhi(x, _U(pos + 1)))
        tmp = perm[pos]
        perm[pos] = perm[j]
        perm[j] = tmp
        t += 1


@njit(cache=True, inline="always")
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _profile(W, perm, out, tu, tv, tw, nu, nv, nw, su, sw, parent):
    """Prefix MST costs along ``perm``; tree edges kept sorted by weight."""
    n = perm.shape[0]
    k = 0
    for step in range(n):
        i = perm[step]
        su[0] = 0
        sw[0] = W[i, 0]
        parent[0] = 0
        parent[i] = i
        for s in range(step):
            j = perm[s]
            su[s + 1] = j
            sw[s + 1] = W[i, j]
            parent[j] = j
        m = step + 1
        order = np.argsort(sw[:m], kind="mergesort")
        # merge the sorted tree edges with the sorted star, then Kruskal
        a = 0
        b = 0
        cnt = 0
        cost = 0
        while cnt < k + 1:
            if a < k and (b >= m or tw[a] <= sw[order[b]]):
                u = tu[a]
                v = tv[a]
                x = tw[a]
                a += 1
            else:
                o = order[b]
                u = i
                v = su[o]
                x = sw[o]
                b += 1
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru != rv:
                parent[rv] = ru
                nu[cnt] = u
                nv[cnt] = v
                nw[cnt] = x
                cnt += 1
                cost += x
        tu, nu = nu, tu
        tv, nv = nv, tv
        tw, nw = nw, tw
        k = cnt
        out[step] = cost


@njit(cache=True)
def profiles_batch(W, perms):
    P, n = perms.shape
    out = np.empty((P, n), np.int64)
    tu = np.empty(n, np.int64)
    tv = np.empty(n, np.int64)
    tw = np.empty(n, np.int64)
    nu = np.empty(n, np.int64)
    nv = np.empty(n, np.int64)
    nw = np.empty(n, np.int64)
    su = np.empty(n, np.int64)
    sw = np.empty(n, np.int64)
    parent = np.empty(n + 1, np.int64)
    for p in range(P):
        _profile(W, perms[p], out[p], tu, tv, tw, nu, nv, nw, su, sw, parent)
    return out


@njit(cache=True)
def permutations_at(seed, start, stop, n):
    out = np.empty((stop - start, n), np.int64)
    for idx in range(start, stop):
        _fill_permutation(_sample_key(seed, idx), out[idx - start])
    return out


@njit(cache=True, nogil=True)
def accumulate(Ws, seed, start, stop):
    """Sum saving-game marginal contributions over samples ``start..stop-1``.

    ``Ws`` stacks G weight matrices that share each sampled permutation.
    Returns per-graph per-player sums and the min/max marginal seen per graph.
    """
    G = Ws.shape[0]
    n = Ws.shape[1] - 1
    sums = np.zeros((G, n), np.int64)
    lo = np.full(G, _BIG, np.int64)
    hi = np.full(G, -_BIG, np.int64)
    perm = np.empty(n, np.int64)
    prof = np.empty(n, np.int64)
    tu = np.empty(n, np.int64)
    tv = np.empty(n, np.int64)
    tw = np.empty(n, np.int64)
    nu = np.empty(n, np.int64)
    nv = np.empty(n, np.int64)
    nw = np.empty(n, np.int64)
    su = np.empty(n, np.int64)
    sw = np.empty(n, np.int64)
    parent = np.empty(n + 1, np.int64)
    for idx in range(start, stop):
        _fill_permutation(_sample_key(seed, idx), perm)
        for g in range(G):
            W = Ws[g]
            _profile(W, perm, prof, tu, tv, tw, nu, nv, nw, su, sw, parent)
            prev = 0
            for step in range(n):
                i = perm[step]
                merg = W[0, i] + prev - prof[step]
                prev = prof[step]
                sums[g, i - 1] += merg
                if merg < lo[g]:
                    lo[g] = merg
                if merg > hi[g]:
                    hi[g] = merg
    return sums, lo, hi
