"""Hot counting and optimization kernels.

Every function here is written in nopython-compatible style and compiled with
numba unless the fallback backend is selected (see _accel). All kernels are
deterministic: integer accumulators or fixed-order float updates, identical
results under both backends.

Census kernels accumulate per-node rooted counts r[row, node]; the caller
folds node labels in afterwards. Row order follows the catalog.

The 4-node counter enumerates, for each edge (u,v), unordered pairs {w,x}
drawn from N(u) | N(v) minus {u,v}. Such a quadruple is always connected, and
a given 4-set of pattern P is generated once per edge of P whose two opposite
vertices both touch that edge's endpoints: 1x for path4 (its middle edge), 3x
for star4 and tailed triangle, 4x for cycle4, 5x for diamond, 6x for clique4.
Dividing the staged counts by these multiplicities yields exact rooted counts.
"""

import numpy as np

from ._accel import njit


@njit(cache=True, nogil=True)
def census3_kernel(indptr, indices, adj):
    """Rooted counts for triangle (row 0) and induced path3 (row 1)."""
    n = indptr.shape[0] - 1
    r = np.zeros((2, n), dtype=np.int64)
    for u in range(n):
        for ii in range(indptr[u], indptr[u + 1]):
            v = indices[ii]
            if v <= u:
                continue
            for jj in range(indptr[v], indptr[v + 1]):
                w = indices[jj]
                if w <= v:
                    continue
                if adj[u, w]:
                    r[0, u] += 1
                    r[0, v] += 1
                    r[0, w] += 1
    for c in range(n):
        start, end = indptr[c], indptr[c + 1]
        for ii in range(start, end):
            u = indices[ii]
            for jj in range(ii + 1, end):
                v = indices[jj]
                if not adj[u, v]:
                    r[1, u] += 1
                    r[1, v] += 1
    return r


@njit(cache=True, nogil=True)
def census4_kernel(indptr, indices, adj):
    """Rooted counts for the six 4-node topologies.

    Rows: 0 path4, 1 star4, 2 cycle4, 3 tailed triangle, 4 diamond, 5 clique4
    (catalog order 3..8).
    """
    n = indptr.shape[0] - 1
    stage = np.zeros((6, n), dtype=np.int64)
    union = np.empty(n, dtype=np.int64)
    for u in range(n):
        for ii in range(indptr[u], indptr[u + 1]):
            v = indices[ii]
            if v <= u:
                continue
            # sorted merge of N(u) and N(v), excluding u and v
            usize = 0
            pu, pv = indptr[u], indptr[v]
            eu, ev = indptr[u + 1], indptr[v + 1]
            while pu < eu or pv < ev:
                if pu < eu and (pv >= ev or indices[pu] <= indices[pv]):
                    cand = indices[pu]
                    if pv < ev and indices[pv] == cand:
                        pv += 1
                    pu += 1
                else:
                    cand = indices[pv]
                    pv += 1
                if cand != u and cand != v:
                    union[usize] = cand
                    usize += 1
            for ai in range(usize):
                w = union[ai]
                a_uw = adj[u, w]
                a_vw = adj[v, w]
                for bi in range(ai + 1, usize):
                    x = union[bi]
                    a_ux = adj[u, x]
                    a_vx = adj[v, x]
                    a_wx = adj[w, x]
                    m = 1 + a_uw + a_ux + a_vw + a_vx + a_wx
                    du = 1 + a_uw + a_ux
                    dv = 1 + a_vw + a_vx
                    dw = a_uw + a_vw + a_wx
                    dx = a_ux + a_vx + a_wx
                    if m == 3:
                        if du == 3:
                            stage[1, u] += 1
                        elif dv == 3:
                            stage[1, v] += 1
                        else:
                            if du == 1:
                                stage[0, u] += 1
                            if dv == 1:
                                stage[0, v] += 1
                            if dw == 1:
                                stage[0, w] += 1
                            if dx == 1:
                                stage[0, x] += 1
                    elif m == 4:
                        if du == 1:
                            stage[3, u] += 1
                        elif dv == 1:
                            stage[3, v] += 1
                        elif dw == 1:
                            stage[3, w] += 1
                        elif dx == 1:
                            stage[3, x] += 1
                        else:
                            stage[2, u] += 1
                            stage[2, v] += 1
                            stage[2, w] += 1
                            stage[2, x] += 1
                    elif m == 5:
                        if du == 3:
                            stage[4, u] += 1
                        if dv == 3:
                            stage[4, v] += 1
                        if dw == 3:
                            stage[4, w] += 1
                        if dx == 3:
                            stage[4, x] += 1
                    else:
                        stage[5, u] += 1
                        stage[5, v] += 1
                        stage[5, w] += 1
                        stage[5, x] += 1
    out = np.zeros((6, n), dtype=np.int64)
    mult = (1, 3, 4, 3, 5, 6)
    for row in range(6):
        for t in range(n):
            out[row, t] = stage[row, t] // mult[row]
    return out


@njit(cache=True, nogil=True)
def paths5_kernel(indptr, indices, adj, want_p5, want_c5):
    """Rooted counts for induced path5 (row 0) and induced cycle5 (row 1).

    Walk enumeration: each ordered simple 4-edge walk u-a-b-c-v is visited
    once; chord tests restrict to induced occurrences. A path5 has two ordered
    traversals (one per end); a cycle5 closes 10 ordered walks, one per
    (removed edge, direction), so all-node hits divide by 10.
    """
    n = indptr.shape[0] - 1
    r = np.zeros((2, n), dtype=np.int64)
    if not (want_p5 or want_c5):
        return r
    for u in range(n):
        for ia in range(indptr[u], indptr[u + 1]):
            a = indices[ia]
            for ib in range(indptr[a], indptr[a + 1]):
                b = indices[ib]
                if b == u:
                    continue
                a_ub = adj[u, b]
                for ic in range(indptr[b], indptr[b + 1]):
                    c = indices[ic]
                    if c == u or c == a:
                        continue
                    if a_ub or adj[u, c] or adj[a, c]:
                        continue
                    for iv in range(indptr[c], indptr[c + 1]):
                        v = indices[iv]
                        if v == u or v == a or v == b:
                            continue
                        if adj[a, v] or adj[b, v]:
                            continue
                        if adj[u, v]:
                            if want_c5:
                                r[1, u] += 1
                                r[1, a] += 1
                                r[1, b] += 1
                                r[1, c] += 1
                                r[1, v] += 1
                        elif want_p5:
                            r[0, u] += 1
    for t in range(n):
        r[1, t] //= 10
    return r


@njit(cache=True, nogil=True)
def path6_kernel(indptr, indices, adj):
    """Rooted counts for induced path6 (ends rooted)."""
    n = indptr.shape[0] - 1
    r = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for ia in range(indptr[u], indptr[u + 1]):
            a = indices[ia]
            for ib in range(indptr[a], indptr[a + 1]):
                b = indices[ib]
                if b == u:
                    continue
                if adj[u, b]:
                    continue
                for ic in range(indptr[b], indptr[b + 1]):
                    c = indices[ic]
                    if c == u or c == a:
                        continue
                    if adj[u, c] or adj[a, c]:
                        continue
                    for id_ in range(indptr[c], indptr[c + 1]):
                        d = indices[id_]
                        if d == u or d == a or d == b:
                            continue
                        if adj[u, d] or adj[a, d] or adj[b, d]:
                            continue
                        for iv in range(indptr[d], indptr[d + 1]):
                            v = indices[iv]
                            if v == u or v == a or v == b or v == c:
                                continue
                            if adj[u, v] or adj[a, v] or adj[b, v] or adj[c, v]:
                                continue
                            r[u] += 1
    return r


@njit(cache=True, nogil=True)
def star5_kernel(indptr, indices, adj):
    """Rooted counts for induced star5: per center, the number of 4-subsets
    of its neighborhood with no internal edges (pruned enumeration)."""
    n = indptr.shape[0] - 1
    r = np.zeros(n, dtype=np.int64)
    for v in range(n):
        start, end = indptr[v], indptr[v + 1]
        d = end - start
        if d < 4:
            continue
        for i in range(start, end):
            ni = indices[i]
            for j in range(i + 1, end):
                nj = indices[j]
                if adj[ni, nj]:
                    continue
                for k in range(j + 1, end):
                    nk = indices[k]
                    if adj[ni, nk] or adj[nj, nk]:
                        continue
                    for l in range(k + 1, end):
                        nl = indices[l]
                        if adj[ni, nl] or adj[nj, nl] or adj[nk, nl]:
                            continue
                        r[v] += 1
    return r


@njit(cache=True, nogil=True)
def smo_kernel(K, y, C, tol, max_updates):
    """Two-variable SMO on a precomputed kernel.

    Minimizes  (1/2) a'Qa - sum(a)  with Q_ij = y_i y_j K_ij subject to
    0 <= a <= C and y'a = 0. The first working index is the maximal KKT
    violator; the second maximizes the guaranteed objective decrease
    gap^2/quad (second-order selection), which avoids the slow zigzag of
    plain maximal-violating-pair steps on near-singular kernels. Returns
    (alpha, bias, updates, residual); residual <= tol signals convergence.
    """
    n = y.shape[0]
    alpha = np.zeros(n, dtype=np.float64)
    grad = -np.ones(n, dtype=np.float64)  # grad_i = (Q alpha)_i - 1
    diag = np.empty(n, dtype=np.float64)
    for t in range(n):
        diag[t] = K[t, t]
    updates = 0
    mval = np.inf
    Mval = -np.inf
    while True:
        yg = -(y * grad)
        up = ((y > 0.0) & (alpha < C)) | ((y < 0.0) & (alpha > 0.0))
        low = ((y > 0.0) & (alpha > 0.0)) | ((y < 0.0) & (alpha < C))
        yg_up = np.where(up, yg, -np.inf)
        yg_low = np.where(low, yg, np.inf)
        i = int(np.argmax(yg_up))
        mval = yg_up[i]
        Mval = np.min(yg_low)
        if not np.isfinite(mval) or not np.isfinite(Mval):
            break
        if mval - Mval <= tol:
            break
        if updates >= max_updates:
            break
        Ki = K[i]
        gaps = mval - yg
        quadv = np.maximum(diag[i] + diag - 2.0 * Ki, 1e-12)
        score = np.where(low & (yg < mval), gaps * gaps / quadv, -np.inf)
        j = int(np.argmax(score))
        if not np.isfinite(score[j]):
            break
        quad = diag[i] + diag[j] - 2.0 * K[i, j]
        if quad < 1e-12:
            quad = 1e-12
        step = (mval - yg[j]) / quad
        cap_i = (C - alpha[i]) if y[i] > 0.0 else alpha[i]
        cap_j = alpha[j] if y[j] > 0.0 else (C - alpha[j])
        if cap_i < step:
            step = cap_i
        if cap_j < step:
            step = cap_j
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        grad += step * y * (Ki - K[j])
        updates += 1
    bias = (mval + Mval) / 2.0
    residual = mval - Mval
    return alpha, bias, updates, residual
