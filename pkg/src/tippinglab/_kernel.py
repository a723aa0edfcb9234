"""Compiled Monte Carlo kernel for the sweep hot path.

Mirrors the pure-Python reference (randgen + recognizers) statement for
statement: same splitmix64 stream, same per-sample seed derivation, same
fast paths, same left-right test. The reference implementations remain
the semantic authority; equivalence tests pin this module to them, and
the sweep engine falls back to the reference path when numba is absent
or TIPPINGLAB_NO_JIT is set.

All graph state lives in preallocated int64 workspaces, one per cell,
so the per-sample loop does no allocation beyond numpy's argmachinery.
Edges are kept in colex pair-index order here (the reference sorts them
lexicographically); every recognizer is order-independent, so verdicts
are unaffected.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U = np.uint64
_GAMMA = _U(0x9E3779B97F4A7C15)
_MIX1 = _U(0xBF58476D1CE4E5B9)
_MIX2 = _U(0x94D049BB133111EB)

# The scalar RNG helpers carry explicit signatures: without them a
# Python-int argument would compile a signed specialization whose
# int64/uint64 unification silently changes the arithmetic.


@njit("uint64(uint64)", cache=True)
def _mix64(z):
    z = (z ^ (z >> _U(30))) * _MIX1
    z = (z ^ (z >> _U(27))) * _MIX2
    return z ^ (z >> _U(31))


@njit("UniTuple(uint64, 2)(uint64)", cache=True)
def _next_u64(state):
    state = state + _GAMMA
    return state, _mix64(state)


@njit("Tuple((uint64, int64))(uint64, int64)", cache=True)
def _below(state, bound):
    # Uniform in [0, bound) by rejection; bound == 1 consumes nothing.
    if bound <= 1:
        return state, np.int64(0)
    b = _U(bound)
    limit = ((_U(0) - b) // b + _U(1)) * b  # == (2^64 // b) * b
    while True:
        state, u = _next_u64(state)
        if u < limit:
            return state, np.int64(u % b)


@njit("uint64(uint64, uint64, uint64, uint64, uint64)", cache=True)
def _cell_seed(master, n, m, tag_hash, replicate):
    h = _mix64(master)
    h = _mix64(h ^ n)
    h = _mix64(h ^ m)
    h = _mix64(h ^ tag_hash)
    h = _mix64(h ^ replicate)
    return h


@njit(cache=True)
def _fill_graph(state, n, m, total, eu, ev, idx, mark, stamp):
    """Sample m distinct pair indices, ascending, and decode to edges."""
    if 2 * m > total:
        k = total - m
        drawn = 0
        while drawn < k:
            state, x = _below(state, total)
            if mark[x] != stamp:
                mark[x] = stamp
                drawn += 1
        w = 0
        for i in range(total):
            if mark[i] != stamp:
                idx[w] = i
                w += 1
    else:
        drawn = 0
        while drawn < m:
            state, x = _below(state, total)
            if mark[x] != stamp:
                mark[x] = stamp
                idx[drawn] = x
                drawn += 1
        idx[:m].sort()
    for j in range(m):
        i = idx[j]
        v = np.int64((1.0 + np.sqrt(1.0 + 8.0 * np.float64(i))) * 0.5)
        while v * (v - 1) // 2 > i:
            v -= 1
        while (v + 1) * v // 2 <= i:
            v += 1
        eu[j] = i - v * (v - 1) // 2
        ev[j] = v
    return state


@njit(cache=True)
def _is_acyclic(n, m, eu, ev, uf):
    if m >= n:
        return False
    for v in range(n):
        uf[v] = v
    for i in range(m):
        a = eu[i]
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        b = ev[i]
        while uf[b] != b:
            uf[b] = uf[uf[b]]
            b = uf[b]
        if a == b:
            return False
        uf[b] = a
    return True


@njit(cache=True)
def _finish_edge(e, v, height, pedge, lowpt, lowpt2, nesting):
    nesting[e] = 2 * lowpt[e]
    if lowpt2[e] < height[v]:
        nesting[e] += 1
    pe = pedge[v]
    if pe != -1:
        if lowpt[e] < lowpt[pe]:
            lowpt2[pe] = min(lowpt[pe], lowpt2[e])
            lowpt[pe] = lowpt[e]
        elif lowpt[e] > lowpt[pe]:
            lowpt2[pe] = min(lowpt2[pe], lowpt[e])
        else:
            lowpt2[pe] = min(lowpt2[pe], lowpt2[e])


@njit(cache=True)
def _lr_planar(n, m, eu, ev, W):
    """Left-right test on edge arrays; mirror of planarity.lr_planarity
    with edge_bound=False. Workspace W sized for >= n vertices, m edges."""
    (xadj, cur, adjw, adje, height, pedge, esrc, etgt, lowpt, lowpt2,
     nesting, ncount, order, oxadj, oedges, ref, lpe, bottom,
     sll, slh, srl, srh, dsv, dsi, fint, fv, fi) = W
    if m == 0:
        return True

    # adjacency CSR
    for v in range(n + 1):
        xadj[v] = 0
    for e in range(m):
        xadj[eu[e] + 1] += 1
        xadj[ev[e] + 1] += 1
    for v in range(n):
        xadj[v + 1] += xadj[v]
        cur[v] = xadj[v]
    for e in range(m):
        u = eu[e]
        v = ev[e]
        adjw[cur[u]] = v
        adje[cur[u]] = e
        cur[u] += 1
        adjw[cur[v]] = u
        adje[cur[v]] = e
        cur[v] += 1

    # phase 1: orientation
    for v in range(n):
        height[v] = -1
        pedge[v] = -1
    for e in range(m):
        esrc[e] = -1
    for s in range(n):
        if height[s] != -1:
            continue
        height[s] = 0
        sp = 0
        dsv[0] = s
        dsi[0] = xadj[s]
        while sp >= 0:
            v = dsv[sp]
            i = dsi[sp]
            if i < xadj[v + 1]:
                dsi[sp] = i + 1
                w = adjw[i]
                e = adje[i]
                if esrc[e] != -1:
                    continue
                esrc[e] = v
                etgt[e] = w
                lowpt[e] = height[v]
                lowpt2[e] = height[v]
                if height[w] == -1:  # tree edge
                    pedge[w] = e
                    height[w] = height[v] + 1
                    sp += 1
                    dsv[sp] = w
                    dsi[sp] = xadj[w]
                else:  # back edge
                    lowpt[e] = height[w]
                    _finish_edge(e, v, height, pedge, lowpt, lowpt2, nesting)
            else:
                sp -= 1
                pe = pedge[v]
                if pe != -1:
                    _finish_edge(pe, esrc[pe], height, pedge, lowpt, lowpt2, nesting)

    # outgoing edges per vertex, sorted by nesting depth (stable
    # counting sort, so ties keep ascending edge-id order)
    nbuckets = 2 * n
    for b in range(nbuckets):
        ncount[b] = 0
    for e in range(m):
        ncount[nesting[e]] += 1
    acc = 0
    for b in range(nbuckets):
        t = ncount[b]
        ncount[b] = acc
        acc += t
    for v in range(n + 1):
        oxadj[v] = 0
    for e in range(m):
        oxadj[esrc[e] + 1] += 1
    for v in range(n):
        oxadj[v + 1] += oxadj[v]
        cur[v] = oxadj[v]
    for e in range(m):
        order[ncount[nesting[e]]] = e
        ncount[nesting[e]] += 1
    for k in range(m):
        e = order[k]
        oedges[cur[esrc[e]]] = e
        cur[esrc[e]] += 1

    # phase 2: testing
    for e in range(m):
        ref[e] = -1
    ssp = 0
    for s in range(n):
        if pedge[s] != -1:
            continue
        fsp = 0
        fint[0] = 0
        fv[0] = s
        fi[0] = oxadj[s]
        while fsp >= 0:
            kind = fint[fsp]
            v = fv[fsp]
            i = fi[fsp]
            if kind == 1:
                # integrate out[v][i] after its subtree finished
                fsp -= 1
                e = oedges[i]
                if lowpt[e] < height[v]:  # e has a return edge
                    pe = pedge[v]
                    if i == oxadj[v]:  # first outgoing edge of v
                        lpe[pe] = lpe[e]
                    else:
                        # ---- add_constraints(e, pe) ----
                        pll = np.int64(-1)
                        plh = np.int64(-1)
                        prl = np.int64(-1)
                        prh = np.int64(-1)
                        # merge return edges of e into P.right
                        while True:
                            ssp -= 1
                            qll = sll[ssp]
                            qlh = slh[ssp]
                            qrl = srl[ssp]
                            qrh = srh[ssp]
                            if qll != -1 or qlh != -1:
                                t1 = qll
                                t2 = qlh
                                qll = qrl
                                qlh = qrh
                                qrl = t1
                                qrh = t2
                            if qll != -1 or qlh != -1:
                                return False  # q has two non-empty sides
                            if lowpt[qrl] > lowpt[pe]:
                                if prh == -1:  # topmost interval
                                    prh = qrh
                                else:
                                    ref[prl] = qrh
                                prl = qrl
                            else:
                                # align with pe's outermost return edge
                                ref[qrl] = lpe[pe]
                            if ssp == bottom[e]:
                                break
                        # merge conflicting siblings into P.left
                        while ssp > 0:
                            c_left = slh[ssp - 1] != -1 and lowpt[slh[ssp - 1]] > lowpt[e]
                            c_right = srh[ssp - 1] != -1 and lowpt[srh[ssp - 1]] > lowpt[e]
                            if not (c_left or c_right):
                                break
                            ssp -= 1
                            qll = sll[ssp]
                            qlh = slh[ssp]
                            qrl = srl[ssp]
                            qrh = srh[ssp]
                            if qrh != -1 and lowpt[qrh] > lowpt[e]:
                                t1 = qll
                                t2 = qlh
                                qll = qrl
                                qlh = qrh
                                qrl = t1
                                qrh = t2
                            if qrh != -1 and lowpt[qrh] > lowpt[e]:
                                return False  # both sides conflict
                            if prl != -1:
                                ref[prl] = qrh
                            if qrl != -1:
                                prl = qrl
                            if plh == -1:
                                plh = qlh
                            else:
                                ref[pll] = qlh
                            pll = qll
                        if pll != -1 or plh != -1 or prl != -1 or prh != -1:
                            sll[ssp] = pll
                            slh[ssp] = plh
                            srl[ssp] = prl
                            srh[ssp] = prh
                            ssp += 1
                continue
            if i == oxadj[v + 1]:
                # all outgoing edges of v handled: retreat over pedge[v]
                fsp -= 1
                pe = pedge[v]
                if pe != -1:
                    # ---- trim back edges ending at u ----
                    u = esrc[pe]
                    hu = height[u]
                    while ssp > 0:
                        tll = sll[ssp - 1]
                        tlh = slh[ssp - 1]
                        trl = srl[ssp - 1]
                        trh = srh[ssp - 1]
                        if tll == -1 and tlh == -1:
                            lw = lowpt[trl]
                        elif trl == -1 and trh == -1:
                            lw = lowpt[tll]
                        else:
                            a = lowpt[tll]
                            b = lowpt[trl]
                            lw = a if a < b else b
                        if lw != hu:
                            break
                        ssp -= 1  # every return in this pair goes to u
                    if ssp > 0:
                        cll = sll[ssp - 1]
                        clh = slh[ssp - 1]
                        crl = srl[ssp - 1]
                        crh = srh[ssp - 1]
                        while clh != -1 and etgt[clh] == u:
                            clh = ref[clh]
                        if clh == -1 and cll != -1:
                            ref[cll] = crl
                            cll = -1
                        while crh != -1 and etgt[crh] == u:
                            crh = ref[crh]
                        if crh == -1 and crl != -1:
                            ref[crl] = cll
                            crl = -1
                        sll[ssp - 1] = cll
                        slh[ssp - 1] = clh
                        srl[ssp - 1] = crl
                        srh[ssp - 1] = crh
                continue
            fi[fsp] = i + 1
            e = oedges[i]
            bottom[e] = ssp
            w = etgt[e]
            if pedge[w] == e:  # tree edge
                fsp += 1
                fint[fsp] = 1
                fv[fsp] = v
                fi[fsp] = i
                fsp += 1
                fint[fsp] = 0
                fv[fsp] = w
                fi[fsp] = oxadj[w]
            else:  # back edge
                lpe[e] = e
                sll[ssp] = -1
                slh[ssp] = -1
                srl[ssp] = e
                srh[ssp] = e
                ssp += 1
                fsp += 1
                fint[fsp] = 1
                fv[fsp] = v
                fi[fsp] = i
    return True


@njit(cache=True)
def _planar(n, m, eu, ev, W):
    if m <= 8:
        return True
    if n >= 3 and m > 3 * n - 6:
        return False
    return _lr_planar(n, m, eu, ev, W)


@njit(cache=True)
def _outerplanar(n, m, eu, ev, au, av, W):
    if m <= 5:
        return True
    if n >= 2 and m > 2 * n - 3:
        return False
    # apex reduction: planar(g + universal vertex)
    maug = m + n
    if n + 1 >= 3 and maug > 3 * (n + 1) - 6:
        return False
    for e in range(m):
        au[e] = eu[e]
        av[e] = ev[e]
    for v in range(n):
        au[m + v] = v
        av[m + v] = n
    return _lr_planar(n + 1, maug, au, av, W)


@njit(cache=True)
def _near_planar(n, m, eu, ev, au, av, W):
    if m <= 11:
        return True  # smaller than the smallest obstruction K_{3,4}
    if n >= 3 and m > 3 * n - 5:
        return False
    if _planar(n, m, eu, ev, W):
        return True
    # shortest non-planar prefix of the (index-ordered) edge list
    lo = np.int64(1)
    hi = np.int64(m)
    while lo < hi:
        mid = (lo + hi) // 2
        if _planar(n, mid, eu, ev, W):
            lo = mid + 1
        else:
            hi = mid
    j = lo
    # a planarizing edge must lie inside the prefix; if the rest is
    # non-planar on its own, two edge-disjoint obstructions exist
    rest = m - j
    for i in range(rest):
        au[i] = eu[j + i]
        av[i] = ev[j + i]
    if not _planar(n, rest, au, av, W):
        return False
    for r in range(j):
        w = 0
        for i in range(m):
            if i != r:
                au[w] = eu[i]
                av[w] = ev[i]
                w += 1
        if _planar(n, m - 1, au, av, W):
            return True
    return False


@njit(cache=True)
def _make_workspace(nv, me):
    # nv, me: maximum vertex / edge counts any recognizer will use
    return (
        np.empty(nv + 1, np.int64),      # xadj
        np.empty(nv + 1, np.int64),      # cur
        np.empty(2 * me + 1, np.int64),  # adjw
        np.empty(2 * me + 1, np.int64),  # adje
        np.empty(nv + 1, np.int64),      # height
        np.empty(nv + 1, np.int64),      # pedge
        np.empty(me + 1, np.int64),      # esrc
        np.empty(me + 1, np.int64),      # etgt
        np.empty(me + 1, np.int64),      # lowpt
        np.empty(me + 1, np.int64),      # lowpt2
        np.empty(me + 1, np.int64),      # nesting
        np.empty(2 * nv + 2, np.int64),  # ncount
        np.empty(me + 1, np.int64),      # order
        np.empty(nv + 2, np.int64),      # oxadj
        np.empty(me + 1, np.int64),      # oedges
        np.empty(me + 1, np.int64),      # ref
        np.empty(me + 1, np.int64),      # lpe
        np.empty(me + 1, np.int64),      # bottom
        np.empty(me + 2, np.int64),      # sll
        np.empty(me + 2, np.int64),      # slh
        np.empty(me + 2, np.int64),      # srl
        np.empty(me + 2, np.int64),      # srh
        np.empty(nv + 2, np.int64),      # dsv
        np.empty(nv + 2, np.int64),      # dsi
        np.empty(2 * nv + 4, np.int64),  # fint
        np.empty(2 * nv + 4, np.int64),  # fv
        np.empty(2 * nv + 4, np.int64),  # fi
    )


@njit(cache=True)
def count_cell(master, tag_hash, n, m, samples, codes):
    """Sample `samples` graphs from the cell stream and count, for each
    property code, how many satisfy it. codes: 0=acyclic, 1=planar,
    2=outerplanar, 3=nearplanar."""
    counts = np.zeros(codes.shape[0], np.int64)
    total = n * (n - 1) // 2
    eu = np.empty(m + 1, np.int64)
    ev = np.empty(m + 1, np.int64)
    idx = np.empty(m + 1, np.int64)
    mark = np.zeros(total + 1, np.int64)
    uf = np.empty(n + 1, np.int64)
    au = np.empty(m + n + 1, np.int64)
    av = np.empty(m + n + 1, np.int64)
    W = _make_workspace(n + 1, m + n)
    for rep in range(samples):
        seed = _cell_seed(master, _U(n), _U(m), tag_hash, _U(rep))
        state = _fill_graph(seed, n, m, total, eu, ev, idx, mark, np.int64(rep + 1))
        for ci in range(codes.shape[0]):
            c = codes[ci]
            if c == 0:
                ok = _is_acyclic(n, m, eu, ev, uf)
            elif c == 1:
                ok = _planar(n, m, eu, ev, W)
            elif c == 2:
                ok = _outerplanar(n, m, eu, ev, au, av, W)
            else:
                ok = _near_planar(n, m, eu, ev, au, av, W)
            if ok:
                counts[ci] += 1
    return counts


@njit(cache=True)
def sample_edges(seed, n, m):
    """One graph from a per-sample seed, as (eu, ev) arrays. Test hook."""
    total = n * (n - 1) // 2
    eu = np.empty(m + 1, np.int64)
    ev = np.empty(m + 1, np.int64)
    idx = np.empty(m + 1, np.int64)
    mark = np.zeros(total + 1, np.int64)
    _fill_graph(seed, n, m, total, eu, ev, idx, mark, np.int64(1))
    return eu[:m], ev[:m]


@njit(cache=True)
def check_one(code, n, m, eu, ev):
    """Verdict for a single graph given as edge arrays. Test hook."""
    uf = np.empty(n + 1, np.int64)
    au = np.empty(m + n + 1, np.int64)
    av = np.empty(m + n + 1, np.int64)
    W = _make_workspace(n + 1, m + n)
    if code == 0:
        return _is_acyclic(n, m, eu, ev, uf)
    if code == 1:
        return _planar(n, m, eu, ev, W)
    if code == 2:
        return _outerplanar(n, m, eu, ev, au, av, W)
    return _near_planar(n, m, eu, ev, au, av, W)
