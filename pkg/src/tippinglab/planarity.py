"""Left-right planarity test, iterative, decision-only.

Two DFS passes over each component. The first orients edges, computes
heights, lowpoints and a nesting order; the second walks outgoing edges
in nesting order and maintains a stack of conflict pairs, where each
pair holds two intervals of back-edge ids that must embed on opposite
sides of the current tree path. The graph is planar iff no merge step
ever needs to put two conflicting intervals on the same side.

Disconnected input is handled by running both passes from every
unvisited root over a shared stack; the stack provably drains between
components (every pair is dropped once unwinding reaches the height of
its lowest return edge, and all returns stay within one component).

No embedding is produced. The measurement loops only consume verdicts,
and dropping the side-assignment bookkeeping keeps this reference
implementation small enough to mirror statement-for-statement in the
compiled kernel.
"""

from __future__ import annotations

from typing import Sequence

_NONE = -1


class _ConflictPair:
    """Two intervals of back-edge ids forced onto opposite sides.

    Each interval is a (low, high) pair of edge ids chained through
    ref[], or (_NONE, _NONE) when empty.
    """

    __slots__ = ("ll", "lh", "rl", "rh")

    def __init__(self, ll: int = _NONE, lh: int = _NONE, rl: int = _NONE, rh: int = _NONE):
        self.ll = ll
        self.lh = lh
        self.rl = rl
        self.rh = rh

    def swap(self) -> None:
        self.ll, self.lh, self.rl, self.rh = self.rl, self.rh, self.ll, self.lh


def lr_planarity(n: int, edges: Sequence[tuple[int, int]], *, edge_bound: bool = True) -> bool:
    """Decide planarity of the simple graph (n, edges).

    edge_bound enables the m > 3n - 6 short-circuit; disable it to force
    the full two-pass test (used when validating the bound itself).
    """
    m = len(edges)
    if edge_bound and n >= 3 and m > 3 * n - 6:
        return False
    if m == 0:
        return True

    # ---- Phase 1: DFS orientation, lowpoints, nesting order ----
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))

    height = [_NONE] * n
    parent_edge = [_NONE] * n
    src = [_NONE] * m  # orientation source; _NONE while unoriented
    tgt = [_NONE] * m
    lowpt = [0] * m
    lowpt2 = [0] * m
    nesting = [0] * m

    def finish_edge(eid: int, v: int) -> None:
        # Nesting order: edges with a chord-like second lowpoint must
        # nest inside their siblings, hence the +1.
        nesting[eid] = 2 * lowpt[eid]
        if lowpt2[eid] < height[v]:
            nesting[eid] += 1
        pe = parent_edge[v]
        if pe != _NONE:
            if lowpt[eid] < lowpt[pe]:
                lowpt2[pe] = min(lowpt[pe], lowpt2[eid])
                lowpt[pe] = lowpt[eid]
            elif lowpt[eid] > lowpt[pe]:
                lowpt2[pe] = min(lowpt2[pe], lowpt[eid])
            else:
                lowpt2[pe] = min(lowpt2[pe], lowpt2[eid])

    roots = []
    for s in range(n):
        if height[s] != _NONE:
            continue
        roots.append(s)
        height[s] = 0
        stack = [(s, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, i + 1)
                w, eid = adj[v][i]
                if src[eid] != _NONE:
                    continue  # already oriented from the other endpoint
                src[eid] = v
                tgt[eid] = w
                lowpt[eid] = height[v]
                lowpt2[eid] = height[v]
                if height[w] == _NONE:  # tree edge
                    parent_edge[w] = eid
                    height[w] = height[v] + 1
                    stack.append((w, 0))
                else:  # back edge
                    lowpt[eid] = height[w]
                    finish_edge(eid, v)
            else:
                stack.pop()
                pe = parent_edge[v]
                if pe != _NONE:
                    finish_edge(pe, src[pe])

    # Outgoing adjacency sorted by nesting depth. The global sort is
    # stable, so ties keep ascending edge-id order per vertex.
    out: list[list[int]] = [[] for _ in range(n)]
    for eid in sorted(range(m), key=nesting.__getitem__):
        out[src[eid]].append(eid)

    # ---- Phase 2: testing ----
    ref = [_NONE] * m
    lowpt_edge = [_NONE] * m
    bottom = [0] * m  # conflict-stack height when the edge was entered
    S: list[_ConflictPair] = []

    def lowest(cp: _ConflictPair) -> int:
        # Pairs on the stack are never fully empty: the side holding the
        # overall lowest return edge always survives trimming.
        if cp.ll == _NONE and cp.lh == _NONE:
            assert cp.rl != _NONE, "fully empty conflict pair on stack"
            return lowpt[cp.rl]
        if cp.rl == _NONE and cp.rh == _NONE:
            return lowpt[cp.ll]
        return min(lowpt[cp.ll], lowpt[cp.rl])

    def add_constraints(eid: int, pe: int) -> bool:
        """Fold the pairs above bottom[eid] into one; False on conflict."""
        cp = _ConflictPair()
        # Merge return edges of eid into the right interval of cp.
        while True:
            q = S.pop()
            if not (q.ll == _NONE and q.lh == _NONE):
                q.swap()
            if not (q.ll == _NONE and q.lh == _NONE):
                return False  # two non-empty sides: not planar
            assert q.rl != _NONE, "popped pair has no return edges"
            if lowpt[q.rl] > lowpt[pe]:
                # All of q constrains eid: append to the right interval.
                if cp.rh == _NONE:
                    cp.rh = q.rh
                else:
                    ref[cp.rl] = q.rh
                cp.rl = q.rl
            else:
                # Align q with the parent edge's outermost return edge.
                ref[q.rl] = lowpt_edge[pe]
            if len(S) == bottom[eid]:
                break
        # Merge conflicting return edges of earlier siblings into cp.left.
        while S and (_conflicting(S[-1].ll, S[-1].lh, eid, lowpt)
                     or _conflicting(S[-1].rl, S[-1].rh, eid, lowpt)):
            q = S.pop()
            if _conflicting(q.rl, q.rh, eid, lowpt):
                q.swap()
            if _conflicting(q.rl, q.rh, eid, lowpt):
                return False  # both sides conflict: not planar
            # q.right is mergeable; chain it below the right interval.
            if cp.rl != _NONE:
                ref[cp.rl] = q.rh
            if q.rl != _NONE:
                cp.rl = q.rl
            # q.left joins the left interval.
            if cp.lh == _NONE:
                cp.lh = q.lh
            else:
                ref[cp.ll] = q.lh
            cp.ll = q.ll
        if not (cp.ll == _NONE and cp.lh == _NONE and cp.rl == _NONE and cp.rh == _NONE):
            S.append(cp)
        return True

    def trim_back_edges(pe: int, u: int) -> None:
        """Drop back edges ending at u once the DFS retreats above u."""
        hu = height[u]
        while S and lowest(S[-1]) == hu:
            S.pop()  # every return in this pair goes exactly to u
        if S:
            cp = S.pop()
            while cp.lh != _NONE and tgt[cp.lh] == u:
                cp.lh = ref[cp.lh]
            if cp.lh == _NONE and cp.ll != _NONE:
                # Left interval emptied from the top: close it out and
                # remember the opposite side for the dangling low end.
                ref[cp.ll] = cp.rl
                cp.ll = _NONE
            while cp.rh != _NONE and tgt[cp.rh] == u:
                cp.rh = ref[cp.rh]
            if cp.rh == _NONE and cp.rl != _NONE:
                ref[cp.rl] = cp.ll
                cp.rl = _NONE
            S.append(cp)

    for s in roots:
        # Frames: (integrate, v, i). An integrate frame post-processes
        # out[v][i] after its subtree (or back edge) has been handled.
        frames: list[tuple[bool, int, int]] = [(False, s, 0)]
        while frames:
            integrate, v, i = frames[-1]
            if integrate:
                frames.pop()
                eid = out[v][i]
                if lowpt[eid] < height[v]:  # eid has a return edge
                    pe = parent_edge[v]
                    if i == 0:
                        lowpt_edge[pe] = lowpt_edge[eid]
                    elif not add_constraints(eid, pe):
                        return False
                continue
            outs = out[v]
            if i == len(outs):
                frames.pop()
                pe = parent_edge[v]
                if pe != _NONE:
                    trim_back_edges(pe, src[pe])
                continue
            frames[-1] = (False, v, i + 1)
            eid = outs[i]
            bottom[eid] = len(S)
            w = tgt[eid]
            if parent_edge[w] == eid:  # tree edge
                frames.append((True, v, i))
                frames.append((False, w, 0))
            else:  # back edge
                lowpt_edge[eid] = eid
                S.append(_ConflictPair(rl=eid, rh=eid))
                frames.append((True, v, i))
        assert not S, "conflict stack must drain between components"
    return True


def _conflicting(lo: int, hi: int, eid: int, lowpt: list[int]) -> bool:
    # An interval conflicts with eid when its top return edge comes back
    # strictly above lowpt[eid]. Empty intervals never conflict.
    return hi != _NONE and lowpt[hi] > lowpt[eid]
