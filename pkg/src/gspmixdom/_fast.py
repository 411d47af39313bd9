"""Compiled engine for large trees.

Same rules and tie-breaks as the reference engine in :mod:`gspmixdom.dp`.
Tables live on an evaluation stack, so only ``O(height)`` of them exist at
once; each node keeps just its backpointers. Counts are int64 until a product
or sum would pass 2**62. From that node upward the kernel records the
size-attaining child combinations and Python finishes the counts with
unbounded integers.
"""

from __future__ import annotations

import numpy as np
from numba import njit

try:
    from gmpy2 import mpz
except ImportError:  # plain ints are exact, only slower
    mpz = None

from .dp import LEAF_PICKS, RULES, cell_index
from .model import Edge, GSeries, Leaf, Parallel, Series, Solution, Vertex
from .states import SETTLED, TOUCHED

INF = np.int32(2**31 - 1)
LIMIT = np.int64(2**62)


def _pack_rules():
    outs, ls, rs, ovs, offsets = [], [], [], [], [0]
    for kind in (1, 2, 3):
        for dl in (False, True):
            for dr in (False, True):
                for out, l, r, ov in RULES[kind][dl][dr]:
                    outs.append(out)
                    ls.append(l)
                    rs.append(r)
                    ovs.append(ov)
                offsets.append(len(outs))
    # Rules are sorted by left cell; blocks[v, l] is where left cell l starts.
    blocks = np.zeros((len(offsets) - 1, 50), dtype=np.int64)
    for v in range(len(offsets) - 1):
        lo, hi = offsets[v], offsets[v + 1]
        q = lo
        for l in range(50):
            while q < hi and ls[q] < l:
                q += 1
            blocks[v, l] = q
    return (
        blocks,
        np.array(offsets, dtype=np.int64),
        np.array(outs, dtype=np.int8),
        np.array(ls, dtype=np.int8),
        np.array(rs, dtype=np.int8),
        np.array(ovs, dtype=np.int32),
    )


RULE_BLOCKS, RULE_OFF, RULE_OUT, RULE_L, RULE_R, RULE_OV = _pack_rules()

LEAF_SIZE = np.full(49, INF, dtype=np.int32)
for (_i, _j), _picks in LEAF_PICKS.items():
    LEAF_SIZE[cell_index(_i, _j)] = sum(_picks)

SETTLED_MASK = np.array([i in SETTLED for i in range(7)])
TOUCHED_MASK = np.array([i in TOUCHED for i in range(7)])


@njit(cache=True)
def _grow(buf, need):
    if need <= buf.shape[0]:
        return buf
    cap = max(need, 2 * buf.shape[0])
    out = np.empty((cap, buf.shape[1]), dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit(cache=True)
def _run(kinds, rule_blocks, rule_off, rule_out, rule_l, rule_r, rule_ov, leaf_size):
    n = kinds.shape[0]
    left = np.full(n, -1, dtype=np.int32)
    right = np.full(n, -1, dtype=np.int32)
    direct = np.zeros(n, dtype=np.bool_)
    big = np.zeros(n, dtype=np.bool_)
    choice = np.full((n, 49), -1, dtype=np.int16)  # rule offset within variant

    # Stack height first, to size the table stack.
    depth = 0
    height = 0
    for k in range(n):
        if kinds[k] == 0:
            depth += 1
        else:
            depth -= 1
        if depth > height:
            height = depth
    sz = np.empty((height + 1, 49), dtype=np.int32)
    ct = np.empty((height + 1, 49), dtype=np.int64)
    node_at = np.empty(height + 1, dtype=np.int32)

    # Tight combinations at big nodes: node, out, l, r, left count, right count
    # (count -1 means the child is big and its count lives in Python).
    tight = np.empty((1024, 6), dtype=np.int64)
    ntight = 0

    osz = np.empty(49, dtype=np.int32)
    oct_ = np.empty(49, dtype=np.int64)
    top = 0
    for k in range(n):
        kind = kinds[k]
        if kind == 0:
            for c in range(49):
                sz[top, c] = leaf_size[c]
                ct[top, c] = 1 if leaf_size[c] != INF else 0
            direct[k] = True
            node_at[top] = k
            top += 1
            continue
        ri = top - 1
        li = top - 2
        L = node_at[li]
        R = node_at[ri]
        left[k] = L
        right[k] = R
        dl = direct[L]
        dr = direct[R]
        if kind == 1:
            direct[k] = False
        elif kind == 2:
            direct[k] = dl or dr
        else:
            direct[k] = dl
        variant = (kind - 1) * 4 + (2 if dl else 0) + (1 if dr else 0)
        lo = rule_off[variant]
        hi = rule_off[variant + 1]
        osz[:] = INF
        oct_[:] = 0
        over = big[L] or big[R]
        for lc in range(49):
            a = sz[li, lc]
            if a == INF:
                continue
            ca = ct[li, lc]
            for q in range(rule_blocks[variant, lc], rule_blocks[variant, lc + 1]):
                b = sz[ri, rule_r[q]]
                if b == INF:
                    continue
                s = a + b - rule_ov[q]
                o = rule_out[q]
                if s < osz[o]:
                    osz[o] = s
                    choice[k, o] = q - lo
                    if not over:
                        cb = ct[ri, rule_r[q]]
                        if cb != 0 and ca > LIMIT // cb:
                            over = True
                        else:
                            oct_[o] = ca * cb
                elif s == osz[o] and not over:
                    cb = ct[ri, rule_r[q]]
                    if cb != 0 and ca > LIMIT // cb:
                        over = True
                    else:
                        p = ca * cb
                        if oct_[o] > LIMIT - p:
                            over = True
                        else:
                            oct_[o] += p
        if over:
            big[k] = True
            for q in range(lo, hi):
                a = sz[li, rule_l[q]]
                if a == INF:
                    continue
                b = sz[ri, rule_r[q]]
                if b == INF:
                    continue
                o = rule_out[q]
                if a + b - rule_ov[q] != osz[o]:
                    continue
                tight = _grow(tight, ntight + 1)
                tight[ntight, 0] = k
                tight[ntight, 1] = o
                tight[ntight, 2] = rule_l[q]
                tight[ntight, 3] = rule_r[q]
                tight[ntight, 4] = -1 if big[L] else ct[li, rule_l[q]]
                tight[ntight, 5] = -1 if big[R] else ct[ri, rule_r[q]]
                ntight += 1
        top -= 2
        for c in range(49):
            sz[top, c] = osz[c]
            ct[top, c] = oct_[c]
        node_at[top] = k
        top += 1

    return left, right, direct, big, choice, sz[0].copy(), ct[0].copy(), tight[:ntight].copy()


@njit(cache=True)
def _walk(kinds, left, right, choice, variant_of, rule_off, rule_l, rule_r, root, root_cell):
    """Cell chosen at every leaf, by leaf ordinal."""
    n = kinds.shape[0]
    nleaves = 0
    for k in range(n):
        if kinds[k] == 0:
            nleaves += 1
    # Leaf ordinal of each node in post-order.
    ordinal = np.full(n, -1, dtype=np.int32)
    c = 0
    for k in range(n):
        if kinds[k] == 0:
            ordinal[k] = c
            c += 1
    out = np.full(nleaves, -1, dtype=np.int8)
    stack_node = np.empty(n, dtype=np.int32)
    stack_cell = np.empty(n, dtype=np.int8)
    stack_node[0] = root
    stack_cell[0] = root_cell
    top = 1
    while top > 0:
        top -= 1
        k = stack_node[top]
        cell = stack_cell[top]
        if kinds[k] == 0:
            out[ordinal[k]] = cell
            continue
        q = rule_off[variant_of[k]] + choice[k, cell]
        stack_node[top] = left[k]
        stack_cell[top] = rule_l[q]
        top += 1
        stack_node[top] = right[k]
        stack_cell[top] = rule_r[q]
        top += 1
    return out


def flatten(tree):
    """Post-order kind codes and the leaves in left-to-right order."""
    codes = []
    leaves = []
    append = codes.append
    stack = [(tree, False)]
    pop, push = stack.pop, stack.append
    code_of = {Series: 1, Parallel: 2, GSeries: 3}
    while stack:
        node, expanded = pop()
        if type(node) is Leaf:
            append(0)
            leaves.append(node)
        elif expanded:
            append(code_of[type(node)])
        else:
            push((node, True))
            push((node.right, False))
            push((node.left, False))
    return np.array(codes, dtype=np.int8), leaves


def _big_counts(tight, left, right):
    """Finish unbounded counts for big nodes; returns {node: [49 counts]}.

    Right-hand counts are summed per (output cell, left cell) first, so each
    pair costs one multiplication.
    """
    counts: dict[int, list] = {}
    rows = tight.tolist()
    i = 0
    while i < len(rows):
        k = rows[i][0]
        lcounts = counts.get(left[k])
        rcounts = counts.get(right[k])
        acc: dict[tuple, object] = {}
        lval: dict[int, object] = {}
        while i < len(rows) and rows[i][0] == k:
            _, o, l, r, ca, cb = rows[i]
            i += 1
            if cb < 0:
                cb = rcounts[r]
            key = (o, l)
            acc[key] = acc.get(key, 0) + cb
            if l not in lval:
                lval[l] = _big(ca if ca >= 0 else lcounts[l])
        table = [0] * 49
        for (o, l), total in acc.items():
            table[o] += lval[l] * total
        counts[k] = table
    return counts


def _big(x):
    return mpz(x) if mpz is not None else x


def solve(tree) -> Solution:
    kinds, leaves = flatten(tree)
    left, right, direct, big, choice, root_sz, root_ct, tight = _run(
        kinds, RULE_BLOCKS, RULE_OFF, RULE_OUT, RULE_L, RULE_R, RULE_OV, LEAF_SIZE
    )
    root = len(kinds) - 1
    if big[root]:
        root_counts = [int(c) for c in _big_counts(tight, left.tolist(), right.tolist())[root]]
    else:
        root_counts = [int(x) for x in root_ct]

    root_direct = bool(direct[root])
    best = None
    for i in range(7):
        for j in range(7):
            c = cell_index(i, j)
            if root_sz[c] == INF or not (SETTLED_MASK[i] and SETTLED_MASK[j]):
                continue
            if root_direct and not (TOUCHED_MASK[i] or TOUCHED_MASK[j]):
                continue
            if best is None or root_sz[c] < root_sz[best]:
                best = c
    gamma = int(root_sz[best])
    count = sum(
        root_counts[cell_index(i, j)]
        for i in range(7)
        for j in range(7)
        if root_sz[cell_index(i, j)] == gamma
        and SETTLED_MASK[i]
        and SETTLED_MASK[j]
        and (not root_direct or TOUCHED_MASK[i] or TOUCHED_MASK[j])
    )

    if len(kinds) == 1:
        leaf_cells = np.array([best], dtype=np.int8)
    else:
        variant_of = _variants(kinds, left, right, direct)
        leaf_cells = _walk(
            kinds, left, right, choice, variant_of, RULE_OFF, RULE_L, RULE_R, root, best
        )
    take = np.zeros((49, 3), dtype=np.bool_)
    for (i, j), picks in LEAF_PICKS.items():
        take[cell_index(i, j)] = picks
    chosen = take[leaf_cells.astype(np.int64)]
    names = set()
    for idx in np.nonzero(chosen[:, 0])[0].tolist():
        names.add(leaves[idx].s)
    for idx in np.nonzero(chosen[:, 1])[0].tolist():
        names.add(leaves[idx].t)
    witness = [Vertex(x) for x in names]
    for idx in np.nonzero(chosen[:, 2])[0].tolist():
        leaf = leaves[idx]
        witness.append(Edge(idx, leaf.s, leaf.t))
    return Solution(gamma, count, frozenset(witness))


def _variants(kinds, left, right, direct):
    v = np.zeros(len(kinds), dtype=np.int64)
    internal = kinds != 0
    dl = direct[left[internal]].astype(np.int64)
    dr = direct[right[internal]].astype(np.int64)
    v[internal] = (kinds[internal].astype(np.int64) - 1) * 4 + 2 * dl + dr
    return v

