"""Decomposition of a single functional graph G_a of x -> x^2 + a mod p.

All traversals run in numba over int64 node arrays, so p is capped at
2**31 (x*x must fit in a signed 64-bit word). Successors are recomputed on
the fly; the only stored adjacency is the reverse one built for trees and
canonical hashing.
"""

from __future__ import annotations

import functools
import hashlib
from dataclasses import dataclass

import numba
import numpy as np

from .field import FieldCtx, ModulusTooLarge

TRAVERSAL_LIMIT = 1 << 31


def check_traversable(ctx: FieldCtx):
    if ctx.p >= TRAVERSAL_LIMIT:
        raise ModulusTooLarge(f"graph traversal needs p < 2**31, got {ctx.p}")


def _matching(ctx: FieldCtx, a: int, d: "GraphDecomposition") -> int:
    # the kernels trust on_cycle blindly; a foreign decomposition would overrun them
    check_traversable(ctx)
    a %= ctx.p
    if d.p != ctx.p or d.a != a:
        raise ValueError(f"decomposition is for (p={d.p}, a={d.a}), not (p={ctx.p}, a={a})")
    return a


@dataclass(frozen=True)
class ComponentSummary:
    size: int
    cycle_len: int
    contains_zero: bool


@dataclass(frozen=True)
class TreeRecord:
    size: int
    internal: int
    height: int
    contains_zero: bool
    anchor_cycle_node: int


@dataclass(frozen=True, eq=False)
class GraphDecomposition:
    p: int
    a: int
    component_id: np.ndarray  # int64, one label per node
    on_cycle: np.ndarray  # bool
    comp_size: np.ndarray  # int64, indexed by component label
    comp_cycle: np.ndarray
    comp_zero: np.ndarray  # bool

    @property
    def n_components(self) -> int:
        return len(self.comp_size)

    @property
    def components(self) -> list[ComponentSummary]:
        return [
            ComponentSummary(int(s), int(c), bool(z))
            for s, c, z in zip(self.comp_size, self.comp_cycle, self.comp_zero)
        ]

    @property
    def connected(self) -> bool:
        return self.n_components == 1


@numba.njit(cache=True, nogil=True)
def _decompose_kernel(p, a):
    comp = np.full(p, -1, dtype=np.int64)
    stamp = np.zeros(p, dtype=np.int64)
    on_cycle = np.zeros(p, dtype=np.bool_)
    path = np.empty(p, dtype=np.int64)
    size = np.zeros(p, dtype=np.int64)
    cycle = np.zeros(p, dtype=np.int64)
    ncomp = 0
    for s in range(p):
        if comp[s] >= 0:
            continue
        tag = s + 1
        x = s
        top = 0
        while comp[x] < 0 and stamp[x] != tag:
            stamp[x] = tag
            path[top] = x
            top += 1
            x = (x * x + a) % p
        if comp[x] < 0:
            # walked back into this walk's own trail: x is on a new cycle
            c = ncomp
            ncomp += 1
            y = x
            n = 0
            while True:
                on_cycle[y] = True
                n += 1
                y = (y * y + a) % p
                if y == x:
                    break
            cycle[c] = n
        else:
            c = comp[x]
        for t in range(top):
            comp[path[t]] = c
        size[c] += top
    return comp, on_cycle, size[:ncomp].copy(), cycle[:ncomp].copy()


def decompose(ctx: FieldCtx, a: int) -> GraphDecomposition:
    """Label every node of G_a with its component and mark the cycles.

    Walks start at 0, 1, ..., p - 1 so component labels are reproducible.
    """
    check_traversable(ctx)
    a %= ctx.p
    comp, on_cycle, size, cycle = _decompose_kernel(ctx.p, a)
    zero = np.zeros(len(size), dtype=bool)
    zero[comp[0]] = True
    return GraphDecomposition(ctx.p, a, comp, on_cycle, size, cycle, zero)


def cyclic_counts(d: GraphDecomposition) -> tuple[int, int]:
    """(total cyclic points, longest cycle)."""
    return int(d.comp_cycle.sum()), int(d.comp_cycle.max())


# Cycle statistics without component labels. Leaves are peeled off in
# Kahn order; whatever survives lies on a cycle. The peeling loop touches
# memory in an order the CPU can overlap, unlike the dependent walks of
# _decompose_kernel, and is about five times faster for p near 10**6.


@functools.lru_cache(maxsize=4)
def _root_counts(p: int) -> np.ndarray:
    # r[z] = #{x : x^2 = z}; the in-degree of y in G_a is r[y - a]
    r = np.zeros(p, dtype=np.int8)
    np.add.at(r, np.arange(p, dtype=np.int64) ** 2 % p, 1)
    r.setflags(write=False)
    return r


@numba.njit(cache=True, nogil=True, inline="always")
def _step(x, a, p, invp):
    # x*x + a mod p without an integer division; the float quotient is off by at most one
    v = x * x + a
    y = v - np.int64(v * invp) * p
    while y < 0:
        y += p
    while y >= p:
        y -= p
    return y


@numba.njit(cache=True, nogil=True)
def _cycle_profile_kernel(roots, a):
    p = roots.shape[0]
    invp = 1.0 / p
    indeg = np.empty(p, dtype=np.int8)
    indeg[a:] = roots[: p - a]
    indeg[:a] = roots[p - a :]
    queue = np.empty(p, dtype=np.int64)
    n = 0
    # branch-free pushes: whether a node joins the queue is a coin flip
    for y in range(p):
        queue[n] = y
        n += indeg[y] == 0
    h = 0
    while h < n:
        y = _step(queue[h], a, p, invp)
        h += 1
        d = indeg[y] - 1
        indeg[y] = d
        queue[n] = y
        n += d == 0
    longest = 0
    cycles = 0
    for s in range(p):
        if indeg[s] > 0:
            x = s
            m = 0
            while indeg[x] > 0:
                indeg[x] = 0
                m += 1
                x = _step(x, a, p, invp)
            cycles += 1
            if m > longest:
                longest = m
    return p - n, longest, cycles


def cycle_profile(ctx: FieldCtx, a: int) -> tuple[int, int, int]:
    """(C_a, c_a, number of cycles) of G_a; connected iff the last is 1."""
    check_traversable(ctx)
    return _cycle_profile_kernel(_root_counts(ctx.p), a % ctx.p)


@numba.njit(cache=True, nogil=True)
def reverse_adjacency(p, a):
    """Predecessor lists as (start, preds): preds[start[v]:start[v+1]] -> v.

    Counting sort on successors; predecessors of each node come out in
    increasing order.
    """
    start = np.zeros(p + 1, dtype=np.int64)
    for x in range(p):
        start[(x * x + a) % p + 1] += 1
    for v in range(p):
        start[v + 1] += start[v]
    fill = start[:p].copy()
    preds = np.empty(p, dtype=np.int64)
    for x in range(p):
        v = (x * x + a) % p
        preds[fill[v]] = x
        fill[v] += 1
    return start, preds


@numba.njit(cache=True, nogil=True)
def _tree_kernel(p, a, on_cycle, start, preds):
    n_trees = 0
    for v in range(p):
        if on_cycle[v]:
            n_trees += 1
    anchor = np.empty(n_trees, dtype=np.int64)
    size = np.empty(n_trees, dtype=np.int64)
    internal = np.empty(n_trees, dtype=np.int64)
    height = np.empty(n_trees, dtype=np.int64)
    has_zero = np.empty(n_trees, dtype=np.bool_)
    queue = np.empty(p, dtype=np.int64)
    level = np.zeros(p, dtype=np.int64)
    t = 0
    for v in range(p):
        if not on_cycle[v]:
            continue
        w = -1
        for k in range(start[v], start[v + 1]):
            if not on_cycle[preds[k]]:
                w = preds[k]
        if w < 0:
            continue  # only node a lacks an off-cycle predecessor
        head = 0
        tail = 1
        queue[0] = w
        level[w] = 0
        n_int = 0
        h = 0
        z = False
        while head < tail:
            u = queue[head]
            head += 1
            if u == 0:
                z = True
            if level[u] > h:
                h = level[u]
            lo = start[u]
            hi = start[u + 1]
            if hi > lo:
                n_int += 1
            for k in range(lo, hi):
                c = preds[k]
                level[c] = level[u] + 1
                queue[tail] = c
                tail += 1
        anchor[t] = v
        size[t] = tail
        internal[t] = n_int
        height[t] = h
        has_zero[t] = z
        t += 1
    return anchor[:t], size[:t], internal[:t], height[:t], has_zero[:t]


def tree_arrays(ctx: FieldCtx, a: int, d: GraphDecomposition):
    """Columns (anchor, size, internal, height, contains_zero) of all trees."""
    a = _matching(ctx, a, d)
    start, preds = reverse_adjacency(ctx.p, a)
    return _tree_kernel(ctx.p, a, d.on_cycle, start, preds)


def extract_trees(ctx: FieldCtx, a: int, d: GraphDecomposition) -> list[TreeRecord]:
    """One record per binary tree hanging off a cyclic node other than a.

    The root of each tree is the cyclic node's unique off-cycle predecessor;
    height counts edges, so a lone root has height 0.
    """
    cols = tree_arrays(ctx, a, d)
    return [
        TreeRecord(int(s), int(i), int(h), bool(z), int(v))
        for v, s, i, h, z in zip(*cols)
    ]


# Canonical hashing. Every node gets a 128-bit value (two uint64 lanes)
# computed from its off-cycle predecessors, sorted; every cycle takes the
# least rotation of its node values; the graph digest is blake2b over the
# sorted component values.

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SEED_HI = np.uint64(0x243F6A8885A308D3)
_SEED_LO = np.uint64(0x13198A2E03707344)
_SEED_CYC = np.uint64(0xA4093822299F31D0)


@numba.njit(cache=True, nogil=True, inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True, nogil=True, inline="always")
def _absorb(h, w):
    return _mix((h ^ w) + _GOLDEN)


@numba.njit(cache=True, nogil=True, inline="always")
def _less(h1, l1, h2, l2):
    return h1 < h2 or (h1 == h2 and l1 < l2)


@numba.njit(cache=True, nogil=True)
def _node_hashes(p, a, on_cycle, start, preds):
    hi = np.zeros(p, dtype=np.uint64)
    lo = np.zeros(p, dtype=np.uint64)
    # BFS outward from the cycles over off-cycle predecessors, then fill
    # values in reverse so children are always ready before parents
    order = np.empty(p, dtype=np.int64)
    n = 0
    for v in range(p):
        if on_cycle[v]:
            order[n] = v
            n += 1
    head = 0
    while head < n:
        u = order[head]
        head += 1
        for k in range(start[u], start[u + 1]):
            c = preds[k]
            if not on_cycle[c]:
                order[n] = c
                n += 1
    for idx in range(n - 1, -1, -1):
        u = order[idx]
        nch = 0
        c1 = -1
        c2 = -1
        for k in range(start[u], start[u + 1]):
            c = preds[k]
            if on_cycle[c]:
                continue
            if nch == 0:
                c1 = c
            else:
                c2 = c
            nch += 1
        if nch == 2 and _less(hi[c2], lo[c2], hi[c1], lo[c1]):
            c1, c2 = c2, c1
        tag = np.uint64(nch + 1)
        h = _SEED_HI ^ tag
        l = _SEED_LO ^ tag
        if nch >= 1:
            h = _absorb(_absorb(h, hi[c1]), lo[c1])
            l = _absorb(_absorb(l, lo[c1]), hi[c1])
        if nch == 2:
            h = _absorb(_absorb(h, hi[c2]), lo[c2])
            l = _absorb(_absorb(l, lo[c2]), hi[c2])
        hi[u] = _mix(h)
        lo[u] = _mix(l)
    return hi, lo


@numba.njit(cache=True, nogil=True)
def _least_rotation(sh, sl):
    n = sh.shape[0]
    i = 0
    j = 1
    k = 0
    while i < n and j < n and k < n:
        x = (i + k) % n
        y = (j + k) % n
        if sh[x] == sh[y] and sl[x] == sl[y]:
            k += 1
            continue
        if _less(sh[y], sl[y], sh[x], sl[x]):
            i = i + k + 1
        else:
            j = j + k + 1
        if i == j:
            j += 1
        k = 0
    return min(i, j)


@numba.njit(cache=True, nogil=True)
def _component_hashes(p, a, on_cycle, comp, ncomp, hi, lo):
    out_hi = np.zeros(ncomp, dtype=np.uint64)
    out_lo = np.zeros(ncomp, dtype=np.uint64)
    done = np.zeros(ncomp, dtype=np.bool_)
    sh = np.empty(p, dtype=np.uint64)
    sl = np.empty(p, dtype=np.uint64)
    for v in range(p):
        if not on_cycle[v] or done[comp[v]]:
            continue
        c = comp[v]
        done[c] = True
        n = 0
        y = v
        while True:
            sh[n] = hi[y]
            sl[n] = lo[y]
            n += 1
            y = (y * y + a) % p
            if y == v:
                break
        r = _least_rotation(sh[:n], sl[:n])
        h = _absorb(_SEED_CYC, np.uint64(n))
        l = _absorb(_SEED_CYC ^ _GOLDEN, np.uint64(n))
        for t in range(n):
            q = (r + t) % n
            h = _absorb(_absorb(h, sh[q]), sl[q])
            l = _absorb(_absorb(l, sl[q]), sh[q])
        out_hi[c] = h
        out_lo[c] = l
    return out_hi, out_lo


def component_hashes(ctx: FieldCtx, a: int, d: GraphDecomposition) -> list[tuple[int, int]]:
    """Isomorphism-invariant 128-bit value of every component, sorted."""
    a = _matching(ctx, a, d)
    start, preds = reverse_adjacency(ctx.p, a)
    hi, lo = _node_hashes(ctx.p, a, d.on_cycle, start, preds)
    ch, cl = _component_hashes(ctx.p, a, d.on_cycle, d.component_id, d.n_components, hi, lo)
    return sorted(zip(ch.tolist(), cl.tolist()))


def canonical_hash(ctx: FieldCtx, a: int, d: GraphDecomposition) -> bytes:
    """16-byte digest, equal for isomorphic functional graphs."""
    h = hashlib.blake2b(digest_size=16, person=b"quadgraph-iso")
    for hi, lo in component_hashes(ctx, a, d):
        h.update(hi.to_bytes(8, "big"))
        h.update(lo.to_bytes(8, "big"))
    return h.digest()
