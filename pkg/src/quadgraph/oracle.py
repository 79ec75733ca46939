"""Brute-force reference computations for small p.

Nothing here shares code with the graph engine. Decomposition works by
pointer doubling: composing the successor map with itself ceil(log2 p)
times yields f^N for some N >= p, and f^N sends every node onto its cycle.
The cyclic nodes are exactly the image of f^N, and a second doubling pass
tracks the running minimum along each orbit, so every node can be labelled
by the smallest node of the cycle it falls into.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .field import FieldCtx, ModulusTooLarge
from .poly import Poly

ORACLE_MAX_P = 10**6


def _guard(ctx: FieldCtx):
    if ctx.p > ORACLE_MAX_P:
        raise ModulusTooLarge(f"oracle is limited to p <= {ORACLE_MAX_P}, got {ctx.p}")


@dataclass(frozen=True)
class NaiveComponent:
    label: int  # smallest cyclic node
    size: int
    cycle_len: int
    contains_zero: bool


@dataclass(frozen=True)
class NaiveDecomposition:
    p: int
    a: int
    label: np.ndarray
    on_cycle: np.ndarray
    components: tuple[NaiveComponent, ...]

    def partition(self) -> frozenset:
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(self.label.tolist()):
            groups.setdefault(lab, []).append(x)
        return frozenset(frozenset(g) for g in groups.values())

    @property
    def connected(self) -> bool:
        return len(self.components) == 1


def successor_table(ctx: FieldCtx, a: int) -> np.ndarray:
    x = np.arange(ctx.p, dtype=np.int64)
    return (x * x + a) % ctx.p


def naive_decompose(ctx: FieldCtx, a: int) -> NaiveDecomposition:
    _guard(ctx)
    p = ctx.p
    a %= p
    succ = successor_table(ctx, a)
    jump = succ.copy()
    steps = 1
    while steps < p:
        jump = jump[jump]
        steps *= 2
    on_cycle = np.zeros(p, dtype=bool)
    on_cycle[jump] = True

    # orbit minimum over a window of `steps` >= p consecutive iterates
    low = np.arange(p, dtype=np.int64)
    hop = succ.copy()
    window = 1
    while window < steps:
        low = np.minimum(low, low[hop])
        hop = hop[hop]
        window *= 2
    label = low[jump]

    sizes = Counter(label.tolist())
    cyc = Counter(label[on_cycle].tolist())
    zero_label = int(label[0])
    comps = tuple(
        NaiveComponent(lab, sizes[lab], cyc[lab], lab == zero_label) for lab in sorted(sizes)
    )
    return NaiveDecomposition(p, a, label, on_cycle, comps)


def naive_connected(ctx: FieldCtx, a: int) -> bool:
    return naive_decompose(ctx, a).connected


def naive_root_count(poly: Poly, ctx: FieldCtx) -> int:
    """Number of distinct x in F_p with poly(x) = 0, by evaluating everywhere."""
    _guard(ctx)
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly.coeffs):
        acc = (acc * x + c) % p
    if poly.is_zero():
        return p
    return int(np.count_nonzero(acc == 0))


def naive_cycle_census(ctx: FieldCtx, a: int, max_k: int) -> list[int]:
    """counts[k - 1] = number of cycles of length k in G_a, for k <= max_k."""
    counts = [0] * max_k
    for comp in naive_decompose(ctx, a).components:
        if comp.cycle_len <= max_k:
            counts[comp.cycle_len - 1] += 1
    return counts


def naive_canonical_form(ctx: FieldCtx, a: int) -> str:
    """Exact isomorphism invariant of G_a as a string.

    Each node gets the parenthesised sorted multiset of its non-cyclic
    predecessors' codes; each cycle is the least rotation of its node codes;
    the graph is the sorted list of cycle codes. Meant for small p only.
    """
    d = naive_decompose(ctx, a)
    p = ctx.p
    succ = successor_table(ctx, d.a).tolist()
    on_cycle = d.on_cycle.tolist()
    preds: list[list[int]] = [[] for _ in range(p)]
    for x in range(p):
        if not on_cycle[x]:
            preds[succ[x]].append(x)

    code: list[str | None] = [None] * p
    for root in range(p):
        if not on_cycle[root]:
            continue
        # iterative post-order over the hanging tree
        stack = [(root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                code[v] = "(" + "".join(sorted(code[u] for u in preds[v])) + ")"
            else:
                stack.append((v, True))
                stack.extend((u, False) for u in preds[v])

    seen = [False] * p
    comps = []
    for start in range(p):
        if not on_cycle[start] or seen[start]:
            continue
        seq = []
        v = start
        while not seen[v]:
            seen[v] = True
            seq.append(code[v])
            v = succ[v]
        rot = min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))
        comps.append("[" + ",".join(rot) + "]")
    return "|".join(sorted(comps))


def naive_iso_class_count(ctx: FieldCtx) -> int:
    return len({naive_canonical_form(ctx, a) for a in range(ctx.p)})
