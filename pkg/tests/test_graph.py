import numpy as np
import pytest

from quadgraph.field import FieldCtx
from quadgraph.graph import (
    canonical_hash, component_hashes, cyclic_counts, decompose, extract_trees, reverse_adjacency,
)
from quadgraph.oracle import naive_canonical_form


def comps(p, a):
    d = decompose(FieldCtx(p), a)
    return sorted((c.size, c.cycle_len) for c in d.components), d


def test_decompose_p5_a4():
    cs, d = comps(5, 4)
    assert cs == [(2, 1), (3, 2)]
    assert set(np.flatnonzero(d.on_cycle).tolist()) == {0, 3, 4}
    assert d.component_id[0] == d.component_id[1] == d.component_id[4]
    assert d.component_id[2] == d.component_id[3] != d.component_id[0]


def test_decompose_p5_a0():
    cs, d = comps(5, 0)
    assert cs == [(1, 1), (4, 1)]
    assert set(np.flatnonzero(d.on_cycle).tolist()) == {0, 1}


def test_decompose_p31_a12_graph():
    cs, d = comps(31, 12)
    assert cs == [(31, 8)]
    assert d.connected


def test_cyclic_counts():
    ctx = FieldCtx(5)
    assert cyclic_counts(decompose(ctx, 1)) == (3, 3)
    assert cyclic_counts(decompose(ctx, 3)) == (2, 1)
    assert cyclic_counts(decompose(ctx, 4)) == (3, 2)


def test_extract_trees_small():
    ctx = FieldCtx(5)
    t = extract_trees(ctx, 4, decompose(ctx, 4))
    assert sorted((r.size, r.height) for r in t) == [(1, 0), (1, 0)]
    assert sorted(r.anchor_cycle_node for r in t) == [0, 3]

    t = extract_trees(ctx, 0, decompose(ctx, 0))
    assert len(t) == 1
    r = t[0]
    assert (r.size, r.internal, r.height, r.anchor_cycle_node) == (3, 1, 1, 1)


def test_extract_trees_p31_a12_graph():
    # a = 12 sits on the 8-cycle and its only predecessor is 0, also cyclic,
    # so 7 of the 8 cyclic points carry a tree
    ctx = FieldCtx(31)
    d = decompose(ctx, 12)
    C, _ = cyclic_counts(d)
    assert C == 8 and d.on_cycle[12] and d.on_cycle[0]
    t = extract_trees(ctx, 12, d)
    assert len(t) == C - 1 == 7
    assert sum(r.size for r in t) == 31 - C
    # every tree here is a full binary tree: 2 * internal + 1 nodes
    assert all(r.size == 2 * r.internal + 1 for r in t)


def test_tree_with_zero_is_the_defect():
    # the tree holding 0 (when 0 is not cyclic) is the one that is not full binary
    ctx = FieldCtx(101)
    for a in range(1, 101):
        d = decompose(ctx, a)
        for r in extract_trees(ctx, a, d):
            if r.contains_zero:
                assert r.size == 2 * r.internal
            else:
                assert r.size == 2 * r.internal + 1


def test_reverse_adjacency():
    p, a = 13, 5
    start, preds = reverse_adjacency(p, a)
    for y in range(p):
        got = sorted(preds[start[y] : start[y + 1]].tolist())
        assert got == [x for x in range(p) if (x * x + a) % p == y]


def test_mismatched_decomposition_rejected():
    ctx = FieldCtx(31)
    with pytest.raises(ValueError):
        extract_trees(ctx, 3, decompose(ctx, 12))
    with pytest.raises(ValueError):
        canonical_hash(ctx, 3, decompose(ctx, 12))


def test_canonical_hash_deterministic():
    ctx = FieldCtx(1009)
    h = canonical_hash(ctx, 7, decompose(ctx, 7))
    assert len(h) == 16
    assert h == canonical_hash(ctx, 7, decompose(ctx, 7))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29])
def test_hash_classes_match_exact_forms(p):
    ctx = FieldCtx(p)
    by_hash, by_form = {}, {}
    for a in range(p):
        by_hash.setdefault(canonical_hash(ctx, a, decompose(ctx, a)), set()).add(a)
        by_form.setdefault(naive_canonical_form(ctx, a), set()).add(a)
    assert sorted(map(sorted, by_hash.values())) == sorted(map(sorted, by_form.values()))


def test_component_hashes_one_per_component():
    ctx = FieldCtx(101)
    for a in range(101):
        d = decompose(ctx, a)
        assert len(component_hashes(ctx, a, d)) == d.n_components


@pytest.mark.parametrize("p", [3, 5, 7, 31, 1009])
def test_cycle_profile_matches_decompose(p):
    from quadgraph.graph import cycle_profile

    ctx = FieldCtx(p)
    for a in range(p):
        d = decompose(ctx, a)
        assert cycle_profile(ctx, a) == cyclic_counts(d) + (d.n_components,)


def test_step_reduction_near_limit():
    # the division-free successor must agree with exact arithmetic up to p < 2**31
    import random

    from quadgraph.graph import _step

    rng = random.Random(7)
    for p in (2147483647, 2147483629, 1000003, 3):
        invp = 1.0 / p
        for _ in range(2000):
            x, a = rng.randrange(p), rng.randrange(p)
            assert _step(x, a, p, invp) == (x * x + a) % p
        for x in (0, 1, p - 1, p // 2, p // 2 + 1):
            assert _step(x, p - 1, p, invp) == (x * x + p - 1) % p
