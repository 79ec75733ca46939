from quadgraph.field import FieldCtx
from quadgraph.graph import decompose
from quadgraph.oracle import (
    naive_connected, naive_cycle_census, naive_decompose, naive_iso_class_count, naive_root_count,
)
from quadgraph.poly import Poly


def test_naive_decompose_matches_fast_p5():
    nd = naive_decompose(FieldCtx(5), 4)
    assert nd.partition() == frozenset({frozenset({0, 1, 4}), frozenset({2, 3})})
    d = decompose(FieldCtx(5), 4)
    assert sorted(c.size for c in nd.components) == sorted(d.comp_size.tolist())


def test_zero_isolated_when_minus_one_nonresidue():
    nd = naive_decompose(FieldCtx(7), 0)
    zero = [c for c in nd.components if c.contains_zero]
    assert len(zero) == 1 and zero[0].size == 1


def test_naive_decompose_connected_p3():
    nd = naive_decompose(FieldCtx(3), 1)
    assert [c.size for c in nd.components] == [3]
    assert naive_connected(FieldCtx(3), 1)


def test_naive_root_count():
    ctx = FieldCtx(5)
    assert naive_root_count(Poly(ctx, (1, -1, 1)), ctx) == 0
    assert naive_root_count(Poly(ctx, (3, -1, 1)), ctx) == 2
    xp = Poly(ctx, (0, -1) + (0,) * 3 + (1,))  # X^5 - X
    assert naive_root_count(xp, ctx) == 5


def test_naive_cycle_census():
    ctx = FieldCtx(5)
    assert naive_cycle_census(ctx, 1, 5) == [0, 0, 1, 0, 0]
    assert naive_cycle_census(ctx, 3, 5) == [2, 0, 0, 0, 0]
    ctx = FieldCtx(101)
    assert sum(naive_cycle_census(ctx, a, 1)[0] for a in range(101)) == 101


def test_naive_iso_counts():
    assert [naive_iso_class_count(FieldCtx(p)) for p in (3, 5, 7)] == [3, 5, 7]
    assert naive_iso_class_count(FieldCtx(17)) != 17
