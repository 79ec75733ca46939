"""Property tests over random primes and parameters."""

from hypothesis import given, settings, strategies as st

from quadgraph.connectivity import is_connected, pretest
from quadgraph.field import FieldCtx, inv, legendre, odd_primes, sqrt_mod
from quadgraph.graph import cyclic_counts, decompose, extract_trees
from quadgraph.oracle import naive_decompose, naive_root_count
from quadgraph.poly import Poly, dynatomic, frobenius_gcd, iterate_poly, poly_gcd

PRIMES = odd_primes(3, 3000)
primes = st.sampled_from(PRIMES)
small_primes = st.sampled_from([p for p in PRIMES if p < 200])


@st.composite
def prime_and_param(draw, ps=primes):
    p = draw(ps)
    return p, draw(st.integers(0, p - 1))


@given(prime_and_param(), st.integers())
def test_inverse(pa, x):
    p, _ = pa
    ctx = FieldCtx(p)
    if x % p:
        assert x * inv(x, ctx) % p == 1


@given(prime_and_param(), st.integers())
def test_sqrt_consistent_with_legendre(pa, x):
    p, _ = pa
    ctx = FieldCtx(p)
    roots = sqrt_mod(x, ctx)
    assert all(r * r % p == x % p for r in roots)
    assert len(roots) == 1 + legendre(x, ctx)


@st.composite
def polys(draw, ctx, max_deg=8):
    return Poly(ctx, draw(st.lists(st.integers(0, ctx.p - 1), max_size=max_deg + 1)))


@given(st.data())
def test_division_identity(data):
    ctx = FieldCtx(data.draw(small_primes))
    f = data.draw(polys(ctx))
    g = data.draw(polys(ctx))
    if g.is_zero():
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(st.data())
def test_gcd_divides_both(data):
    ctx = FieldCtx(data.draw(small_primes))
    f, g = data.draw(polys(ctx)), data.draw(polys(ctx))
    if f.is_zero() and g.is_zero():
        return
    h = poly_gcd(f, g)
    assert h.lead() == 1
    assert (f % h).is_zero() and (g % h).is_zero()


@settings(max_examples=40)
@given(prime_and_param(small_primes), st.integers(1, 5))
def test_frobenius_degree_counts_roots(pa, i):
    p, a = pa
    ctx = FieldCtx(p)
    g = frobenius_gcd(a, i, ctx)
    assert g.degree == naive_root_count(iterate_poly(a, i, ctx) - Poly.x(ctx), ctx)


@settings(max_examples=40)
@given(prime_and_param(small_primes), st.integers(1, 5))
def test_dynatomic_product(pa, n):
    p, a = pa
    ctx = FieldCtx(p)
    prod = Poly.const(ctx, 1)
    for ell in range(1, n + 1):
        if n % ell == 0:
            prod = prod * dynatomic(a, ell, ctx)
    assert prod == iterate_poly(a, n, ctx) - Poly.x(ctx)


@settings(max_examples=60, deadline=None)
@given(prime_and_param())
def test_decomposition_invariants(pa):
    p, a = pa
    ctx = FieldCtx(p)
    d = decompose(ctx, a)
    assert int(d.comp_size.sum()) == p
    C, c = cyclic_counts(d)
    assert C == int(d.comp_cycle.sum()) and c == int(d.comp_cycle.max())
    # exactly one component has odd size: the one holding 0
    odd = [z for s, z in zip(d.comp_size, d.comp_zero) if s % 2]
    assert odd == [True]
    trees = extract_trees(ctx, a, d)
    assert len(trees) == C - int(bool(d.on_cycle[a]))
    assert sum(t.size for t in trees) == p - C


@settings(max_examples=60, deadline=None)
@given(prime_and_param())
def test_matches_oracle(pa):
    p, a = pa
    ctx = FieldCtx(p)
    d = decompose(ctx, a)
    nd = naive_decompose(ctx, a)
    assert sorted(zip(d.comp_size.tolist(), d.comp_cycle.tolist())) == sorted(
        (x.size, x.cycle_len) for x in nd.components)
    assert (d.on_cycle == nd.on_cycle).all()
    assert is_connected(ctx, a) == nd.connected


@settings(max_examples=60, deadline=None)
@given(prime_and_param(), st.integers(1, 8))
def test_pretest_sound(pa, L):
    p, a = pa
    ctx = FieldCtx(p)
    if pretest(ctx, a, L).disconnected:
        assert not decompose(ctx, a).connected
