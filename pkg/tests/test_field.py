import pytest

from quadgraph.field import (
    EvenPrime, FieldCtx, NotPrime, Overflow, inv, is_prime, legendre, make_field, odd_primes, sqrt_mod,
)


def test_make_field():
    assert make_field(31).p == 31
    with pytest.raises(NotPrime):
        make_field(9)
    with pytest.raises(EvenPrime):
        make_field(2)
    with pytest.raises(Overflow):
        make_field(1 << 61)
    with pytest.raises(NotPrime):
        make_field(1)


def test_largest_supported_prime():
    p = (1 << 61) - 1  # Mersenne prime
    assert make_field(p).p == p


def test_inv():
    assert inv(4, FieldCtx(7)) == 2
    assert inv(2, FieldCtx(5)) == 3
    with pytest.raises(ZeroDivisionError):
        inv(0, FieldCtx(5))


def test_legendre():
    assert legendre(-3 % 11, FieldCtx(11)) == -1
    assert legendre(4, FieldCtx(5)) == 1
    assert legendre(0, FieldCtx(13)) == 0


def test_sqrt_mod():
    assert set(sqrt_mod(4, FieldCtx(5))) == {2, 3}
    assert sqrt_mod(2, FieldCtx(5)) == ()
    assert sqrt_mod(8, FieldCtx(11)) == ()
    assert sqrt_mod(0, FieldCtx(11)) == (0,)


@pytest.mark.parametrize("p", [13, 17, 41, 97, 257, 65537, 998244353])
def test_sqrt_tonelli_shanks_branch(p):
    # p = 1 mod 4 exercises Tonelli-Shanks
    ctx = FieldCtx(p)
    for x in range(1, 200):
        roots = sqrt_mod(x, ctx)
        if x % p == 0:
            assert roots == (0,)
        elif legendre(x, ctx) == 1:
            assert len(roots) == 2 and all(r * r % p == x % p for r in roots)
        else:
            assert roots == ()


def test_is_prime_against_sieve():
    N = 20000
    sieve = bytearray([1]) * (N + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(N**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    assert [n for n in range(N + 1) if is_prime(n)] == [n for n in range(N + 1) if sieve[n]]


def test_is_prime_strong_pseudoprimes():
    # composites that fool several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)
    assert is_prime(2**61 - 1)


def test_odd_primes():
    assert odd_primes(1, 20) == [3, 5, 7, 11, 13, 17, 19]
