"""Prime field arithmetic for odd primes below 2**61.

Residues are plain Python ints in [0, p); the context only validates the
modulus and offers the handful of operations the rest of the package needs.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_MODULUS = 1 << 61

# Deterministic for every n < 3.3 * 10**24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class EvenPrime(FieldError):
    pass


class Overflow(FieldError):
    pass


class ModulusTooLarge(FieldError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit n."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed interval [lo, hi]."""
    return [n for n in range(max(lo, 3), hi + 1) if n % 2 and is_prime(n)]


@dataclass(frozen=True)
class FieldCtx:
    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise TypeError(f"modulus must be an int, got {type(p).__name__}")
        if p >= MAX_MODULUS:
            raise Overflow(f"modulus {p} is not below 2**61")
        if p == 2:
            raise EvenPrime("p = 2 is not supported (characteristic must be odd)")
        if p < 3 or not is_prime(p):
            raise NotPrime(f"{p} is not prime")

    def __repr__(self):
        return f"FieldCtx(p={self.p})"

    def reduce(self, x: int) -> int:
        return x % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def neg(self, x: int) -> int:
        return -x % self.p

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def pow(self, x: int, e: int) -> int:
        return pow(x, e, self.p)

    def inv(self, x: int) -> int:
        return inv(x, self)

    def legendre(self, x: int) -> int:
        return legendre(x, self)

    def sqrt(self, x: int) -> tuple[int, ...]:
        return sqrt_mod(x, self)


def make_field(p: int) -> FieldCtx:
    return FieldCtx(p)


def inv(x: int, ctx: FieldCtx) -> int:
    x %= ctx.p
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {ctx.p}")
    return pow(x, ctx.p - 2, ctx.p)


def legendre(x: int, ctx: FieldCtx) -> int:
    """Legendre symbol by Euler's criterion: 0, +1 or -1."""
    p = ctx.p
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(x: int, ctx: FieldCtx) -> tuple[int, ...]:
    """Square roots of x mod p, smaller root first.

    Returns (), (0,) or (r, p - r) with r < p - r.
    """
    p = ctx.p
    x %= p
    if x == 0:
        return (0,)
    if legendre(x, ctx) != 1:
        return ()
    if p % 4 == 3:
        r = pow(x, (p + 1) // 4, p)
    else:
        r = _tonelli_shanks(x, p)
    r = min(r, p - r)
    return (r, p - r)


def _tonelli_shanks(n: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
