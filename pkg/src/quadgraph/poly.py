"""Dense univariate polynomials over F_p.

Coefficients are stored in ascending degree order with no trailing zeros;
the zero polynomial has an empty coefficient tuple. The generic path uses
Python ints and works for any modulus the field module accepts. Moduli
below 2**31 additionally get numba kernels over int64 arrays (products of
two residues stay below 2**62), which is what the connectivity pretest runs
on when sweeping every parameter of a prime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .field import FieldCtx, inv

DEFAULT_DEPTH_CAP = 25
FAST_MODULUS_LIMIT = 1 << 31


class PolyError(ValueError):
    pass


class DepthTooLarge(PolyError):
    pass


class BothZero(PolyError):
    pass


class InexactDivision(ArithmeticError):
    pass


def _trim(coeffs) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class Poly:
    ctx: FieldCtx
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.ctx.p
        object.__setattr__(self, "coeffs", _trim([c % p for c in self.coeffs]))

    @classmethod
    def _raw(cls, ctx: FieldCtx, coeffs) -> "Poly":
        # coeffs already canonical and trimmed
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def x(cls, ctx: FieldCtx) -> "Poly":
        return cls._raw(ctx, (0, 1))

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "Poly":
        return cls(ctx, (c,))

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def degree(self) -> int:
        """Degree, with -1 standing in for the zero polynomial's -infinity."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __repr__(self):
        if not self.coeffs:
            return f"Poly(0 mod {self.p})"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return f"Poly({' + '.join(terms)} mod {self.p})"

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ctx.p != self.ctx.p:
            raise ValueError("polynomials over different fields")
        return other

    def __add__(self, other: "Poly") -> "Poly":
        if self._check(other) is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Poly._raw(self.ctx, _trim(out))

    def __neg__(self) -> "Poly":
        p = self.p
        return Poly._raw(self.ctx, [(-c) % p for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if isinstance(other, int):
            return self.scale(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.ctx, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        p = self.p
        return Poly._raw(self.ctx, _trim([c % p for c in out]))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        p = self.p
        c %= p
        if c == 0:
            return Poly._raw(self.ctx, ())
        return Poly._raw(self.ctx, [x * c % p for x in self.coeffs])

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(inv(self.lead(), self.ctx))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(r) - 1 < db:
            return Poly._raw(self.ctx, ()), self
        lead_inv = inv(b[-1], self.ctx)
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * lead_inv % p
            if c == 0:
                continue
            q[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % p
        return Poly._raw(self.ctx, _trim(q)), Poly._raw(self.ctx, _trim(r[:db]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        p = self.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def compose_square_plus(self, a: int) -> "Poly":
        """Return self**2 + a."""
        sq = self * self
        return sq + Poly.const(self.ctx, a)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _check_depth(n: int, cap: int):
    if n < 1:
        raise ValueError(f"iteration depth must be >= 1, got {n}")
    if n > cap:
        raise DepthTooLarge(f"depth {n} exceeds cap {cap}")


def iterate_poly(a: int, n: int, ctx: FieldCtx, depth_cap: int = DEFAULT_DEPTH_CAP) -> Poly:
    """The n-th iterate of X^2 + a, a monic polynomial of degree 2**n."""
    _check_depth(n, depth_cap)
    f = Poly(ctx, (a, 0, 1))
    for _ in range(n - 1):
        f = f.compose_square_plus(a)
    return f


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    if f.is_zero() and g.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def frobenius_power(modulus: Poly) -> Poly:
    """X^p reduced mod a monic polynomial, by square-and-multiply."""
    ctx = modulus.ctx
    p = ctx.p
    x = Poly.x(ctx)
    r = Poly.const(ctx, 1)
    for bit in bin(p)[2:]:
        r = (r * r) % modulus
        if bit == "1":
            r = (r * x) % modulus
    return r


def frobenius_gcd(a: int, i: int, ctx: FieldCtx, depth_cap: int = DEFAULT_DEPTH_CAP) -> Poly:
    """gcd(X^p - X, f_a^(i)(X) - X), monic.

    Its degree is the number of x in F_p with f_a^(i)(x) = x.
    """
    _check_depth(i, depth_cap)
    if ctx.p < FAST_MODULUS_LIMIT:
        coeffs = _frobenius_gcd_i64(ctx.p, a % ctx.p, i)
        return Poly._raw(ctx, [int(c) for c in coeffs])
    return frobenius_gcd_generic(a, i, ctx, depth_cap)


def frobenius_gcd_generic(a: int, i: int, ctx: FieldCtx, depth_cap: int = DEFAULT_DEPTH_CAP) -> Poly:
    """Python-int path of frobenius_gcd, valid for every supported modulus."""
    _check_depth(i, depth_cap)
    x = Poly.x(ctx)
    g = iterate_poly(a, i, ctx, depth_cap) - x
    h = frobenius_power(g)
    return poly_gcd(g, h - x)


def dynatomic(a: int, ell: int, ctx: FieldCtx, depth_cap: int = DEFAULT_DEPTH_CAP) -> Poly:
    """Mobius product of (f_a^(r) - X) over r dividing ell."""
    _check_depth(ell, depth_cap)
    x = Poly.x(ctx)
    num = Poly.const(ctx, 1)
    den = Poly.const(ctx, 1)
    f = Poly(ctx, (a, 0, 1))
    for r in range(1, ell + 1):
        if r > 1:
            f = f.compose_square_plus(a)
        if ell % r:
            continue
        mu = mobius(ell // r)
        if mu == 1:
            num = num * (f - x)
        elif mu == -1:
            den = den * (f - x)
    q, rem = divmod(num, den)
    if not rem.is_zero():
        raise InexactDivision(f"dynatomic({a}, {ell}) mod {ctx.p} left a remainder")
    return q


def dynatomic_degree(ell: int) -> int:
    return sum(mobius(ell // r) * 2**r for r in divisors(ell))


# int64 kernels for p < 2**31. Polynomials are ascending coefficient arrays.


@numba.njit(cache=True, nogil=True)
def _mulmod_i64(x, y, g, p):
    """(x * y) mod g for deg x, deg y < deg g, g monic."""
    d = g.shape[0] - 1
    prod = np.zeros(2 * d - 1 if d > 0 else 1, dtype=np.int64)
    for i in range(x.shape[0]):
        xi = x[i]
        if xi == 0:
            continue
        for j in range(y.shape[0]):
            prod[i + j] = (prod[i + j] + xi * y[j]) % p
    return _reduce_i64(prod, g, p)


@numba.njit(cache=True, nogil=True)
def _reduce_i64(r, g, p):
    d = g.shape[0] - 1
    for k in range(r.shape[0] - 1, d - 1, -1):
        c = r[k]
        if c == 0:
            continue
        off = k - d
        for j in range(d):
            r[off + j] = (r[off + j] - c * g[j]) % p
        r[k] = 0
    out = np.zeros(d, dtype=np.int64)
    m = min(d, r.shape[0])
    out[:m] = r[:m]
    return out


@numba.njit(cache=True, nogil=True)
def _powmod_int(b, e, p):
    r = 1
    b %= p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@numba.njit(cache=True, nogil=True)
def degree_i64(v):
    n = v.shape[0] - 1
    while n >= 0 and v[n] == 0:
        n -= 1
    return n


@numba.njit(cache=True, nogil=True)
def square_plus_i64(f, a, p):
    """f**2 + a."""
    d = f.shape[0] - 1
    sq = np.zeros(2 * d + 1, dtype=np.int64)
    for i in range(d + 1):
        fi = f[i]
        if fi == 0:
            continue
        for j in range(d + 1):
            sq[i + j] = (sq[i + j] + fi * f[j]) % p
    sq[0] = (sq[0] + a) % p
    return sq


@numba.njit(cache=True, nogil=True)
def _iterate_i64(p, a, n):
    f = np.zeros(3, dtype=np.int64)
    f[0] = a
    f[2] = 1
    for _ in range(n - 1):
        f = square_plus_i64(f, a, p)
    return f


@numba.njit(cache=True, nogil=True)
def _gcd_i64(u, v, p):
    """Monic gcd of two coefficient arrays (trailing zeros allowed)."""
    a = u.copy()
    b = v.copy()
    da = degree_i64(a)
    db = degree_i64(b)
    while db >= 0:
        # a <- a mod b
        binv = _powmod_int(b[db], p - 2, p)
        for k in range(da, db - 1, -1):
            c = a[k] * binv % p
            if c == 0:
                continue
            off = k - db
            for j in range(db + 1):
                a[off + j] = (a[off + j] - c * b[j]) % p
        da = degree_i64(a)
        a, b = b, a
        da, db = db, da
    out = np.zeros(da + 1, dtype=np.int64)
    if da < 0:
        return out
    linv = _powmod_int(a[da], p - 2, p)
    for k in range(da + 1):
        out[k] = a[k] * linv % p
    return out


@numba.njit(cache=True, nogil=True)
def frobenius_gcd_from_iterate(f, p):
    # g = f - X, monic of degree d >= 2
    g = f.copy()
    g[1] = (g[1] - 1) % p
    d = g.shape[0] - 1
    r = np.zeros(d, dtype=np.int64)
    r[0] = 1
    xpoly = np.zeros(2, dtype=np.int64)
    xpoly[1] = 1
    nbits = 0
    e = p
    while e:
        nbits += 1
        e >>= 1
    for b in range(nbits - 1, -1, -1):
        r = _mulmod_i64(r, r, g, p)
        if (p >> b) & 1:
            # multiply by X: shift up one and reduce
            s = np.zeros(d + 1, dtype=np.int64)
            s[1:] = r
            r = _reduce_i64(s, g, p)
    h = np.zeros(max(d, 2), dtype=np.int64)
    h[: r.shape[0]] = r
    h[1] = (h[1] - 1) % p
    return _gcd_i64(g, h, p)


@numba.njit(cache=True, nogil=True)
def _frobenius_gcd_i64(p, a, i):
    return frobenius_gcd_from_iterate(_iterate_i64(p, a, i), p)


@numba.njit(cache=True, nogil=True)
def frobenius_degrees_i64(p, a, depth):
    """deg gcd(X^p - X, f_a^(i) - X) for i = 1..depth, as an int64 array."""
    out = np.zeros(depth, dtype=np.int64)
    f = _iterate_i64(p, a, 1)
    for i in range(depth):
        if i:
            f = square_plus_i64(f, a, p)
        out[i] = degree_i64(frobenius_gcd_from_iterate(f, p))
    return out
