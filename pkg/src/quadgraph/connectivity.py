"""Connectivity of G_a: gcd pretest on small cycles, then a rigorous traversal.

The pretest looks at g_i = gcd(X^p - X, f_a^(i)(X) - X) for i = 1..L. The
degree of g_i counts the points whose period divides i, so more than i of
them, or two separate small cycles, certify that G_a has several
components. Whatever survives is settled by walking the graph until a
second cycle turns up or every node has been seen.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .field import FieldCtx, inv
from .graph import check_traversable, decompose
from .poly import DepthTooLarge, frobenius_gcd

DEFAULT_DEPTH = 5
MAX_PRETEST_DEPTH = 20


class Outcome(enum.Enum):
    DISCONNECTED = "disconnected"
    ONE_SMALL_CYCLE = "one_small_cycle"
    NO_SMALL_CYCLE = "no_small_cycle"


@dataclass(frozen=True)
class PretestVerdict:
    outcome: Outcome
    cycles_found: int
    degrees: tuple[tuple[int, int], ...]
    cycle_length: int | None = None

    @property
    def disconnected(self) -> bool:
        return self.outcome is Outcome.DISCONNECTED


def pretest(ctx: FieldCtx, a: int, L: int = DEFAULT_DEPTH) -> PretestVerdict:
    if not 1 <= L <= MAX_PRETEST_DEPTH:
        raise DepthTooLarge(f"pretest depth must be in 1..{MAX_PRETEST_DEPTH}, got {L}")
    a %= ctx.p
    cycles = 0
    length = None
    degrees = []
    for i in range(1, L + 1):
        d = frobenius_gcd(a, i, ctx).degree
        degrees.append((i, d))
        if i == 1:
            if d == 2:
                return PretestVerdict(Outcome.DISCONNECTED, cycles, tuple(degrees))
            if d == 1:
                cycles, length = 1, 1
            continue
        if d > i:
            return PretestVerdict(Outcome.DISCONNECTED, cycles, tuple(degrees))
        if d == i:
            cycles += 1
            length = i
        if cycles > 1:
            return PretestVerdict(Outcome.DISCONNECTED, cycles, tuple(degrees))
    if cycles == 1:
        return PretestVerdict(Outcome.ONE_SMALL_CYCLE, 1, tuple(degrees), length)
    return PretestVerdict(Outcome.NO_SMALL_CYCLE, 0, tuple(degrees))


@numba.njit(cache=True, nogil=True)
def _connected_kernel(p, a):
    stamp = np.zeros(p, dtype=np.int64)
    seen = 0
    cycles = 0
    for s in range(p):
        if stamp[s] != 0:
            continue
        tag = s + 1
        x = s
        while stamp[x] == 0:
            stamp[x] = tag
            seen += 1
            x = (x * x + a) % p
        if stamp[x] == tag:
            cycles += 1
            if cycles > 1:
                return False
        if seen == p:
            break
    return cycles == 1


def oracle_connected(ctx: FieldCtx, a: int) -> bool:
    """Traversal answer, stopping at the second cycle or once all nodes are seen."""
    check_traversable(ctx)
    return bool(_connected_kernel(ctx.p, a % ctx.p))


def is_connected(ctx: FieldCtx, a: int, L: int = DEFAULT_DEPTH) -> bool:
    check_traversable(ctx)
    if pretest(ctx, a, L).disconnected:
        return False
    return oracle_connected(ctx, a)


def single_one_cycle_scan(ctx: FieldCtx, shortcut: bool = True) -> int | None:
    """The a (necessarily 1/4) whose graph is connected around one fixed point, if any.

    For p = 5, 11 mod 12, -3 is a non-residue, so -1/2 has no preimage and
    G_{1/4} cannot be connected; with ``shortcut`` that case returns at once.
    """
    p = ctx.p
    if shortcut and p % 12 in (5, 11):
        return None
    a = inv(4, ctx)
    d = decompose(ctx, a)
    if d.connected and int(d.comp_cycle[0]) == 1:
        return a
    return None


def _chunks(p: int, parts: int) -> list[tuple[int, int]]:
    step = -(-p // parts)
    return [(lo, min(lo + step, p)) for lo in range(0, p, step)]


def connected_set(ctx: FieldCtx, L: int = DEFAULT_DEPTH, parallelism: int = 1) -> list[int]:
    """Sorted list of every a with G_a connected."""
    check_traversable(ctx)

    def work(bounds):
        lo, hi = bounds
        return [a for a in range(lo, hi) if is_connected(ctx, a, L)]

    parallelism = max(1, parallelism)
    ranges = _chunks(ctx.p, parallelism * 4)
    if parallelism == 1:
        parts = [work(r) for r in ranges]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            parts = list(pool.map(work, ranges))
    return [a for part in parts for a in part]


def count_connected(ctx: FieldCtx, L: int = DEFAULT_DEPTH, parallelism: int = 1) -> int:
    """I_p, the number of a in F_p whose graph is connected."""
    return len(connected_set(ctx, L, parallelism))
