"""Sweeps over every a in F_p and the statistics gathered along the way.

A sweep splits 0..p-1 into contiguous ranges, builds one partial
SweepAggregate per range and merges them. Everything stored in an
aggregate is an integer, a set, or a sorted list, so merging is exact and
the final result does not depend on how the range was split or on the order
in which partial results arrive. Real-valued summaries are derived only
when a report is rendered.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from .connectivity import DEFAULT_DEPTH, is_connected
from .field import FieldCtx, ModulusTooLarge
from .graph import TRAVERSAL_LIMIT, canonical_hash, cycle_profile, cyclic_counts, decompose, tree_arrays

log = logging.getLogger(__name__)

GROUPS = ("connected", "cyclic", "cycles", "components", "trees", "extremal", "iso")
HEIGHT_BINS = (50, 100, 500, 1000, 2000, 5000)
EULER_GAMMA = 0.5772156649
CHECKPOINT_FORMAT = 1
DEFAULT_CHUNK = 1 << 16


class CheckpointCorrupt(RuntimeError):
    pass


def special_parameters(p: int) -> frozenset[int]:
    """a = 0 and a = -2, whose graphs are excluded from cyclic-point statistics."""
    return frozenset({0, (-2) % p})


@dataclass(frozen=True)
class SweepConfig:
    p: int
    groups: tuple[str, ...] = GROUPS
    max_k: int | None = None
    pretest_depth: int = DEFAULT_DEPTH
    exclude_special: bool = False  # applies to cycles, components and trees
    parallelism: int = 1
    checkpoint: str | None = None
    resume: bool = False
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        unknown = set(self.groups) - set(GROUPS)
        if unknown:
            raise ValueError(f"unknown statistic groups: {sorted(unknown)}")
        # canonical order keeps the config digest stable
        object.__setattr__(self, "groups", tuple(g for g in GROUPS if g in self.groups))
        if self.max_k is None:
            object.__setattr__(self, "max_k", min(20, self.p - 1))
        if not 1 <= self.max_k < self.p:
            raise ValueError(f"max_k must satisfy 1 <= max_k < p, got {self.max_k}")

    def wants(self, group: str) -> bool:
        return group in self.groups

    @property
    def needs_decomposition(self) -> bool:
        return any(g != "connected" for g in self.groups)

    @property
    def needs_labels(self) -> bool:
        # component labels and cycle marks; cyclic and extremal need only cycle_profile
        return any(g in ("cycles", "components", "trees", "iso") for g in self.groups)

    def digest(self) -> str:
        """Hash of every setting that can change the aggregate."""
        key = {
            "p": self.p,
            "groups": list(self.groups),
            "pretest_depth": self.pretest_depth,
            "exclude_special": self.exclude_special,
            "chunk_size": self.chunk_size,
        }
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()


def _argmax_update(best: int, where: set, value: int, a: int) -> int:
    if value > best:
        where.clear()
        where.add(a)
        return value
    if value == best:
        where.add(a)
    return best


def _argmax_merge(b1: int, s1: set, b2: int, s2: set) -> tuple[int, set]:
    if b1 > b2:
        return b1, set(s1)
    if b2 > b1:
        return b2, set(s2)
    return b1, s1 | s2


@numba.njit(cache=True, nogil=True)
def _bump(hist, values):
    for v in values:
        hist[v] += 1


@numba.njit(cache=True, nogil=True)
def _bin_heights(internal, height, bins, count, total):
    for t in range(internal.shape[0]):
        n = internal[t]
        for b in range(bins.shape[0]):
            if bins[b] == n:
                count[b] += 1
                total[b] += height[t]


def _sparse(arr: np.ndarray) -> list[list[int]]:
    idx = np.flatnonzero(arr)
    return [[int(k), int(arr[k])] for k in idx]


def _dense(pairs, n: int) -> np.ndarray:
    arr = np.zeros(n, dtype=np.int64)
    for k, v in pairs:
        arr[k] = v
    return arr


@dataclass
class SweepAggregate:
    p: int
    a_count: int = 0
    connected: set = field(default_factory=set)
    # cyclic points over a not in {0, -2}; starred over connected a
    cyclic_count: int = 0
    sum_C: int = 0
    sum_c: int = 0
    sum_c_star: int = 0
    max_C: int = -1
    max_c: int = -1
    max_c_star: int = -1
    A: set = field(default_factory=set)
    B: set = field(default_factory=set)
    B_star: set = field(default_factory=set)
    # dense histograms indexed by length / size, length p + 1
    cycle_hist: np.ndarray = None
    comp_hist: np.ndarray = None
    tree_hist: np.ndarray = None
    tree_hist_star: np.ndarray = None
    height_count: np.ndarray = None
    height_total: np.ndarray = None
    iso: set = field(default_factory=set)

    def __post_init__(self):
        for name in ("cycle_hist", "comp_hist", "tree_hist", "tree_hist_star"):
            if getattr(self, name) is None:
                setattr(self, name, np.zeros(self.p + 1, dtype=np.int64))
        for name in ("height_count", "height_total"):
            if getattr(self, name) is None:
                setattr(self, name, np.zeros(len(HEIGHT_BINS), dtype=np.int64))

    @property
    def I_p(self) -> int:
        return len(self.connected)

    def merge(self, other: "SweepAggregate") -> "SweepAggregate":
        if other.p != self.p:
            raise ValueError("cannot merge aggregates for different primes")
        out = SweepAggregate(self.p)
        out.a_count = self.a_count + other.a_count
        out.connected = self.connected | other.connected
        out.cyclic_count = self.cyclic_count + other.cyclic_count
        out.sum_C = self.sum_C + other.sum_C
        out.sum_c = self.sum_c + other.sum_c
        out.sum_c_star = self.sum_c_star + other.sum_c_star
        out.max_C, out.A = _argmax_merge(self.max_C, self.A, other.max_C, other.A)
        out.max_c, out.B = _argmax_merge(self.max_c, self.B, other.max_c, other.B)
        out.max_c_star, out.B_star = _argmax_merge(
            self.max_c_star, self.B_star, other.max_c_star, other.B_star
        )
        for name in (
            "cycle_hist", "comp_hist", "tree_hist", "tree_hist_star",
            "height_count", "height_total",
        ):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        out.iso = self.iso | other.iso
        return out

    def same_as(self, other: "SweepAggregate") -> bool:
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        """Exact, JSON-ready serialization (used for checkpoints)."""
        return {
            "p": self.p,
            "a_count": self.a_count,
            "connected": sorted(self.connected),
            "cyclic_count": self.cyclic_count,
            "sum_C": self.sum_C,
            "sum_c": self.sum_c,
            "sum_c_star": self.sum_c_star,
            "max_C": self.max_C,
            "max_c": self.max_c,
            "max_c_star": self.max_c_star,
            "A": sorted(self.A),
            "B": sorted(self.B),
            "B_star": sorted(self.B_star),
            "cycle_hist": _sparse(self.cycle_hist),
            "comp_hist": _sparse(self.comp_hist),
            "tree_hist": _sparse(self.tree_hist),
            "tree_hist_star": _sparse(self.tree_hist_star),
            "height_count": self.height_count.tolist(),
            "height_total": self.height_total.tolist(),
            "iso": sorted(self.iso),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SweepAggregate":
        p = d["p"]
        agg = cls(p)
        agg.a_count = d["a_count"]
        agg.connected = set(d["connected"])
        for name in ("cyclic_count", "sum_C", "sum_c", "sum_c_star", "max_C", "max_c", "max_c_star"):
            setattr(agg, name, d[name])
        agg.A, agg.B, agg.B_star = set(d["A"]), set(d["B"]), set(d["B_star"])
        for name in ("cycle_hist", "comp_hist", "tree_hist", "tree_hist_star"):
            setattr(agg, name, _dense(d[name], p + 1))
        agg.height_count = np.array(d["height_count"], dtype=np.int64)
        agg.height_total = np.array(d["height_total"], dtype=np.int64)
        agg.iso = set(d["iso"])
        return agg

    # derived statistics

    def cycle_counts(self, max_k: int) -> list[int]:
        return self.cycle_hist[1 : max_k + 1].tolist()

    def component_counts(self, max_k: int) -> list[int]:
        return self.comp_hist[1 : max_k + 1].tolist()

    def components_up_to(self, K: int) -> tuple[int, int]:
        """(even-size, odd-size) component counts with size <= K."""
        h = self.comp_hist[: K + 1]
        return int(h[0::2].sum()), int(h[1::2].sum())

    def intersections(self) -> dict[str, list[int]]:
        return {
            "A_B": sorted(self.A & self.B),
            "A_Bstar": sorted(self.A & self.B_star),
            "B_Bstar": sorted(self.B & self.B_star),
        }

    def height_means(self) -> dict[int, tuple[int, float | None]]:
        out = {}
        for n, cnt, tot in zip(HEIGHT_BINS, self.height_count.tolist(), self.height_total.tolist()):
            out[n] = (cnt, tot / (cnt * 2 * math.sqrt(math.pi * n)) if cnt else None)
        return out

    def report(self, cfg: SweepConfig) -> dict:
        p = self.p
        res: dict = {}
        if cfg.wants("connected"):
            res["connected"] = {"I_p": self.I_p}
        if cfg.wants("cyclic"):
            n = self.cyclic_count
            res["cyclic"] = {
                "graphs": n,
                "sum_C": self.sum_C,
                "sum_c": self.sum_c,
                "sum_c_star": self.sum_c_star,
                "mean_C": round(self.sum_C / n, 3) if n else None,
                "mean_c": round(self.sum_c / n, 3) if n else None,
                "mean_c_star": round(self.sum_c_star / self.I_p, 3) if self.I_p else None,
                "max_C": self.max_C,
                "max_c": self.max_c,
                "max_c_star": self.max_c_star if self.I_p else None,
            }
        if cfg.wants("extremal"):
            inter = self.intersections()
            res["extremal"] = {
                "A": sorted(self.A),
                "B": sorted(self.B),
                "B_star": sorted(self.B_star),
                "A_size": len(self.A),
                "B_size": len(self.B),
                "B_star_size": len(self.B_star),
                "intersections": inter,
                "intersection_sizes": {k: len(v) for k, v in inter.items()},
            }
        if cfg.wants("cycles"):
            res["cycles"] = {
                "max_k": cfg.max_k,
                "C_k": self.cycle_counts(cfg.max_k),
                "total": int(self.cycle_hist.sum()),
            }
        if cfg.wants("components"):
            even_K, odd_K = self.components_up_to(cfg.max_k)
            even_h, odd_h = self.components_up_to((p - 1) // 2)
            even_p, odd_p = self.components_up_to(p)
            res["components"] = {
                "max_k": cfg.max_k,
                "N_k": self.component_counts(cfg.max_k),
                "N_p": even_p + odd_p,
                "N_even_K": even_K,
                "N_odd_K": odd_K,
                "N_even_half": even_h,
                "N_odd_half": odd_h,
                "N_even_p": even_p,
                "N_odd_p": odd_p,
            }
        if cfg.wants("trees"):
            T = int(self.tree_hist.sum())
            Ts = int(self.tree_hist_star.sum())
            res["trees"] = {
                "max_k": cfg.max_k,
                "T_k": self.tree_hist[1 : cfg.max_k + 1].tolist(),
                "T_p": T,
                "T_star_k": self.tree_hist_star[1 : cfg.max_k + 1].tolist(),
                "T_star_p": Ts,
                "one_node_pct": round(100 * int(self.tree_hist[1]) / T, 2) if T else None,
                "one_node_pct_star": round(100 * int(self.tree_hist_star[1]) / Ts, 2) if Ts else None,
                "height_bins": [
                    {"n": n, "trees": cnt, "mean_ratio": None if m is None else round(m, 3)}
                    for n, (cnt, m) in self.height_means().items()
                ],
            }
        if cfg.wants("iso"):
            res["iso"] = {"classes": len(self.iso)}
        return res


def _process_range(ctx: FieldCtx, cfg: SweepConfig, lo: int, hi: int) -> SweepAggregate:
    p = ctx.p
    agg = SweepAggregate(p)
    special = special_parameters(p)
    bins = np.array(HEIGHT_BINS, dtype=np.int64)
    want_cyclic = cfg.wants("cyclic") or cfg.wants("extremal")
    for a in range(lo, hi):
        agg.a_count += 1
        if not cfg.needs_decomposition:
            if is_connected(ctx, a, cfg.pretest_depth):
                agg.connected.add(a)
            continue
        if cfg.needs_labels:
            d = decompose(ctx, a)
            conn = d.connected
            C, c = cyclic_counts(d)
        else:
            C, c, n_cycles = cycle_profile(ctx, a)
            conn = n_cycles == 1
        if conn:
            agg.connected.add(a)
        if want_cyclic:
            if a not in special:
                agg.cyclic_count += 1
                agg.sum_C += C
                agg.sum_c += c
                agg.max_C = _argmax_update(agg.max_C, agg.A, C, a)
                agg.max_c = _argmax_update(agg.max_c, agg.B, c, a)
            if conn:
                agg.sum_c_star += c
                agg.max_c_star = _argmax_update(agg.max_c_star, agg.B_star, c, a)
        include = not (cfg.exclude_special and a in special)
        if include and cfg.wants("cycles"):
            _bump(agg.cycle_hist, d.comp_cycle)
        if include and cfg.wants("components"):
            _bump(agg.comp_hist, d.comp_size)
        if include and cfg.wants("trees"):
            _, size, internal, height, _ = tree_arrays(ctx, a, d)
            _bump(agg.tree_hist, size)
            if conn:
                _bump(agg.tree_hist_star, size)
            _bin_heights(internal, height, bins, agg.height_count, agg.height_total)
        if cfg.wants("iso"):
            agg.iso.add(canonical_hash(ctx, a, d).hex())
    return agg


def _ranges(cfg: SweepConfig) -> list[tuple[int, int]]:
    p = cfg.p
    step = cfg.chunk_size
    if not cfg.checkpoint:
        # no resume grid to respect: split finer so every worker gets work
        step = max(1, min(step, -(-p // (4 * max(1, cfg.parallelism)))))
    return [(lo, min(lo + step, p)) for lo in range(0, p, step)]


def _load_checkpoint(cfg: SweepConfig) -> tuple[SweepAggregate, set]:
    path = Path(cfg.checkpoint)
    try:
        rec = json.loads(path.read_text())
        if rec["format"] != CHECKPOINT_FORMAT:
            raise CheckpointCorrupt(f"unsupported checkpoint format {rec['format']}")
        if rec["p"] != cfg.p or rec["config_digest"] != cfg.digest():
            raise CheckpointCorrupt("checkpoint was written for a different p or configuration")
        agg = SweepAggregate.from_dict(rec["aggregate"])
        done = {tuple(r) for r in rec["completed"]}
    except CheckpointCorrupt:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointCorrupt(f"unreadable checkpoint {path}: {exc}") from exc
    return agg, done


def _write_checkpoint(cfg: SweepConfig, agg: SweepAggregate, done: set):
    path = Path(cfg.checkpoint)
    rec = {
        "format": CHECKPOINT_FORMAT,
        "p": cfg.p,
        "config_digest": cfg.digest(),
        "completed": sorted(list(r) for r in done),
        "aggregate": agg.to_dict(),
    }
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(rec))
    os.replace(tmp, path)


def run_sweep(cfg: SweepConfig) -> SweepAggregate:
    if cfg.p >= TRAVERSAL_LIMIT:
        raise ModulusTooLarge(f"sweeps need p < 2**31, got {cfg.p}")
    ctx = FieldCtx(cfg.p)
    total = SweepAggregate(cfg.p)
    done: set = set()
    if cfg.checkpoint and cfg.resume and Path(cfg.checkpoint).exists():
        total, done = _load_checkpoint(cfg)
        log.info("resuming p=%d with %d ranges already done", cfg.p, len(done))
    todo = [r for r in _ranges(cfg) if r not in done]
    lock = threading.Lock()

    def finish(r, part):
        nonlocal total
        with lock:
            total = total.merge(part)
            done.add(r)
            if cfg.checkpoint:
                _write_checkpoint(cfg, total, done)

    if cfg.parallelism <= 1:
        for r in todo:
            finish(r, _process_range(ctx, cfg, *r))
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            futures = {pool.submit(_process_range, ctx, cfg, *r): r for r in todo}
            for fut in as_completed(futures):
                finish(futures[fut], fut.result())
    return total


# Single-statistic entry points


def cycle_histogram(ctx: FieldCtx, max_k: int, parallelism: int = 1) -> list[int]:
    """[C_1, ..., C_max_k]: cycles of each length summed over every a."""
    agg = run_sweep(SweepConfig(ctx.p, ("cycles",), max_k=max_k, parallelism=parallelism))
    return agg.cycle_counts(max_k)


def component_histogram(ctx: FieldCtx, max_k: int, parallelism: int = 1):
    """([N_{p,1}, ..., N_{p,max_k}], N_p, N_even^K, N_odd^K) with K = max_k."""
    agg = run_sweep(SweepConfig(ctx.p, ("components",), max_k=max_k, parallelism=parallelism))
    even, odd = agg.components_up_to(max_k)
    total = sum(agg.components_up_to(ctx.p))
    return agg.component_counts(max_k), total, even, odd


@dataclass(frozen=True)
class TreeStats:
    T_k: np.ndarray  # T_k[k] = T_p(k)
    T_p: int
    T_star_k: np.ndarray
    T_star_p: int
    height_bins: dict  # n -> (tree count, mean of H / (2 sqrt(pi n)))


def tree_statistics(ctx: FieldCtx, parallelism: int = 1, exclude_special: bool = False) -> TreeStats:
    cfg = SweepConfig(ctx.p, ("trees",), parallelism=parallelism, exclude_special=exclude_special)
    agg = run_sweep(cfg)
    return TreeStats(
        agg.tree_hist,
        int(agg.tree_hist.sum()),
        agg.tree_hist_star,
        int(agg.tree_hist_star.sum()),
        agg.height_means(),
    )


@dataclass(frozen=True)
class ExtremalSets:
    max_C: int
    max_c: int
    max_c_star: int | None
    A: frozenset
    B: frozenset
    B_star: frozenset

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.A), len(self.B), len(self.B_star)

    @property
    def A_B(self) -> frozenset:
        return self.A & self.B

    @property
    def A_Bstar(self) -> frozenset:
        return self.A & self.B_star

    @property
    def B_Bstar(self) -> frozenset:
        return self.B & self.B_star


def extremal_sets(ctx: FieldCtx, parallelism: int = 1) -> ExtremalSets:
    agg = run_sweep(SweepConfig(ctx.p, ("extremal",), parallelism=parallelism))
    return ExtremalSets(
        agg.max_C,
        agg.max_c,
        agg.max_c_star if agg.I_p else None,
        frozenset(agg.A),
        frozenset(agg.B),
        frozenset(agg.B_star),
    )


def iso_class_count(ctx: FieldCtx, parallelism: int = 1) -> int:
    """Number of pairwise non-isomorphic graphs among G_0, ..., G_{p-1}."""
    return len(run_sweep(SweepConfig(ctx.p, ("iso",), parallelism=parallelism)).iso)


@dataclass(frozen=True)
class PredictedValues:
    sqrt_2p: float
    sqrt_pi_p_over_2: float
    sqrt_2p_over_pi: float
    n_even_estimate: float
    height_law: dict  # n -> 2 sqrt(pi n)

    def as_dict(self) -> dict:
        return {
            "sqrt2p": round(self.sqrt_2p, 3),
            "sqrtPiP2": round(self.sqrt_pi_p_over_2, 3),
            "sqrt2POverPi": round(self.sqrt_2p_over_pi, 3),
            "nEvenEstimate": round(self.n_even_estimate, 3),
            "heightLaw": {str(n): round(v, 3) for n, v in self.height_law.items()},
        }


def predicted_values(ctx: FieldCtx, ns=HEIGHT_BINS) -> PredictedValues:
    """Closed-form reference values to set against the measured statistics."""
    p = ctx.p
    return PredictedValues(
        math.sqrt(2 * p),
        math.sqrt(math.pi * p / 2),
        math.sqrt(2 * p / math.pi),
        (p - 1) / 2 * (math.log(p - 1) + 2 * EULER_GAMMA - 1 - math.log(2)),
        {n: 2 * math.sqrt(math.pi * n) for n in ns},
    )
