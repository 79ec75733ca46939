"""Regenerate data/ip_near_1e4.json with the brute-force oracle only."""

import json
import sys
import time
from pathlib import Path

from quadgraph.field import FieldCtx, is_prime
from quadgraph.oracle import naive_connected

OUT = Path(__file__).resolve().parents[1] / "src" / "quadgraph" / "data" / "ip_near_1e4.json"


def primes_near(center, each_side=5):
    below = [n for n in range(center, 2, -1) if is_prime(n)][:each_side]
    above = [n for n in range(center + 1, 2 * center) if is_prime(n)][:each_side]
    return sorted(below + above)


def main():
    rows = []
    for p in primes_near(10_000):
        t0 = time.perf_counter()
        ctx = FieldCtx(p)
        conn = [a for a in range(p) if naive_connected(ctx, a)]
        rows.append({"p": p, "I_p": len(conn), "connected_a": conn})
        print(p, len(conn), f"{time.perf_counter() - t0:.1f}s", file=sys.stderr, flush=True)
    doc = {"source": "oracle (pointer doubling over the full successor table)", "rows": rows}
    OUT.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
