import json
from importlib import resources

import pytest

from quadgraph.field import FieldCtx

TIERS = ("fast", "medium", "long")


def pytest_addoption(parser):
    parser.addoption(
        "--tier", choices=TIERS, default="medium",
        help="highest tier to run: fast, medium (default) or long",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "tier(name): fast, medium or long; long is opt-in via --tier long")


def pytest_collection_modifyitems(config, items):
    limit = TIERS.index(config.getoption("--tier"))
    for item in items:
        m = item.get_closest_marker("tier")
        tier = m.args[0] if m else "fast"
        if TIERS.index(tier) > limit:
            item.add_marker(pytest.mark.skip(reason=f"{tier} tier; run with --tier {tier}"))


def load_data(name):
    return json.loads(resources.files("quadgraph").joinpath("data", name).read_text())


@pytest.fixture(scope="session")
def reference_tables():
    return load_data("reference_tables.json")["tables"]


@pytest.fixture(scope="session")
def ip_fixture():
    return load_data("ip_near_1e4.json")["rows"]


@pytest.fixture
def F():
    return FieldCtx


_SWEEPS = {}


@pytest.fixture(scope="session")
def sweep(request):
    """Cached run_sweep keyed by config.

    Long sweeps checkpoint into QUADGRAPH_CHECKPOINT_DIR (default: the pytest
    cache) and resume from there, so an interrupted long tier picks up where
    it stopped. The checkpoint carries a digest of the config, so a stale
    file for other settings is rejected rather than reused.
    """
    import os
    from pathlib import Path

    from quadgraph.stats import SweepConfig, run_sweep

    env = os.environ.get("QUADGRAPH_CHECKPOINT_DIR")
    ck_dir = Path(env) if env else Path(request.config.cache.mkdir("quadgraph-checkpoints"))
    ck_dir.mkdir(parents=True, exist_ok=True)
    threads = int(os.environ.get("QUADGRAPH_THREADS", os.cpu_count() or 1))

    def run(p, groups, checkpoint=False, **kw):
        cfg = SweepConfig(p, tuple(groups), parallelism=threads, **kw)
        key = (cfg.digest(), cfg.max_k)
        if key not in _SWEEPS:
            if checkpoint:
                path = ck_dir / f"p{p}-{cfg.digest()[:16]}.json"
                cfg = SweepConfig(p, tuple(groups), parallelism=threads,
                                  checkpoint=str(path), resume=True, **kw)
            _SWEEPS[key] = (cfg, run_sweep(cfg))
        return _SWEEPS[key]

    return run
