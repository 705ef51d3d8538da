import cmath

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from juliasym import McMullenParams, make_mcmullen, parse_map, sample_julia

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def mcmullen(m, d, lam):
    return make_mcmullen(McMullenParams(m, d, lam))


@pytest.fixture(scope="session")
def cloud_cache():
    cache = {}

    def get(spec, count=100_000, seed=0):
        key = (spec, count, seed)
        if key not in cache:
            cache[key] = sample_julia(parse_map(spec), count, seed=seed)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit(theta):
    return cmath.exp(1j * theta)


def pytest_terminal_summary(terminalreporter):
    lines = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when not in ("call", "setup"):
                continue
            name = nodeid.split("::")[1]
            num = int(name.split("_")[2])
            companion = "companion" in name
            key = (num, companion)
            ok = status == "passed"
            lines[key] = lines.get(key, True) and ok
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for (num, companion), ok in sorted(lines.items()):
        label = f"criterion {num:2d}" + (" (corrected companion)" if companion else "")
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'}")
