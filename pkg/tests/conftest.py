from __future__ import annotations

import numpy as np
import pytest

from tripack.core import MetricInstance, gen_euclidean, gen_graph_metric


def metric_from_points(points) -> MetricInstance:
    xy = np.asarray(points, dtype=float)
    return MetricInstance(np.sqrt(((xy[:, None, :] - xy[None, :, :]) ** 2).sum(-1)))


def small_instances(count: int, sizes=(6, 9, 12), seed: int = 0):
    out = []
    for i in range(count):
        n = sizes[i % len(sizes)]
        s = seed * 1000 + i
        out.append(gen_euclidean(n, s) if i % 2 == 0 else gen_graph_metric(n, 0.4, s))
    return out


@pytest.fixture
def euclid12() -> MetricInstance:
    return gen_euclidean(12, 7)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
