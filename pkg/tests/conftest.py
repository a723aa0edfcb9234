"""Shared test configuration.

The hypothesis profile is derandomized so the suite is reproducible
run to run; deadlines are disabled because first-call jit compilation
would trip them spuriously.
"""

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from tippinglab.graph import Graph
from tippinglab.randgen import RngState, random_simple_graph

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One explicit PASS/FAIL line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                status = "PASS" if outcome == "passed" else "FAIL"
                rows.append((nodeid.split("::")[-1], status))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"{status} {name}")


@st.composite
def graphs(draw, max_n=8, min_n=0):
    """Uniform G(n,m) with n and m drawn uniformly from their ranges."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    total = n * (n - 1) // 2
    m = draw(st.integers(min_value=0, max_value=total))
    seed = draw(st.integers(min_value=0, max_value=2**64 - 1))
    return random_simple_graph(n, m, RngState(seed))


def graph_from_edges(n, edges):
    return Graph(n, edges)
