import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amrpart.grid import build_graph, build_hypergraph, generate_synthetic, s_like_config  # noqa: E402

S_LIKE_SEED = 7


@pytest.fixture(scope="session")
def s_like_mesh():
    return generate_synthetic(s_like_config(), S_LIKE_SEED)


@pytest.fixture(scope="session")
def s_like_hypergraph(s_like_mesh):
    return build_hypergraph(s_like_mesh)


@pytest.fixture(scope="session")
def s_like_graph(s_like_mesh):
    return build_graph(s_like_mesh)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(RESULTS):
        entries = RESULTS[criterion]
        passed = sum(flag for flag, _ in entries)
        verdict = "PASS" if passed == len(entries) else "FAIL"
        details = " | ".join(("" if flag else "FAILED ") + d for flag, d in entries)
        terminalreporter.write_line(
            f"criterion {criterion}: {verdict} ({passed}/{len(entries)} checks) {details}"
        )
