"""Collect acceptance results and print one line per criterion at the end."""
import pytest

TITLES = {
    1: "lattice cardinalities 4/18/166/7579, n=5 under 60 s",
    2: "XOR sx atoms match brute-force oracle (1e-9)",
    3: "minimal consistency on 200 random distributions (1e-9)",
    4: "antichain/parthood/statement views are order isomorphic, unique canonical statements",
    5: "children equal brute-force covers, lower bound, meet/join laws",
    6: "informative/misinformative split non-negative and monotone",
    7: "alternate decompositions: round trips, translations, conditional MI, syn rank",
    8: "COPY sx atoms match brute-force oracle (1e-9)",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(TITLES):
        results = _outcomes.get(k)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {TITLES[k]}")
