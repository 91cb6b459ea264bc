import random

import pytest

from bft import MassFunction, build_frame

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {title}")


def shafer(n):
    return build_frame([f"t{i}" for i in range(n)], "shafer")


def random_element(rng, frame, within=None, allow_empty=False):
    """Uniform random canonical element (optionally inside ``within``)."""
    live = frame.live_mask if within is None else within.bits
    while True:
        bits = 0
        for k in range(1 << frame.n):
            if live >> k & 1 and rng.random() < 0.5:
                bits |= 1 << k
        if bits or allow_empty:
            return frame.element(bits)


def random_bba(rng, frame, within=None, max_focal=6):
    count = rng.randint(1, max_focal)
    focal = [random_element(rng, frame, within) for _ in range(count)]
    weights = [rng.random() + 1e-3 for _ in focal]
    total = sum(weights)
    return MassFunction(frame, [(x, w / total) for x, w in zip(focal, weights)])


@pytest.fixture
def rng():
    return random.Random(20240611)
