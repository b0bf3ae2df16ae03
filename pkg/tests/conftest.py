import pytest

LOG = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[LOG] = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    log = request.config.stash[LOG]

    def record(n: int, ok: bool, detail: str = "") -> bool:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        log.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(LOG, [])
    if log:
        terminalreporter.section("acceptance")
        for line in sorted(log):
            terminalreporter.write_line(line)
