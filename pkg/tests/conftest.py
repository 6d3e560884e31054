import pytest

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash[_ACCEPTANCE]

    def report(number: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
