import pytest

ACCEPTANCE = {}


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    name = request.node.name

    def _report(ok: bool, detail: str):
        ACCEPTANCE[name] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, detail

    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
