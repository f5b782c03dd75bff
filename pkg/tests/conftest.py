import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``acceptance(n, title, ok, detail)``."""

    def record(n: int, title: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[n] = (title, bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}")
