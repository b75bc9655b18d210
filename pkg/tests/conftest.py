import pytest

_VERDICTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def verdict():
    """Record one acceptance line, then fail the test if anything was off."""

    def record(number: int, title: str, failures: list[str]):
        _VERDICTS[number] = (title, not failures, "; ".join(failures[:6]))
        assert not failures, f"{title}: " + "; ".join(failures)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance")
    for number in sorted(_VERDICTS):
        title, ok, detail = _VERDICTS[number]
        line = f"{'PASS' if ok else 'FAIL'} [{number:02d}] {title}"
        terminalreporter.write_line(line + ("" if ok else f"  ({detail})"))
