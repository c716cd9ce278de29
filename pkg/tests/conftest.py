import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""
        _ACCEPTANCE[number] = (title, False, "did not finish")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        detail = self.detail if ok else f"{exc_type.__name__}: {exc}".splitlines()[0]
        _ACCEPTANCE[self.number] = (self.title, ok, detail)
        line = f"ACCEPTANCE {self.number}: {'PASS' if ok else 'FAIL'}  {self.title}"
        if detail:
            line += f"  [{detail}]"
        print("\n" + line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
