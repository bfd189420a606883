import pytest

_RESULTS: dict[int, list[tuple[bool, str]]] = {}


class _Recorder:
    def __init__(self, number: int, label: str):
        self.number = number
        self.label = label

    def __call__(self, ok: bool, detail: str = ""):
        line = f"criterion {self.number:>2} [{self.label}] {'PASS' if ok else 'FAIL'}" + (f": {detail}" if detail else "")
        print(line)
        _RESULTS.setdefault(self.number, []).append((ok, line))
        return ok


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    number = marker.args[0]
    label = request.node.callspec.id if hasattr(request.node, "callspec") else request.node.name
    return _Recorder(number, label)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: runs a large exhaustive sweep")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        parts = _RESULTS[n]
        ok = all(o for o, _ in parts)
        tr.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}")
        for _, line in parts:
            tr.write_line(f"    {line}")
