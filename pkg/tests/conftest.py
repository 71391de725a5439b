import pytest

from charburg import _backend

ACCEPTANCE = []

BACKENDS = ["python"] + (["cython"] if _backend.compiled_kernels is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    mod = _backend.python_kernels if request.param == "python" else _backend.compiled_kernels
    monkeypatch.setattr(_backend, "kernels", mod)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
