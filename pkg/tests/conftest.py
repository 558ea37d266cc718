
import pytest

from urlab import _jacobi_py, _kernels

_ACCEPTANCE = []


def record_criterion(number, title, passed, detail):
    _ACCEPTANCE.append((number, title, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] C{number:02d} {title}: {detail}")


KERNELS = {"python": _jacobi_py.jacobi_sweeps}
try:
    from urlab import _jacobi_ext
except ImportError:
    pass
else:
    KERNELS["cython"] = _jacobi_ext.jacobi_sweeps


@pytest.fixture(params=sorted(KERNELS))
def kernel(request, monkeypatch):
    """Run the test once per available Jacobi backend."""
    monkeypatch.setattr(_kernels, "jacobi_sweeps", KERNELS[request.param])
    return request.param
