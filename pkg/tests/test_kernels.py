"""The compiled and numpy kernels must agree."""
import numpy as np
import pytest

from charburg import _backend, _codes
from charburg import _pykernels as py
from charburg.characteristic_solver import RootConfig
from charburg.initial_conditions import InitialCondition
from charburg.source_terms import SourceFamily

ck = _backend.compiled_kernels
pytestmark = pytest.mark.skipif(ck is None, reason="compiled kernels not built")

CASES = [
    (SourceFamily.zero(), InitialCondition.affine(1.0, 0.0), 1.0),
    (SourceFamily.zero(), InitialCondition.sine(), 0.2),  # multivalued near the centre
    (SourceFamily.linear(-2.0), InitialCondition.plateau_piecewise(), 0.2),
    (SourceFamily.linear(3.0), InitialCondition.affine(1.5, 0.0, (-5.0, 5.0)), 0.25),
    (SourceFamily.linear(1e-12), InitialCondition.sine(), 0.1),
    (SourceFamily.quadratic(-2.0), InitialCondition.sine(), 0.15),
    (SourceFamily.quadratic(2.0), InitialCondition.affine(0.0, 1.0), 0.6),  # out of validity
    (SourceFamily.exponential(-1.0), InitialCondition.smoothed_step(), 0.26),
    (SourceFamily.exponential(0.5), InitialCondition.smoothed_step(0.5, -0.5, 0.5, 1e-2), 0.3),
    (SourceFamily.exponential(-1e-9), InitialCondition.smoothed_step(), 0.2),
]


@pytest.mark.parametrize("f,ic,t", CASES)
def test_solve_points_parity(f, ic, t):
    xs = np.linspace(-0.2, 1.2, 257)
    cfg = RootConfig()
    a = py.solve_points(f, ic, xs, t, cfg)
    b = ck.solve_points(f, ic, xs, t, cfg)
    np.testing.assert_array_equal(a[3], b[3])
    ok = a[3] == _codes.OK
    for u, v in zip(a[:3], b[:3]):
        np.testing.assert_allclose(u[ok], v[ok], rtol=0, atol=1e-13)


def test_status_codes_cover_failures():
    f, ic, _ = CASES[1]
    st = ck.solve_points(f, ic, np.array([0.0, 0.5]), 0.2, RootConfig())[3]
    assert list(st) == [_codes.OK, _codes.MULTIVALUED]
    st = ck.solve_points(*CASES[6][:2], np.array([0.5]), 0.6, RootConfig())[3]
    assert list(st) == [_codes.OUT_OF_VALIDITY]


@pytest.mark.parametrize("f,h0,t", [(SourceFamily.zero(), 2.0, 5.0), (SourceFamily.linear(-2.0), 1.0, 1.0),
                                    (SourceFamily.quadratic(-2.0), 1.0, 0.15),
                                    (SourceFamily.exponential(-1.0), 2.0, 0.26)])
def test_rk4_parity(f, h0, t):
    xa, qa, sa = py.rk4_characteristic(f, 0.1, h0, t, 1e-4)
    xb, qb, sb = ck.rk4_characteristic(f, 0.1, h0, t, 1e-4)
    assert sa == sb == 0
    assert xa == pytest.approx(xb, abs=1e-14) and qa == pytest.approx(qb, abs=1e-14)
    assert py.rk4_equivalent(f, h0, t, 1e-4)[0] == pytest.approx(ck.rk4_equivalent(f, h0, t, 1e-4)[0], abs=1e-14)


def test_compiled_rejects_custom():
    from charburg.source_terms import CustomSource
    f = SourceFamily.from_custom(CustomSource(lambda q: q, lambda t, h: h, lambda t, h: t * h))
    with pytest.raises(NotImplementedError):
        ck.solve_points(f, InitialCondition.sine(), np.zeros(1), 0.1, RootConfig())
    assert _backend.for_family(f) is py


def test_backend_env_override(monkeypatch):
    import importlib
    monkeypatch.setenv("CHARBURG_BACKEND", "python")
    mod = importlib.reload(_backend)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("CHARBURG_BACKEND")
        importlib.reload(_backend)
