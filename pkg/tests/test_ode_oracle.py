import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charburg import BlowUpDetected, OutOfValidity, SourceFamily
from charburg.ode_oracle import OracleConfig, integrate_characteristic, integrate_equivalent
from charburg.source_terms import flow, primitive, validity_time


def test_zero_source_is_constant():
    assert integrate_equivalent(SourceFamily.zero(), 2.0, 5.0) == 2.0


def test_linear_decay():
    q = integrate_equivalent(SourceFamily.linear(-2.0), 1.0, 1.0)
    assert q == pytest.approx(math.exp(-2.0), abs=1e-10)
    assert q == pytest.approx(0.1353352832366135, abs=1e-10)


def test_quadratic_near_blow_up():
    q = integrate_equivalent(SourceFamily.quadratic(2.0), 1.0, 0.49)
    assert q == pytest.approx(50.0, rel=1e-6)


def test_characteristic_homogeneous():
    x, q = integrate_characteristic(SourceFamily.zero(), 0.0, 0.5, 0.5)
    assert (x, q) == (pytest.approx(0.25, abs=1e-12), 0.5)


@pytest.mark.parametrize("f,h0,t", [(SourceFamily.exponential(-1.0), 2.0, 0.26),
                                    (SourceFamily.quadratic(-2.0), 1.0, 0.15),
                                    (SourceFamily.linear(1.5), -0.7, 0.8)])
def test_characteristic_matches_primitive(f, h0, t):
    x, q = integrate_characteristic(f, 0.1, h0, t)
    assert x == pytest.approx(0.1 + primitive(f, t, h0), abs=1e-8)
    assert q == pytest.approx(flow(f, t, h0), abs=1e-8)


def test_fourth_order_convergence():
    f = SourceFamily.quadratic(-2.0)
    exact = flow(f, 1.0, 1.0)
    e1 = abs(integrate_equivalent(f, 1.0, 1.0, OracleConfig(step=0.1)) - exact)
    e2 = abs(integrate_equivalent(f, 1.0, 1.0, OracleConfig(step=0.05)) - exact)
    assert e1 / e2 >= 8.0


def test_step_that_does_not_divide_t():
    f = SourceFamily.linear(-1.0)
    q = integrate_equivalent(f, 1.0, 0.3, OracleConfig(step=0.07))
    assert q == pytest.approx(math.exp(-0.3), abs=1e-6)


def test_blow_up_detected():
    f = SourceFamily.quadratic(2.0)
    with pytest.raises(OutOfValidity):
        integrate_equivalent(f, 1.0, 0.6)
    # inside the window, but the exact value 5e12 is past the divergence threshold
    with pytest.raises(BlowUpDetected):
        integrate_equivalent(f, 1e11, 4.9e-12, OracleConfig(step=1e-15))
    with pytest.raises(BlowUpDetected):
        integrate_characteristic(f, 0.0, 1e11, 4.9e-12, OracleConfig(step=1e-15))


def test_invalid_input():
    with pytest.raises(ValueError):
        integrate_equivalent(SourceFamily.zero(), 1.0, -1.0)
    with pytest.raises(ValueError):
        OracleConfig(step=0.0)
    with pytest.raises(ValueError):
        OracleConfig(method="Euler")


@settings(max_examples=60, deadline=None)
@given(h=st.floats(-2.0, 2.0), u=st.floats(0.0, 1.0),
       kind=st.sampled_from(["linear", "quadratic", "exponential"]), beta=st.floats(-2.0, 2.0))
def test_oracle_agrees_with_closed_form(h, u, kind, beta):
    f = getattr(SourceFamily, kind)(beta)
    T = validity_time(f, h)
    t = u * min(0.5, 0.5 * T.value if T.is_finite else 0.5)
    q = integrate_equivalent(f, h, t, OracleConfig(step=1e-4))
    assert q == pytest.approx(flow(f, t, h), abs=1e-8, rel=1e-8)
