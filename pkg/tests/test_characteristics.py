import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elrkfv.characteristics import BURGERS, FluxSpec, crossing_within, rh_velocity, trace_forward

reals = st.floats(-50, 50)


class TestFluxSpec:
    def test_burgers(self):
        assert BURGERS.f(3.0) == 4.5
        assert BURGERS.df(3.0) == 3.0

    def test_linear(self):
        flux = FluxSpec.linear(np.sin)
        x = np.array([0.3, 1.2])
        assert np.allclose(flux.f(2.0, x), 2 * np.sin(x))
        assert np.allclose(flux.df(5.0, x), np.sin(x))

    def test_constant_speed_broadcasts(self):
        flux = FluxSpec.linear(lambda x: 1.5)
        assert flux.a(np.zeros(4)).shape == (4,)

    def test_validation(self):
        with pytest.raises(ValueError):
            FluxSpec("cubic")
        with pytest.raises(ValueError):
            FluxSpec("linear")


class TestRhVelocity:
    def test_secant(self):
        assert rh_velocity(1.0, 3.0) == 2.0

    def test_equal_states(self):
        assert rh_velocity(0.7, 0.7) == 0.7

    def test_riemann_shock_speed(self):
        assert rh_velocity(4.0, 0.0) == 2.0

    def test_linear_uses_local_speed(self):
        flux = FluxSpec.linear(np.sin)
        assert rh_velocity(1.0, 9.0, flux, 0.5) == pytest.approx(np.sin(0.5))

    @given(reals, reals)
    def test_symmetric(self, ul, ur):
        assert rh_velocity(ul, ur) == rh_velocity(ur, ul)

    @given(reals, reals)
    def test_matches_secant(self, ul, ur):
        nu = rh_velocity(ul, ur)
        assert nu == 0.5 * (ul + ur)
        if abs(ur - ul) > 1e-3:
            secant = (BURGERS.f(ur) - BURGERS.f(ul)) / (ur - ul)
            assert nu == pytest.approx(secant, rel=1e-9, abs=1e-9)


class TestTraceForward:
    def test_examples(self):
        assert trace_forward(0.5, 2.0, 0.1) == pytest.approx(0.7)
        assert trace_forward(0.5, 0.0, 3.0) == 0.5
        assert trace_forward(0.5, 9.0, 0.0) == 0.5

    def test_negative_dt(self):
        with pytest.raises(ValueError):
            trace_forward(0.0, 1.0, -0.1)

    @given(reals, reals, st.floats(0, 5), st.floats(0, 5))
    def test_affine(self, x, nu, t1, t2):
        once = trace_forward(x, nu, t1 + t2)
        twice = trace_forward(trace_forward(x, nu, t1), nu, t2)
        assert once == pytest.approx(twice, rel=1e-12, abs=1e-10)


class TestCrossingWithin:
    def test_examples(self):
        assert not crossing_within(1.0, 2.0, 0.0, 0.4)
        assert crossing_within(1.0, 2.0, 0.0, 0.6)

    @given(st.floats(0.01, 10), reals, st.floats(0.01, 100))
    def test_parallel_never_cross(self, dx, nu, horizon):
        assert not crossing_within(dx, nu, nu, horizon)
