import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elrkfv.characteristics import BURGERS, FluxSpec
from elrkfv.errors import GeometryError, NumericalFailure
from elrkfv.evolve import (
    RKScheme,
    StageState,
    interface_states,
    lax_friedrichs,
    modified_flux,
    node_fluxes,
    rhs,
    rk_step,
)
from elrkfv.grid import Dirichlet, MergedGrid, Periodic


def uniform_merged(values, nu, bc=Periodic(), dx=1.0):
    values = np.asarray(values, dtype=float)
    n = values.size
    return MergedGrid(
        boundaries=dx * np.arange(n + 1.0),
        node_velocities=np.asarray(nu, dtype=float),
        members=tuple(np.array([k]) for k in range(n)),
        masses=dx * values,
        bc=bc,
        dx=dx,
        period=n * dx if isinstance(bc, Periodic) else None,
    )


class TestModifiedFlux:
    def test_examples(self):
        assert modified_flux(2.0, 1.0, BURGERS) == 0.0
        assert modified_flux(3.0, 3.0, BURGERS) == -4.5

    def test_linear_cancels(self):
        flux = FluxSpec.linear(np.sin)
        x = np.linspace(0, 6, 7)
        assert np.allclose(modified_flux(np.linspace(-3, 3, 7), np.sin(x), flux, x), 0.0)


class TestLaxFriedrichs:
    def test_consistency(self):
        assert lax_friedrichs(1.7, 1.7, 0.4, BURGERS) == pytest.approx(modified_flux(1.7, 0.4, BURGERS))

    def test_example(self):
        assert lax_friedrichs(0.0, 2.0, 1.0, BURGERS) == -1.0

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
    def test_monotone(self, um, up, nu):
        # with alpha frozen at the range bound the flux is monotone on that range
        alpha = 3.0 + abs(nu)
        h = 1e-6
        d_minus = lax_friedrichs(um + h, up, nu, BURGERS, alpha=alpha) - lax_friedrichs(um, up, nu, BURGERS, alpha=alpha)
        d_plus = lax_friedrichs(um, up + h, nu, BURGERS, alpha=alpha) - lax_friedrichs(um, up, nu, BURGERS, alpha=alpha)
        assert d_minus >= -1e-12
        assert d_plus <= 1e-12

    def test_global_alpha(self):
        um, up = np.array([0.0, 1.0]), np.array([0.0, 3.0])
        local = node_fluxes(um, up, np.zeros(2), 0.0, BURGERS, False, "local")
        glob = node_fluxes(um, up, np.zeros(2), 0.0, BURGERS, False, "global")
        assert local[0] == 0.0 and glob[0] == 0.0
        assert glob[1] == local[1]
        with pytest.raises(ValueError):
            node_fluxes(um, up, np.zeros(2), 0.0, BURGERS, False, "upwind")

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_non_finite_flux(self):
        with pytest.raises(NumericalFailure):
            node_fluxes(np.array([np.inf]), np.array([0.0]), np.zeros(1), 0.0, BURGERS, False)


class TestStageState:
    def test_rejects_collapsed_cells(self):
        with pytest.raises(GeometryError):
            StageState(0.5, [1.0, 0.0], [1.0, 1.0])

    def test_averages(self):
        assert StageState(0.0, [2.0, 4.0], [1.0, 1.0]).averages.tolist() == [0.5, 0.25]


class TestRhs:
    def test_constant_state(self):
        m = uniform_merged(np.full(8, 1.3), np.full(9, 1.3))
        state = StageState(0.0, m.widths(), m.masses)
        assert np.allclose(rhs(state, m, BURGERS, "eno3"), 0.0)

    def test_linear_transport_with_matching_nodes(self):
        flux = FluxSpec.linear(lambda x: 0.8)
        m = uniform_merged(np.sin(np.arange(10.0)), np.full(11, 0.8))
        state = StageState(0.0, m.widths(), m.masses)
        assert np.allclose(rhs(state, m, flux, "wenoao3"), 0.0, atol=1e-15)

    def test_two_cell_riemann(self):
        # nodes at -1, 0, 1 with nu = 4, 2, 0; outer states 4 and 0.
        # F(left) = 8 - 16 = -8; F(mid) = (0 + 0)/2 + 2*(4 - 0)/2 = 4; F(right) = 0
        m = MergedGrid(
            boundaries=np.array([-1.0, 0.0, 1.0]),
            node_velocities=np.array([4.0, 2.0, 0.0]),
            members=(np.array([0]), np.array([1])),
            masses=np.array([4.0, 0.0]),
            bc=Dirichlet(4.0, 0.0),
            dx=1.0,
        )
        rates = rhs(StageState(0.0, m.widths(), m.masses), m, BURGERS, "const")
        assert rates.tolist() == [-12.0, 4.0]

    def test_non_finite_average(self):
        m = uniform_merged(np.ones(4), np.ones(5))
        with pytest.raises(NumericalFailure):
            rhs(StageState(0.0, m.widths(), [1.0, np.nan, 1.0, 1.0]), m, BURGERS, "eno3")


class TestInterfaceStates:
    def test_periodic_wrap(self):
        um, up = interface_states(np.ones(4), np.array([1.0, 2, 3, 4]), Periodic(), 1.0, "const")
        assert um.tolist() == [4, 1, 2, 3, 4]
        assert up.tolist() == [1, 2, 3, 4, 1]

    def test_dirichlet_ends(self):
        um, up = interface_states(np.ones(3), np.array([1.0, 2, 3]), Dirichlet(7.0, 9.0), 1.0, "eno3")
        assert um[0] == 7.0 and up[-1] == 9.0


def _shu_osher_rk3(m0, L, dt):
    u1 = m0 + dt * L(m0)
    u2 = 0.75 * m0 + 0.25 * (u1 + dt * L(u1))
    return m0 / 3 + 2 / 3 * (u2 + dt * L(u2))


class TestRkStep:
    def test_constant_state_any_scheme(self):
        m = uniform_merged(np.full(6, 2.0), np.full(7, 2.0))
        for scheme in RKScheme:
            stored = np.full(7, -2.0)
            assert np.allclose(rk_step(m, scheme, 0.3, BURGERS, "eno3", stored), m.masses)

    def test_static_grid_matches_classical_ssprk(self):
        # nu = 0 keeps the geometry fixed, so the update must be the textbook scheme
        flux = FluxSpec.linear(lambda x: 1.0)
        x = np.arange(16) + 0.5
        values = np.sin(2 * np.pi * x / 16)
        m = uniform_merged(values, np.zeros(17))

        def L(masses):
            return rhs(StageState(0.0, m.widths(), masses), m, flux, "eno3")

        um, up = interface_states(m.widths(), values, Periodic(), 1.0, "eno3")
        stored = node_fluxes(um, up, np.zeros(17), m.boundaries, flux, True)
        dt = 0.4
        got3 = rk_step(m, RKScheme.RK3, dt, flux, "eno3", stored)
        assert np.allclose(got3, _shu_osher_rk3(m.masses, L, dt), atol=1e-14)
        m1 = m.masses + dt * L(m.masses)
        got2 = rk_step(m, RKScheme.RK2, dt, flux, "eno3", stored)
        assert np.allclose(got2, 0.5 * m.masses + 0.5 * (m1 + dt * L(m1)), atol=1e-14)

    def test_merged_shock_cell_mass_budget(self):
        # one merged cell [0, 3] between a 4-state (nu=4) and a 0-state (nu=0);
        # inflow flux F(4; nu=4) = -8, outflow 0, so mass changes by -8 dt
        m = MergedGrid(
            boundaries=np.array([0.0, 3.0]),
            node_velocities=np.array([4.0, 0.0]),
            members=(np.array([0, 1, 2]),),
            masses=np.array([6.0]),
            bc=Dirichlet(4.0, 0.0),
            dx=1.0,
        )
        got = rk_step(m, RKScheme.RK1, 0.25, BURGERS, "const", np.array([-8.0, 0.0]))
        assert got.tolist() == [4.0]

    @given(st.lists(st.floats(-2, 2), min_size=8, max_size=20), st.sampled_from(list(RKScheme)))
    def test_periodic_conservation(self, values, scheme):
        values = np.array(values)
        n = values.size
        nu = 0.5 * (np.append(values[-1], values) + np.append(values, values[0]))
        m = uniform_merged(values, nu)
        um, up = interface_states(m.widths(), values, Periodic(), 1.0, "wenoao3")
        stored = node_fluxes(um, up, nu, m.boundaries, BURGERS, True)
        dt = 0.9 / (np.max(np.abs(np.diff(nu))) + 1.0)
        masses = rk_step(m, scheme, dt, BURGERS, "wenoao3", stored)
        assert masses.sum() == pytest.approx(m.masses.sum(), abs=1e-12 * (1 + np.abs(m.masses).sum()))

    def test_stored_flux_shape(self):
        m = uniform_merged(np.ones(4), np.ones(5))
        with pytest.raises(ValueError):
            rk_step(m, RKScheme.RK1, 0.1, BURGERS, "const", np.zeros(4))

    def test_scheme_properties(self):
        assert RKScheme.RK1.horizon_factor == 1 and RKScheme.RK3.horizon_factor == 2
        assert RKScheme.RK1.threshold_mode == "first_order"
        assert RKScheme.RK2.threshold_mode == "high_order"
