import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elrkfv.errors import GeometryError
from elrkfv.grid import Dirichlet, MergedGrid, Periodic, UniformGrid1D
from elrkfv.projection import project_first_order, project_high_order
from elrkfv.reconstruct import ReconPolynomial, reconstruct_line


def downstream(nodes, masses, bc=Periodic(), dx=1.0, period=None):
    nodes = np.asarray(nodes, dtype=float)
    return MergedGrid(
        boundaries=nodes,
        node_velocities=np.zeros_like(nodes),
        members=tuple(np.array([k]) for k in range(nodes.size - 1)),
        masses=np.asarray(masses, dtype=float),
        bc=bc,
        dx=dx,
        period=period,
    )


class TestFirstOrder:
    def test_identity(self):
        g = UniformGrid1D(0, 5, 5)
        m = downstream(g.nodes, [1, 2, 3, 4, 5], period=5.0)
        assert project_first_order(m, g).values.tolist() == [1, 2, 3, 4, 5]

    def test_overlap_average(self):
        g = UniformGrid1D(0, 1, 1)
        m = downstream([-0.5, 0.5, 1.5], [2.0, 4.0], Dirichlet(2.0, 4.0))
        assert project_first_order(m, g).values[0] == pytest.approx(3.0)

    def test_periodic_wrap_of_shifted_nodes(self):
        g = UniformGrid1D(0, 4, 4)
        m = downstream(g.nodes + 2.5, [1.0, 2.0, 3.0, 4.0], period=4.0)
        out = project_first_order(m, g)
        # cell [0,1] sees the tail of cell 1 ([1.5, 2.5] wraps to [-0.5, 0.5]) and head of cell 2
        assert out.values[0] == pytest.approx(0.5 * 2.0 + 0.5 * 3.0)
        assert out.mass == pytest.approx(10.0)

    def test_coverage_gap(self):
        g = UniformGrid1D(0, 2, 2)
        m = downstream([0.1, 1.0, 2.0], [1.0, 1.0], Dirichlet(1.0, 1.0))
        with pytest.raises(GeometryError):
            project_first_order(m, g)

    @given(st.lists(st.floats(0.2, 3), min_size=3, max_size=12), st.floats(0, 20), st.data())
    def test_periodic_conservation(self, widths, offset, data):
        widths = np.array(widths)
        period = widths.sum()
        nodes = offset + np.concatenate([[0.0], np.cumsum(widths)])
        masses = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=widths.size, max_size=widths.size)))
        g = UniformGrid1D(0.0, period, 7)
        out = project_first_order(downstream(nodes, masses, period=period), g)
        assert out.mass == pytest.approx(masses.sum(), abs=1e-12 * (1 + np.abs(masses).sum()))


class TestHighOrder:
    def test_identity(self):
        g = UniformGrid1D(0, 6, 6)
        vals = np.array([1.0, 4, 2, 8, 5, 7])
        m = downstream(g.nodes, vals, period=6.0)
        w = np.ones(10)
        pad = np.concatenate([vals[-2:], vals, vals[:2]])
        coeffs = reconstruct_line(w, pad, "eno3", 2)
        assert np.allclose(project_high_order(m, coeffs, g).values, vals, atol=1e-14)

    @given(st.lists(st.floats(0.2, 3), min_size=3, max_size=10), st.floats(0, 5), st.data())
    def test_constants_reduce_to_first_order(self, widths, offset, data):
        widths = np.array(widths)
        period = widths.sum()
        nodes = offset + np.concatenate([[0.0], np.cumsum(widths)])
        masses = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=widths.size, max_size=widths.size)))
        m = downstream(nodes, masses, period=period)
        g = UniformGrid1D(0.0, period, 5)
        polys = [ReconPolynomial(0.0, 0.0, mk / wk) for mk, wk in zip(masses, widths)]
        hi = project_high_order(m, polys, g).values
        lo = project_first_order(m, g).values
        assert np.allclose(hi, lo, atol=1e-12)

    def test_linear_field_shifted(self):
        # u(x) = x on cells shifted by 0.3 dx; ENO3 is exact on linear data
        dx = 0.25
        g = UniformGrid1D(0.0, 2.0, 8)
        nodes = np.arange(-1, 10) * dx + 0.3 * dx
        masses = 0.5 * (nodes[1:] ** 2 - nodes[:-1] ** 2)
        m = downstream(nodes, masses, Dirichlet(0.0, 0.0), dx)
        centers = 0.5 * (nodes[1:] + nodes[:-1])
        ghost_c = np.concatenate([centers[0] - dx * np.array([2, 1]), centers, centers[-1] + dx * np.array([1, 2])])
        coeffs = reconstruct_line(np.full(ghost_c.size, dx), ghost_c, "eno3", 2)
        out = project_high_order(m, coeffs, g)
        assert np.allclose(out.values, g.centers, atol=1e-12)

    def test_polynomial_count(self):
        g = UniformGrid1D(0, 2, 2)
        m = downstream(g.nodes, [1.0, 1.0], period=2.0)
        with pytest.raises(ValueError):
            project_high_order(m, [ReconPolynomial(0, 0, 1)], g)
