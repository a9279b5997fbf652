import numpy as np
import pytest

from fvadvect.grid import CellField, Grid, conserved_sum
from fvadvect.highorder import rk4_high_order_step, rk4_stage_combination, spatial_flux
from fvadvect.schemes import SCHEME_NAMES, scheme_coefficients
from fvadvect.velocity import ConstantDiagonal, face_average_velocity


def sine_cell_averages(grid, k=1):
    """Exact averages of sin(2 pi k x) over the cells of a 1D grid."""
    edges = grid.lo + np.arange(grid.n + 1) * grid.h
    anti = -np.cos(2 * np.pi * k * edges) / (2 * np.pi * k)
    return np.diff(anti) / grid.h


def fft_rk4_oracle(q0, nsteps, sigma, scheme):
    """Exact propagation of the linear periodic scheme, mode by mode."""
    n = len(q0)
    beta = 2 * np.pi * np.fft.fftfreq(n)
    phi = sum(
        a * np.exp(1j * s * beta)
        for s, a in zip(scheme.offsets, scheme.coefficients)
    )
    mu = -phi * (1.0 - np.exp(-1j * beta))
    z = sigma * mu
    g = 1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24
    return np.real(np.fft.ifft(np.fft.fft(q0) * g**nsteps))


class TestSpatialFlux:
    def test_constant_field(self):
        g = Grid(2, 16)
        v = ConstantDiagonal(dim=2)
        uf = face_average_velocity(v, g)
        q = CellField.from_interior(g, np.full((16, 16), 2.5))
        fx, fy = spatial_flux(q, uf, scheme_coefficients("u5"), 4)
        assert np.allclose(fx, 2.5, rtol=0, atol=1e-14)
        assert np.allclose(fy, 2.5, rtol=0, atol=1e-14)

    def test_zero_velocity(self):
        g = Grid(1, 16)
        uf = (np.zeros(16),)
        q = CellField.from_interior(g, np.random.default_rng(0).random(16))
        (f,) = spatial_flux(q, uf, scheme_coefficients("u9"), 6)
        assert np.all(f == 0.0)

    def test_sine_face_flux_fifth_order(self):
        # u = 1 so the flux equals the interpolated face value; against the
        # exact point values of sin, u5 converges at fifth order (ratio
        # about 32 per doubling)
        def err(n):
            g = Grid(1, n)
            q = CellField.from_interior(g, sine_cell_averages(g))
            (f,) = spatial_flux(q, (np.ones(n),), scheme_coefficients("u5"), 4)
            exact = np.sin(2 * np.pi * g.face_coords(0))
            return np.max(np.abs(f - exact))

        ratio = err(64) / err(128)
        assert ratio >= 24.0


class TestRK4Step:
    def test_constant_preserved(self):
        g = Grid(2, 16)
        uf = face_average_velocity(ConstantDiagonal(dim=2), g)
        q = CellField.from_interior(g, np.full((16, 16), 1.25))
        q_high, F_high = rk4_high_order_step(q, uf, 0.8 * g.h, scheme_coefficients("u5"), 4)
        assert np.array_equal(q_high.interior, q.interior)
        assert np.allclose(F_high[0], 1.25, rtol=0, atol=1e-14)

    def test_matches_fft_oracle(self):
        # 50 steps of the real time loop against exact modal propagation
        g = Grid(1, 64)
        s = scheme_coefficients("u5")
        uf = (np.ones(64),)
        sigma = 0.8
        dt = sigma * g.h
        q = CellField.from_interior(g, sine_cell_averages(g, k=3))
        q0 = q.interior.copy()
        for _ in range(50):
            q, _ = rk4_high_order_step(q, uf, dt, s, 4)
        oracle = fft_rk4_oracle(q0, 50, sigma, s)
        assert np.max(np.abs(q.interior - oracle)) <= 1e-12

    @pytest.mark.parametrize("name", SCHEME_NAMES)
    def test_one_step_translation_accuracy(self, name):
        # single step against the exactly translated sine; error drops by
        # at least 2^4 per refinement (RK4 floor)
        def err(n):
            g = Grid(1, n)
            s = scheme_coefficients(name)
            dt = 0.8 * g.h
            q = CellField.from_interior(g, sine_cell_averages(g))
            q1, _ = rk4_high_order_step(q, (np.ones(n),), dt, s, 4)
            edges = g.lo + np.arange(n + 1) * g.h - dt
            anti = -np.cos(2 * np.pi * edges) / (2 * np.pi)
            exact = np.diff(anti) / g.h
            return np.max(np.abs(q1.interior - exact))

        assert err(32) / err(64) >= 16.0

    def test_conservation(self):
        rng = np.random.default_rng(1)
        g = Grid(2, 24)
        uf = face_average_velocity(ConstantDiagonal(dim=2), g)
        q = CellField.from_interior(g, rng.random((24, 24)))
        before = conserved_sum(q)
        q1, _ = rk4_high_order_step(q, uf, 0.8 * g.h, scheme_coefficients("u9"), 6)
        assert conserved_sum(q1) == pytest.approx(before, rel=1e-13)

    def test_flux_form_matches_stage_combination(self):
        rng = np.random.default_rng(2)
        g = Grid(2, 24)
        uf = face_average_velocity(ConstantDiagonal(dim=2), g)
        q = CellField.from_interior(g, rng.random((24, 24)))
        dt = 0.7 * g.h
        s = scheme_coefficients("u7")
        q_flux, _ = rk4_high_order_step(q, uf, dt, s, 6)
        q_stage = rk4_stage_combination(q, uf, dt, s, 6)
        assert np.max(np.abs(q_flux.interior - q_stage.interior)) <= 1e-13

    def test_linearity(self):
        rng = np.random.default_rng(3)
        g = Grid(1, 32)
        uf = (np.ones(32),)
        s = scheme_coefficients("u5")
        dt = 0.8 * g.h
        a, b = 2.0, -0.5
        q1 = rng.random(32)
        q2 = rng.random(32)
        lhs, _ = rk4_high_order_step(
            CellField.from_interior(g, a * q1 + b * q2), uf, dt, s, 4
        )
        r1, _ = rk4_high_order_step(CellField.from_interior(g, q1), uf, dt, s, 4)
        r2, _ = rk4_high_order_step(CellField.from_interior(g, q2), uf, dt, s, 4)
        rhs = a * r1.interior + b * r2.interior
        assert np.max(np.abs(lhs.interior - rhs)) <= 1e-13
