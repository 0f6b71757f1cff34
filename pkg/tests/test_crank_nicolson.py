import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcfdm import (
    MarketParams,
    OptionContract,
    OptionKind,
    SingularSystemError,
    ThetaConfig,
    TridiagonalSystem,
    ValidationError,
    black_scholes_price,
    build_grid,
    crank_nicolson_surface,
    max_stable_dt,
    payoff,
    solve_crank_nicolson,
    thomas_solve,
)

CALL = OptionKind.CALL
PUT = OptionKind.PUT

# fixed truncation putting the spot on-node for n_space in {50, 100, 200}
SHARED_S_MAX = 350.0 / 12.0


def market():
    return MarketParams(r=0.05, sigma=0.25)


def contract(kind=CALL, strike=7.5, maturity=1.0, spot=7.0):
    return OptionContract(kind=kind, strike=strike, maturity=maturity, spot=spot)


def dense_matrix(system: TridiagonalSystem) -> np.ndarray:
    n = system.size
    a = np.diag(system.diag)
    a += np.diag(system.lower, -1)
    a += np.diag(system.upper, 1)
    return a


class TestTridiagonalSystem:
    def test_band_lengths_validated(self):
        with pytest.raises(ValidationError):
            TridiagonalSystem(
                lower=[1.0], diag=[2.0, 2.0, 2.0], upper=[1.0, 1.0], rhs=[0.0] * 3
            )

    def test_rhs_length_validated(self):
        with pytest.raises(ValidationError):
            TridiagonalSystem(
                lower=[1.0, 1.0], diag=[2.0, 2.0, 2.0], upper=[1.0, 1.0], rhs=[0.0]
            )

    def test_arrays_coerced_to_float(self):
        system = TridiagonalSystem(
            lower=[1, 1], diag=[2, 2, 2], upper=[1, 1], rhs=[1, 0, 1]
        )
        assert system.diag.dtype == np.float64


class TestThomasSolve:
    def test_identity_returns_rhs(self):
        b = np.array([3.0, -1.0, 2.5, 0.0])
        system = TridiagonalSystem(
            lower=np.zeros(3), diag=np.ones(4), upper=np.zeros(3), rhs=b
        )
        np.testing.assert_allclose(thomas_solve(system), b, atol=1e-15)

    def test_hand_eliminated_three_by_three(self):
        system = TridiagonalSystem(
            lower=[-1.0, -1.0], diag=[2.0, 2.0, 2.0], upper=[-1.0, -1.0],
            rhs=[1.0, 0.0, 1.0],
        )
        np.testing.assert_allclose(thomas_solve(system), [1.0, 1.0, 1.0], atol=1e-12)

    def test_random_diagonally_dominant_residual(self):
        rng = np.random.default_rng(7)
        n = 50
        lower = rng.uniform(-1.0, 1.0, n - 1)
        upper = rng.uniform(-1.0, 1.0, n - 1)
        diag = 3.0 + rng.uniform(0.0, 1.0, n)
        rhs = rng.uniform(-5.0, 5.0, n)
        system = TridiagonalSystem(lower=lower, diag=diag, upper=upper, rhs=rhs)
        x = thomas_solve(system)
        residual = np.abs(dense_matrix(system) @ x - rhs).max()
        assert residual <= 1e-10 * (1.0 + np.abs(rhs).max())

    def test_singular_pivot_raises(self):
        system = TridiagonalSystem(
            lower=[1.0], diag=[0.0, 1.0], upper=[1.0], rhs=[1.0, 1.0]
        )
        with pytest.raises(SingularSystemError):
            thomas_solve(system)

    def test_elimination_created_zero_pivot_raises(self):
        # second pivot becomes 2 - 2*2/2 = 0 mid-sweep
        system = TridiagonalSystem(
            lower=[2.0], diag=[2.0, 2.0], upper=[2.0], rhs=[1.0, 1.0]
        )
        with pytest.raises(SingularSystemError):
            thomas_solve(system)

    def test_all_zero_matrix_raises(self):
        system = TridiagonalSystem(
            lower=[0.0], diag=[0.0, 0.0], upper=[0.0], rhs=[1.0, 1.0]
        )
        with pytest.raises(SingularSystemError):
            thomas_solve(system)

    @given(data=st.data(), n=st.integers(2, 30))
    @settings(max_examples=60)
    def test_multiply_round_trip(self, data, n):
        floats = st.floats(-1.0, 1.0)
        lower = np.array(data.draw(st.lists(floats, min_size=n - 1, max_size=n - 1)))
        upper = np.array(data.draw(st.lists(floats, min_size=n - 1, max_size=n - 1)))
        bulk = np.array(data.draw(st.lists(floats, min_size=n, max_size=n)))
        diag = 2.5 + bulk
        x_true = np.array(data.draw(st.lists(floats, min_size=n, max_size=n)))
        system = TridiagonalSystem(
            lower=lower, diag=diag, upper=upper,
            rhs=dense_matrix(
                TridiagonalSystem(lower=lower, diag=diag, upper=upper, rhs=np.zeros(n))
            ) @ x_true,
        )
        x = thomas_solve(system)
        np.testing.assert_allclose(x, x_true, atol=1e-9, rtol=1e-9)


class TestSolveCrankNicolson:
    def test_benchmark_call(self):
        c = contract()
        result = solve_crank_nicolson(c, market(), build_grid(c))
        assert result.price == pytest.approx(0.63791, abs=1e-2)
        assert result.abs_error <= 1e-2

    def test_degenerate_maturity_returns_payoff(self):
        c = contract(kind=PUT, maturity=1e-12)
        result = solve_crank_nicolson(c, market(), build_grid(c, n_time=1))
        assert result.price == pytest.approx(0.5, abs=1e-9)

    def test_put_call_parity(self):
        call_price = solve_crank_nicolson(contract(CALL), market(), build_grid(contract(CALL))).price
        put_price = solve_crank_nicolson(contract(PUT), market(), build_grid(contract(PUT))).price
        gap = 7.0 - 7.5 * math.exp(-0.05)
        assert abs(call_price - put_price - gap) <= 1e-2

    def test_second_order_spatial_convergence(self):
        errors = []
        for n_space in (50, 100, 200):
            c = contract()
            disc = build_grid(c, n_space=n_space, n_time=2000, s_max=SHARED_S_MAX)
            errors.append(solve_crank_nicolson(c, market(), disc).abs_error)
        assert errors[0] / errors[1] >= 3.0
        assert errors[1] / errors[2] >= 3.0

    def test_stable_far_past_the_explicit_bound(self):
        c = contract()
        disc = build_grid(c, n_time=6)
        explicit_bound = max_stable_dt(market(), disc, ThetaConfig())
        assert disc.dt >= 100.0 * explicit_bound
        surface = crank_nicolson_surface(c, market(), disc)
        values = surface.values
        cap = disc.s_max - 7.5 * math.exp(-0.05)
        assert np.isfinite(values).all()
        assert values.min() >= -1e-12
        assert values.max() <= cap + 1e-9

    def test_surface_shape_and_terminal_level(self):
        c = contract(kind=PUT)
        disc = build_grid(c, n_space=60, n_time=40)
        surface = crank_nicolson_surface(c, market(), disc)
        assert surface.values.shape == (41, 61)
        np.testing.assert_allclose(
            surface.level(0), payoff(c, disc.nodes()), atol=1e-15
        )
        assert surface.is_nonnegative(tol=1e-12)

    def test_one_step_satisfies_the_trapezoidal_equation(self):
        # (v_new - v_old)/dt must equal the average of the spatial operator
        # applied to both levels, with boundary values read off the levels
        c = contract(kind=PUT, strike=5.5, spot=5.0)
        m = market()
        disc = build_grid(c, n_space=12, n_time=5)
        surface = crank_nicolson_surface(c, m, disc)
        s = disc.nodes()

        def spatial_operator(level):
            d = 0.5 * m.sigma**2 * s[1:-1] ** 2 / disc.ds**2
            cv = m.r * s[1:-1] / (2.0 * disc.ds)
            return (
                d * (level[2:] - 2.0 * level[1:-1] + level[:-2])
                + cv * (level[2:] - level[:-2])
                - m.r * level[1:-1]
            )

        for step in (1, 3, 5):
            old, new = surface.level(step - 1), surface.level(step)
            lhs = (new[1:-1] - old[1:-1]) / disc.dt
            rhs = 0.5 * (spatial_operator(new) + spatial_operator(old))
            np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_price_matches_surface_final_level(self):
        c = contract()
        disc = build_grid(c, n_space=80, n_time=50)
        result = solve_crank_nicolson(c, m := market(), disc)
        surface = crank_nicolson_surface(c, m, disc)
        interpolated = float(np.interp(c.spot, disc.nodes(), surface.level(disc.n_time)))
        assert result.price == pytest.approx(interpolated, abs=1e-14)

    def test_elapsed_and_error_fields(self):
        c = contract()
        result = solve_crank_nicolson(c, market(), build_grid(c, n_space=20, n_time=10))
        assert result.elapsed_seconds >= 0.0
        exact = black_scholes_price(c, market())
        assert result.abs_error == pytest.approx(abs(result.price - exact), abs=1e-15)
