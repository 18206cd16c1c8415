import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import periodic_mean
from drivenlattice.model import ResonanceClass, solve_diophantine
from drivenlattice.specialfn import (
    BesselSum2D,
    asymptotic_zero_estimates,
    bessel_j,
    bessel_jn_all,
    bessel_tail_index,
    gen_bessel_2d,
    gen_bessel_2d_slice,
    inf_var_bessel,
    inf_var_bessel_table,
)


class TestBesselJ:
    def test_at_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        for nu in (1, -1, 2, 7, -13):
            assert bessel_j(nu, 0.0) == 0.0

    def test_first_zero_of_j1(self):
        # bracket the dip of J_1 on (3, 4) by bisection on this evaluator
        lo, hi = 3.0, 4.0
        flo = bessel_j(1, lo)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = bessel_j(1, mid)
            if flo * fm <= 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        root = 0.5 * (lo + hi)
        assert root == pytest.approx(3.8317059702, abs=1e-9)
        assert abs(bessel_j(1, 3.8317059702)) < 1e-9

    def test_negative_order_symmetry(self, rng):
        for _ in range(50):
            nu = int(rng.integers(0, 40))
            x = float(rng.uniform(-30, 30))
            assert bessel_j(-nu, x) == pytest.approx(
                (-1.0) ** nu * bessel_j(nu, x), abs=5e-15
            )

    def test_against_reference(self, rng):
        xs = np.concatenate([rng.uniform(-200, 200, 30), [0.5, -2.0, 2.0, 199.5]])
        for x in xs:
            nus = rng.integers(0, 250, 12)
            for nu in nus:
                assert bessel_j(int(nu), float(x)) == pytest.approx(
                    float(scipy.special.jv(int(nu), float(x))), abs=1e-13
                )

    def test_recurrence_residual(self, rng):
        for _ in range(120):
            nu = int(rng.integers(1, 60))
            x = float(rng.uniform(0.5, 80))
            res = (
                bessel_j(nu - 1, x)
                + bessel_j(nu + 1, x)
                - (2.0 * nu / x) * bessel_j(nu, x)
            )
            assert abs(res) < 1e-10

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            bessel_j(0, math.inf)
        with pytest.raises(ValueError):
            bessel_j(2, math.nan)

    def test_tail_index_is_a_bound(self, rng):
        for x in (0.5, 3.0, 17.2, 90.0, 200.0):
            k = bessel_tail_index(x)
            assert abs(float(scipy.special.jv(k, x))) < 1e-16
            table = bessel_jn_all(k, x)
            assert abs(table[-1]) < 1e-15


class TestGenBessel2D:
    def test_reduces_to_ordinary_at_v_zero(self):
        rc = solve_diophantine(1, 2, 1)
        for u in (-6.5, -2.0, 0.0, 3.3, 11.0):
            assert gen_bessel_2d(rc, u, 0.0) == pytest.approx(
                bessel_j(1, u), abs=1e-14
            )

    def test_nodal_point(self):
        rc = solve_diophantine(1, 2, 1)
        assert abs(gen_bessel_2d(rc, -6.49, 1.0)) < 2e-3

    def test_extremum_derivative_vanishes(self):
        rc = solve_diophantine(1, 2, 1)
        h = 1e-5
        deriv = (
            gen_bessel_2d(rc, -4.68 + h, 1.0) - gen_bessel_2d(rc, -4.68 - h, 1.0)
        ).real / (2 * h)
        assert abs(deriv) < 2e-3

    def test_representative_independence(self, rng):
        for _ in range(100):
            p = int(rng.integers(1, 6))
            q = int(rng.integers(1, 6))
            if math.gcd(p, q) != 1:
                continue
            n = int(rng.integers(-12, 13))
            rc = solve_diophantine(p, q, n)
            u = float(rng.uniform(-10, 10))
            v = float(rng.uniform(-10, 10))
            shift = int(rng.integers(1, 4))
            other = ResonanceClass(
                p=p, q=q, n=n, resonant=True,
                M=rc.M - q * shift, N=rc.N + p * shift,
            )
            a = gen_bessel_2d(rc, u, v, 1.0)
            b = gen_bessel_2d(other, u, v, 1.0)
            assert a == pytest.approx(b, abs=1e-13)

    def test_representative_shift_is_a_power_of_z(self):
        rc = solve_diophantine(2, 3, 1)
        z = np.exp(0.4j)
        other = ResonanceClass(
            p=2, q=3, n=1, resonant=True, M=rc.M - 3, N=rc.N + 2
        )
        a = gen_bessel_2d(rc, 2.5, -1.5, z)
        b = gen_bessel_2d(other, 2.5, -1.5, z)
        assert b == pytest.approx(a / z, abs=1e-13)

    def test_bound_for_nonzero_n(self, rng):
        bound = 1.0 / math.sqrt(2.0) + 1e-12
        for _ in range(300):
            p = int(rng.integers(1, 5))
            q = int(rng.integers(1, 5))
            if math.gcd(p, q) != 1:
                continue
            n = int(rng.integers(1, 30)) * int(rng.choice([-1, 1]))
            rc = solve_diophantine(p, q, n)
            u = float(rng.uniform(-20, 20))
            v = float(rng.uniform(-20, 20))
            z = complex(np.exp(1j * p * rng.uniform(0, 2 * math.pi)))
            assert abs(gen_bessel_2d(rc, u, v, z)) <= bound

    def test_quadrature_oracle(self, rng):
        # sum over the resonant index family equals the period mean of
        # e^{-i omega_B t} e^{i u sin(omega1 t)} e^{i v sin(omega2 t + delta)}
        for p, q, n, u, v, delta in [
            (1, 2, 1, -4.68, 1.0, 0.0),
            (1, 2, 29, 3.0, -8.0, 0.0),
            (2, 3, 2, 1.7, 2.2, 0.9),
            (3, 4, -5, -2.0, 6.0, 2.1),
        ]:
            rc = solve_diophantine(p, q, n)
            omega1 = 1.3
            omega2 = omega1 * q / p
            omega_b = omega1 * n / p
            T = 2 * math.pi * p / omega1

            def integrand(ts):
                return np.exp(
                    -1j * omega_b * ts
                    + 1j * u * np.sin(omega1 * ts)
                    + 1j * v * np.sin(omega2 * ts + delta)
                )

            oracle = periodic_mean(integrand, T)
            z = complex(np.exp(1j * p * delta))
            series = np.exp(1j * rc.N * delta) * gen_bessel_2d(rc, u, v, z)
            assert series == pytest.approx(oracle, abs=1e-8)

    def test_slice_matches_pointwise(self, rng):
        rc = solve_diophantine(1, 2, 29)
        us = np.linspace(-8, 8, 33)
        z = complex(np.exp(0.25j))
        vals = gen_bessel_2d_slice(rc, us, -20.0, z)
        for u, val in zip(us, vals):
            assert val == pytest.approx(gen_bessel_2d(rc, u, -20.0, z), abs=1e-13)

    def test_rejects_non_resonant(self):
        rc = solve_diophantine(2, 4, 3)
        with pytest.raises(ValueError):
            gen_bessel_2d(rc, 1.0, 1.0)

    def test_rejects_off_circle_parameter(self):
        rc = solve_diophantine(1, 2, 1)
        with pytest.raises(ValueError):
            gen_bessel_2d(rc, 1.0, 1.0, z=0.5)

    def test_truncation_tail_terms_negligible(self):
        rc = solve_diophantine(1, 2, 1)
        s = BesselSum2D.prepare(rc, -6.49, 1.0)
        for k in (s.k_min - 1, s.k_max + 1):
            term = bessel_j(s.M - s.q * k, s.u) * bessel_j(s.N + s.p * k, s.v)
            assert abs(term) < 1e-16


class TestInfVarBessel:
    def test_empty_is_delta(self):
        assert inf_var_bessel(0, []) == 1.0
        assert inf_var_bessel(3, []) == 0.0
        assert inf_var_bessel(0, [0.0, 0.0]) == 1.0

    def test_single_harmonic_reduces_to_ordinary(self):
        for x in (0.3, 2.0, -5.5):
            for nu in range(-5, 6):
                assert inf_var_bessel(nu, [x]) == pytest.approx(
                    bessel_j(nu, x), abs=1e-13
                )

    def test_matches_two_dimensional_sum(self):
        rc = solve_diophantine(1, 2, 1)
        for u in np.linspace(-3, 3, 5):
            for v in np.linspace(-3, 3, 5):
                assert inf_var_bessel(1, [u, v]) == pytest.approx(
                    gen_bessel_2d(rc, float(u), float(v), 1.0).real, abs=1e-12
                )

    def test_quadrature_oracle(self):
        betas = [0.8, -1.3, 0.0, 0.45]

        def integrand(nu):
            def fn(ts):
                phase = sum(
                    b * np.sin((m + 1) * ts) for m, b in enumerate(betas)
                )
                return np.exp(1j * phase - 1j * nu * ts)

            return fn

        for nu in (-3, 0, 1, 4):
            oracle = periodic_mean(integrand(nu), 2 * math.pi)
            assert inf_var_bessel(nu, betas) == pytest.approx(oracle, abs=1e-8)

    def test_table_indexing(self):
        off, table = inf_var_bessel_table([1.0, 0.5])
        nu = off + int(np.argmax(np.abs(table)))
        assert inf_var_bessel(nu, [1.0, 0.5]) == pytest.approx(
            float(table[np.argmax(np.abs(table))])
        )


class TestAsymptoticZeros:
    def test_large_field_case(self):
        est = asymptotic_zero_estimates(29, -20.0, 2)
        assert est[0] == pytest.approx(3.38, abs=0.01)
        assert est[1] == pytest.approx(6.77, abs=0.01)

    def test_even_branch_smallest(self):
        est = asymptotic_zero_estimates(0, -20.0, 1)
        assert est[0] == pytest.approx(math.pi / (2 * math.sqrt(0.5)), abs=1e-12)

    def test_against_frozen_numeric_zeros(self):
        # sign-change zeros of the bilinear sum at n=29, v=-20 (bisected)
        numeric = (3.3716, 6.7495)
        est = asymptotic_zero_estimates(29, -20.0, 2)
        for e, z in zip(est, numeric):
            assert abs(e - z) <= 0.02

    def test_steep_branch_sorted_positive(self):
        est = asymptotic_zero_estimates(50, -20.0, 4)
        assert all(u > 0 for u in est)
        assert est == sorted(est)
        root = math.sqrt(0.5 + 50.0 / 80.0)
        assert est[0] == pytest.approx(2 * math.pi / 2 / root)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            asymptotic_zero_estimates(50, 20.0, 1)  # discriminant <= 0
        with pytest.raises(ValueError):
            asymptotic_zero_estimates(1, 0.0, 1)
        with pytest.raises(ValueError):
            asymptotic_zero_estimates(-1, -20.0, 1)
        with pytest.raises(ValueError):
            asymptotic_zero_estimates(1, -20.0, 0)


@given(nu=st.integers(1, 50), x=st.floats(0.5, 60.0))
@settings(max_examples=150, deadline=None)
def test_recurrence_property(nu, x):
    res = bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - (2.0 * nu / x) * bessel_j(nu, x)
    assert abs(res) < 1e-10
