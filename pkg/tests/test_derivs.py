"""Partial derivatives: angular, radial split, Wirtinger pair, field export."""

import io
import math

import numpy as np
import pytest

from diskpoisson.derivs import (
    FLAG_NONE,
    FLAG_ORIGIN,
    FLAG_UNDER_RESOLVED,
    DerivField,
    J1,
    J2,
    circle_derivs,
    deriv_field,
    dr_f,
    dtheta_f,
    dz_dzbar_f,
    fd_check,
    read_deriv_csv,
    sine_moment,
    sine_moment_exact,
    write_deriv_csv,
)
from diskpoisson.kernel import BoundaryData, QuadSpec, poisson_integral
from diskpoisson.mappings import HypMonomial


def mix(thetas):
    e = np.exp(1j * np.asarray(thetas, dtype=float))
    return e + 0.3 * e**-2 + 0.7


def dmix(thetas):
    e = np.exp(1j * np.asarray(thetas, dtype=float))
    return 1j * e - 0.6j * e**-2


@pytest.fixture(scope="module")
def q():
    return QuadSpec()


@pytest.fixture(scope="module")
def F_mix():
    return BoundaryData.from_function(mix, 2048, deriv=dmix)


class TestAngular:
    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_unweighted_power(self, n, q):
        # alpha = 0 extends e^{i n t} to z^n, so df/dtheta = i n z^n.
        F = BoundaryData.from_function(
            lambda th: np.exp(1j * n * np.asarray(th)), 2048,
            deriv=lambda th: 1j * n * np.exp(1j * n * np.asarray(th)),
        )
        z = 0.4 * np.exp(1.1j)
        got = dtheta_f(0.0, F, z, q)
        assert got == pytest.approx(1j * n * z**n, rel=1e-12)

    def test_spectral_fallback_matches_closed_form(self, q, F_mix):
        # Sampled-only data goes through the interpolant derivative.
        F_sampled = BoundaryData.from_samples(F_mix.thetas, F_mix.values)
        z = 0.6 * np.exp(0.3j)
        a = -0.5
        assert dtheta_f(a, F_sampled, z, q) == pytest.approx(
            dtheta_f(a, F_mix, z, q), rel=1e-10
        )


class TestRadialSplit:
    def test_first_piece_is_weighted_value(self, q, F_mix):
        z = 0.45 * np.exp(2.0j)
        for alpha in (-0.5, 1.5):
            assert J1(alpha, F_mix, z, q) == pytest.approx(
                alpha * poisson_integral(alpha, F_mix, z, q), rel=1e-14
            )

    def test_second_piece_vanishes_for_unweighted_constant(self, q):
        # alpha = 0 kills the second term; a constant kills the first.
        F = BoundaryData.from_function(
            lambda th: np.full(len(th), 1.0 + 0.0j), 2048,
            deriv=lambda th: np.zeros(len(th), dtype=complex),
        )
        assert abs(J2(0.0, F, 0.5 + 0.2j, q)) < 1e-14

    def test_decomposition_matches_finite_differences(self, q, F_mix):
        h = 1e-4
        for alpha in (-0.5, 0.0, 1.0):
            for z in (0.3 + 0.2j, -0.5 + 0.4j, 0.75j):
                assert fd_check(alpha, F_mix, z, h, q) < 1e-6

    def test_origin_rejected(self, q, F_mix):
        with pytest.raises(ValueError, match="origin"):
            dr_f(0.0, F_mix, 0.0, q)

    def test_fd_check_domain(self, q, F_mix):
        with pytest.raises(ValueError, match="fd_check"):
            fd_check(0.0, F_mix, 0.0, 1e-4, q)
        with pytest.raises(ValueError, match="fd_check"):
            fd_check(0.0, F_mix, 0.999 + 0.0j, 1e-2, q)


class TestWirtinger:
    def test_against_closed_form(self, q):
        m = HypMonomial(-0.5, 1)
        F = m.boundary(2048)
        for z in (0.5 * np.exp(0.7j), 0.25 * np.exp(-2.0j), 0.8 + 0.0j):
            dz_c, dzbar_c, dr_c = m.derivs(z)
            dz_q, dzbar_q = dz_dzbar_f(-0.5, F, z, q)
            assert dz_q == pytest.approx(dz_c, rel=1e-10)
            assert dzbar_q == pytest.approx(dzbar_c, rel=1e-10)
            assert dr_f(-0.5, F, z, q) == pytest.approx(dr_c, rel=1e-10)

    def test_origin_finite_difference(self, q):
        # F(e^{it}) = e^{it} at alpha = 0 extends to f(z) = z.
        F = BoundaryData.from_function(
            lambda th: np.exp(1j * np.asarray(th)), 2048
        )
        dz0, dzbar0 = dz_dzbar_f(0.0, F, 0.0, q)
        assert dz0 == pytest.approx(1.0, abs=1e-9)
        assert abs(dzbar0) < 1e-9

    def test_conjugation_swaps_pair(self, q, F_mix):
        F_conj = BoundaryData.from_function(
            lambda th: np.conj(mix(th)), 2048,
            deriv=lambda th: np.conj(dmix(th)),
        )
        z = 0.55 * np.exp(1.3j)
        for alpha in (-0.5, 1.0):
            dz_c, dzbar_c = dz_dzbar_f(alpha, F_conj, z, q)
            dz_o, dzbar_o = dz_dzbar_f(alpha, F_mix, z, q)
            assert dz_c == pytest.approx(np.conj(dzbar_o), rel=1e-12)
            assert dzbar_c == pytest.approx(np.conj(dz_o), rel=1e-12)


class TestCircleSweep:
    def test_matches_pointwise(self, q, F_mix):
        r = 0.65
        dth, rdr = circle_derivs(-0.5, F_mix, r, q)
        assert dth.shape == (2048,)
        idx = np.arange(0, 2048, 256)
        for j in idx:
            z = r * np.exp(1j * F_mix.thetas[j])
            assert dth[j] == pytest.approx(dtheta_f(-0.5, F_mix, z, q), rel=1e-10)
            assert rdr[j] == pytest.approx(r * dr_f(-0.5, F_mix, z, q), rel=1e-10)

    def test_radius_domain(self, q, F_mix):
        with pytest.raises(ValueError, match="radius"):
            circle_derivs(0.0, F_mix, 0.9995, q)


class TestSineMoment:
    @pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.0, 1.0, 2.5])
    @pytest.mark.parametrize("r", [0.0, 0.25, 0.9, 0.99])
    def test_quadrature_matches_closed_form(self, alpha, r):
        got = sine_moment(alpha, r)
        want = sine_moment_exact(alpha, r)
        if r == 0.0:
            assert got == pytest.approx(0.0, abs=1e-14)
            assert want == 0.0
        else:
            assert got == pytest.approx(want, rel=1e-12)

    def test_domain(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError, match="r must"):
                sine_moment(0.0, bad)
            with pytest.raises(ValueError, match="r must"):
                sine_moment_exact(0.0, bad)


class TestDerivField:
    def test_grid_shapes_and_flags(self, F_mix):
        q_small = QuadSpec(angular_nodes=256, r_max=0.99,
                           radial_grid=np.array([0.0, 0.3, 0.9, 0.99]))
        fld = deriv_field(-0.5, F_mix, q_small, n_thetas=64)
        # origin contributes one point, other radii 64 each
        assert len(fld.points) == 1 + 3 * 64
        assert fld.flags[0] == FLAG_ORIGIN
        assert math.isnan(fld.dr[0].real)
        r = np.abs(fld.points)
        inner = (r > 0.0) & (r < 0.9)
        assert all(f == FLAG_NONE for f, m in zip(fld.flags, inner) if m)
        # 256 nodes under-resolve r = 0.99 (needs 800)
        outer = np.isclose(r, 0.99)
        assert all(f == FLAG_UNDER_RESOLVED for f, m in zip(fld.flags, outer) if m)
        assert fld.r_max == pytest.approx(0.99)

    def test_divisibility_enforced(self, F_mix, q):
        with pytest.raises(ValueError, match="divide"):
            deriv_field(0.0, F_mix, q, n_thetas=100)

    def test_matches_closed_form_field(self):
        m = HypMonomial(-0.5, 2)
        F = m.boundary(2048)
        q_small = QuadSpec(radial_grid=np.array([0.2, 0.5, 0.8]))
        fld = deriv_field(-0.5, F, q_small, n_thetas=32)
        want = m.field(fld.points)
        assert np.max(np.abs(fld.dz - want.dz)) < 1e-10
        assert np.max(np.abs(fld.dzbar - want.dzbar)) < 1e-10
        assert np.max(np.abs(fld.dr - want.dr)) < 1e-10
        assert np.max(np.abs(fld.dtheta - want.dtheta)) < 1e-10

    def test_array_length_validation(self):
        pts = np.array([0.1 + 0.0j, 0.2 + 0.0j])
        ok = np.zeros(2, dtype=complex)
        with pytest.raises(ValueError, match="point count"):
            DerivField(pts, ok, ok, ok, np.zeros(3, dtype=complex))
        with pytest.raises(ValueError, match="flags"):
            DerivField(pts, ok, ok, ok, ok, flags=["x"])


class TestFromWirtinger:
    def test_polar_identities(self):
        rng = np.random.default_rng(5)
        pts = 0.9 * np.sqrt(rng.uniform(size=40)) * np.exp(
            2j * np.pi * rng.uniform(size=40)
        )
        dz = rng.normal(size=40) + 1j * rng.normal(size=40)
        dzbar = rng.normal(size=40) + 1j * rng.normal(size=40)
        fld = DerivField.from_wirtinger(pts, dz, dzbar)
        want_dth = 1j * (pts * dz - np.conj(pts) * dzbar)
        want_dr = (pts * dz + np.conj(pts) * dzbar) / np.abs(pts)
        assert np.allclose(fld.dtheta, want_dth, atol=1e-14)
        assert np.allclose(fld.dr, want_dr, atol=1e-14)
        assert all(f == FLAG_NONE for f in fld.flags)

    def test_origin_flagged_nan(self):
        fld = DerivField.from_wirtinger(
            np.array([0.0 + 0.0j, 0.5 + 0.0j]),
            np.array([1.0 + 0.0j, 1.0 + 0.0j]),
            np.array([0.0j, 0.0j]),
        )
        assert fld.flags == [FLAG_ORIGIN, FLAG_NONE]
        assert math.isnan(fld.dr[0].real)
        assert fld.dr[1] == pytest.approx(1.0)


class TestDerivCsv:
    def test_round_trip_bit_exact(self, tmp_path):
        m = HypMonomial(-0.5, 1)
        pts = np.concatenate([[0.0 + 0.0j], 0.7 * np.exp(1j * np.linspace(0, 5, 7))])
        fld = m.field(pts)
        path = tmp_path / "field.csv"
        write_deriv_csv(str(path), fld)
        back = read_deriv_csv(str(path))
        assert np.array_equal(back.dtheta, fld.dtheta)
        assert np.array_equal(back.dr, fld.dr, equal_nan=True)
        assert np.array_equal(back.dz, fld.dz)
        assert np.array_equal(back.dzbar, fld.dzbar)
        assert back.flags == fld.flags
        # points are reassembled from (r, theta): exact only up to rounding
        assert np.max(np.abs(back.points - fld.points)) < 1e-15

    def test_header_validated(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            read_deriv_csv(str(path))

    def test_rows_stream(self):
        fld = DerivField.from_wirtinger(
            np.array([0.5 + 0.0j]), np.array([1.0 + 0.0j]), np.array([0.0j])
        )
        buf = io.StringIO()
        from diskpoisson.derivs import write_deriv_rows

        write_deriv_rows(buf, fld)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0].startswith("r,theta,re_dtheta")
        assert len(lines) == 2
