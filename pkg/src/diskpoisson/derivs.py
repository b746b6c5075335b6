"""Partial derivatives of kernel-reproduced disk functions.

For f(z) = (1/2pi) int K_a(z e^{-it}) F(e^{it}) dt the angular derivative
is the same operator applied to dF/dt. The radial derivative splits as
r df/dr = J1 + J2 where J1 = a f (the kernel reproduces it directly) and
J2 is an integrated-by-parts pair of real-kernel integrals that stays
finite as r -> 1. The Wirtinger derivatives follow from the polar frame:

    df/dz    = (r df/dr - i df/dtheta) / (2 z)
    df/dzbar = (r df/dr + i df/dtheta) / (2 conj(z))

At the origin the polar frame degenerates; df/dz and df/dzbar fall back to
central finite differences there and the point is flagged.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kernel import (
    AlphaParam,
    BoundaryData,
    QuadSpec,
    as_alpha,
    boundary_derivative,
    kernel_K,
    poisson_integral,
)

__all__ = [
    "dtheta_f",
    "J1",
    "J2",
    "dr_f",
    "dz_dzbar_f",
    "fd_check",
    "sine_moment",
    "sine_moment_exact",
    "DerivField",
    "deriv_field",
    "circle_derivs",
    "write_deriv_rows",
    "write_deriv_csv",
    "read_deriv_csv",
]

_FD_H = 1e-5

FLAG_NONE = ""
FLAG_ORIGIN = "origin_fd"
FLAG_UNDER_RESOLVED = "under_resolved"


def dtheta_f(a, F: BoundaryData, z, q: QuadSpec) -> complex:
    """Angular derivative df/dtheta at z: the kernel operator applied to dF/dt."""
    return poisson_integral(a, boundary_derivative(F), z, q)


def J1(a, F: BoundaryData, z, q: QuadSpec) -> complex:
    """First radial piece: alpha times the kernel operator itself."""
    a = as_alpha(a)
    return a.alpha * poisson_integral(a, F, z, q)


def _shifted_samples(F: BoundaryData, theta: float, deriv: bool) -> np.ndarray:
    """Samples of F (or dF/dt) at the rotated grid t_j + theta."""
    if deriv and F.closed_form_deriv is not None:
        return np.asarray(F.closed_form_deriv(F.thetas + theta), dtype=complex)
    if not deriv and F.closed_form is not None:
        return np.asarray(F.closed_form(F.thetas + theta), dtype=complex)
    coeffs = np.fft.fft(F.values)
    ks = np.fft.fftfreq(F.n_samples, d=1.0 / F.n_samples)
    if deriv:
        ks_d = ks.copy()
        ks_d[F.n_samples // 2] = 0.0
        coeffs = 1j * ks_d * coeffs
    return np.fft.ifft(coeffs * np.exp(1j * ks * theta))


def J2(a, F: BoundaryData, z: complex, q: QuadSpec) -> complex:
    """Second radial piece, the integrated-by-parts form that is finite as r -> 1.

    With z = r e^{i theta}, D(t) = |1 - r e^{it}|^2 and w = 1 - r^2:

        J2 = -(c_a w^a / pi)    int dF/dt(e^{i(t+theta)}) r sin t / D^{(a+2)/2} dt
             -(a c_a w^a / 2pi) int F(e^{i(t+theta)}) (1 - r cos t) / D^{(a+2)/2} dt
    """
    a = as_alpha(a)
    z = complex(z)
    r = abs(z)
    if r > q.r_max:
        raise ValueError(f"evaluation point must satisfy |z| <= r_max = {q.r_max}")
    if F.closed_form is not None and F.n_samples != q.angular_nodes:
        F = F.resample(q.angular_nodes)
    theta = math.atan2(z.imag, z.real)
    t = F.thetas
    n = F.n_samples
    dpow = np.abs(1.0 - r * np.exp(1j * t)) ** (a.alpha + 2.0)
    k1 = r * np.sin(t) / dpow
    k2 = (1.0 - r * np.cos(t)) / dpow
    fdot = _shifted_samples(F, theta, deriv=True)
    fval = _shifted_samples(F, theta, deriv=False)
    w_a = (1.0 - r * r) ** a.alpha
    dt = 2.0 * np.pi / n
    term1 = -(a.c_alpha * w_a / np.pi) * np.sum(fdot * k1) * dt
    term2 = -(a.alpha * a.c_alpha * w_a / (2.0 * np.pi)) * np.sum(fval * k2) * dt
    return complex(term1 + term2)


def dr_f(a, F: BoundaryData, z: complex, q: QuadSpec) -> complex:
    """Radial derivative df/dr = (J1 + J2)/r; undefined (direction-dependent) at 0."""
    r = abs(complex(z))
    if r == 0.0:
        raise ValueError("df/dr is direction-dependent at the origin")
    return (J1(a, F, z, q) + J2(a, F, z, q)) / r


def dz_dzbar_f(a, F: BoundaryData, z: complex, q: QuadSpec) -> tuple[complex, complex]:
    """Wirtinger derivatives (df/dz, df/dzbar) at z.

    Uses the polar-frame combination away from the origin; at z = 0 falls
    back to central finite differences in x and y with step 1e-5.
    """
    z = complex(z)
    if z == 0.0:
        h = _FD_H
        fxp = poisson_integral(a, F, h, q)
        fxm = poisson_integral(a, F, -h, q)
        fyp = poisson_integral(a, F, 1j * h, q)
        fym = poisson_integral(a, F, -1j * h, q)
        dx = (fxp - fxm) / (2.0 * h)
        dy = (fyp - fym) / (2.0 * h)
        return (dx - 1j * dy) / 2.0, (dx + 1j * dy) / 2.0
    rdr = J1(a, F, z, q) + J2(a, F, z, q)
    dth = dtheta_f(a, F, z, q)
    return (rdr - 1j * dth) / (2.0 * z), (rdr + 1j * dth) / (2.0 * z.conjugate())


def fd_check(a, F: BoundaryData, z: complex, h: float, q: QuadSpec) -> float:
    """Max relative residual of the four derivatives against central differences.

    Differences of the quadrature values of f itself; expected O(h^2) for
    interior z. Residuals are normalized by max(1, |analytic value|).
    """
    z = complex(z)
    r = abs(z)
    if r == 0.0 or r + h > q.r_max:
        raise ValueError("fd_check needs 0 < |z| and |z| + h <= r_max")
    theta = math.atan2(z.imag, z.real)

    def f(p):
        return poisson_integral(a, F, p, q)

    dx_fd = (f(z + h) - f(z - h)) / (2.0 * h)
    dy_fd = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    dz_fd = (dx_fd - 1j * dy_fd) / 2.0
    dzbar_fd = (dx_fd + 1j * dy_fd) / 2.0
    dr_fd = (f((r + h) * np.exp(1j * theta)) - f((r - h) * np.exp(1j * theta))) / (2.0 * h)
    dth_fd = (f(r * np.exp(1j * (theta + h))) - f(r * np.exp(1j * (theta - h)))) / (2.0 * h)

    dth = dtheta_f(a, F, z, q)
    drv = dr_f(a, F, z, q)
    dzv, dzbarv = dz_dzbar_f(a, F, z, q)

    resid = 0.0
    for got, ref in ((dth, dth_fd), (drv, dr_fd), (dzv, dz_fd), (dzbarv, dzbar_fd)):
        resid = max(resid, abs(got - ref) / max(1.0, abs(got)))
    return resid


def sine_moment(a, r: float, n: int = 512) -> float:
    """Weighted sine moment of the radial-derivative kernel.

    (1 - r^2)^a * int_0^{2pi} r |sin t| / |1 - r e^{it}|^{a+2} dt, the
    quantity controlling the J2 term. Evaluated by Gauss-Legendre on
    [0, pi], where |sin t| = sin t and the integrand is smooth.
    """
    a = as_alpha(a)
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    x, wts = np.polynomial.legendre.leggauss(n)
    t = 0.5 * math.pi * (x + 1.0)
    w = 0.5 * math.pi * wts
    dist_sq = 1.0 - 2.0 * r * np.cos(t) + r * r
    integral = 2.0 * float(np.sum(w * r * np.sin(t) * dist_sq ** (-0.5 * (a.alpha + 2.0))))
    return (1.0 - r * r) ** a.alpha * integral


def sine_moment_exact(alpha: float, r: float) -> float:
    """Closed form of sine_moment: (2/a)((1+r)^a - (1-r)^a), log limit at a=0."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    if alpha == 0.0:
        return 2.0 * math.log((1.0 + r) / (1.0 - r))
    return (2.0 / alpha) * ((1.0 + r) ** alpha - (1.0 - r) ** alpha)


def circle_derivs(a, F: BoundaryData, r: float, q: QuadSpec):
    """(df/dtheta, r df/dr) at every grid angle of the circle |z| = r.

    Cyclic-convolution evaluation of the same trapezoid sums the pointwise
    operators use, so a full circle costs a handful of FFTs.
    """
    a = as_alpha(a)
    if F.closed_form is not None and F.n_samples != q.angular_nodes:
        F = F.resample(q.angular_nodes)
    if not 0.0 <= r <= q.r_max:
        raise ValueError(f"radius must lie in [0, r_max = {q.r_max}]")
    t = F.thetas
    n = F.n_samples
    fdot = _shifted_samples(F, 0.0, deriv=True)
    fhat = np.fft.fft(F.values)
    fdot_hat = np.fft.fft(fdot)

    kern_hat = np.fft.fft(kernel_K(a, r * np.exp(1j * t)))
    dth = np.fft.ifft(kern_hat * fdot_hat) / n
    j1 = a.alpha * np.fft.ifft(kern_hat * fhat) / n

    dpow = np.abs(1.0 - r * np.exp(1j * t)) ** (a.alpha + 2.0)
    k1_hat = np.fft.fft(r * np.sin(t) / dpow)
    k2_hat = np.fft.fft((1.0 - r * np.cos(t)) / dpow)
    w_a = (1.0 - r * r) ** a.alpha
    dt = 2.0 * np.pi / n
    # sum_j g(t_j + theta) k(t_j) over the grid is the cross-correlation of
    # g with the (real) kernel k, evaluated at theta.
    term1 = -(a.c_alpha * w_a / np.pi) * dt * np.fft.ifft(fdot_hat * np.conj(k1_hat))
    term2 = -(a.alpha * a.c_alpha * w_a / (2.0 * np.pi)) * dt * np.fft.ifft(fhat * np.conj(k2_hat))
    return dth, j1 + term1 + term2


@dataclass
class DerivField:
    """Derivative samples on a polar grid: df/dtheta, df/dr, df/dz, df/dzbar.

    flags holds one string per point: "" for a clean value, "origin_fd" when
    the Wirtinger pair came from finite differences at z = 0 (df/dr is NaN
    there), "under_resolved" when the angular grid was too coarse for the
    point's radius.
    """

    points: np.ndarray
    dtheta: np.ndarray
    dr: np.ndarray
    dz: np.ndarray
    dzbar: np.ndarray
    flags: list = field(default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.points)
        for arr in (self.dtheta, self.dr, self.dz, self.dzbar):
            if len(arr) != n:
                raise ValueError("derivative arrays must match the point count")
        if not self.flags:
            self.flags = [FLAG_NONE] * n
        if len(self.flags) != n:
            raise ValueError("flags must match the point count")

    @property
    def r_max(self) -> float:
        return float(np.max(np.abs(self.points)))

    @classmethod
    def from_wirtinger(cls, points, dz, dzbar, flags=None) -> "DerivField":
        """Build a field from closed-form Wirtinger derivatives.

        df/dtheta = i (z df/dz - zbar df/dzbar); df/dr = (z df/dz +
        zbar df/dzbar)/r, left NaN (and flagged) at the origin.
        """
        points = np.asarray(points, dtype=complex)
        dz = np.asarray(dz, dtype=complex)
        dzbar = np.asarray(dzbar, dtype=complex)
        zq = points * dz
        zbq = np.conj(points) * dzbar
        dtheta = 1j * (zq - zbq)
        r = np.abs(points)
        with np.errstate(invalid="ignore", divide="ignore"):
            dr = np.where(r > 0.0, (zq + zbq) / np.where(r > 0.0, r, 1.0),
                          complex(math.nan, math.nan))
        if flags is None:
            flags = [FLAG_ORIGIN if ri == 0.0 else FLAG_NONE for ri in r]
        return cls(points, dtheta, dr, dz, dzbar, list(flags))


def deriv_field(a, F: BoundaryData, q: QuadSpec, n_thetas: int = 256) -> DerivField:
    """Evaluate all four derivatives of the kernel extension on a polar grid.

    Radii come from q.radial_grid; each circle is swept at q.angular_nodes
    and subsampled to n_thetas output angles (which must divide it). Points
    whose radius needs more than q.angular_nodes angular nodes are flagged
    under_resolved; the origin uses the finite-difference fallback.
    """
    a = as_alpha(a)
    if F.closed_form is not None and F.n_samples != q.angular_nodes:
        F = F.resample(q.angular_nodes)
    n = F.n_samples
    if n % n_thetas != 0:
        raise ValueError("n_thetas must divide the angular node count")
    stride = n // n_thetas
    sel = np.arange(0, n, stride)
    thetas_out = F.thetas[sel]

    points, dth_all, dr_all, dz_all, dzbar_all, flags = [], [], [], [], [], []
    for r in q.radial_grid:
        if r == 0.0:
            dz0, dzbar0 = dz_dzbar_f(a, F, 0.0, q)
            points.append(np.array([0.0 + 0.0j]))
            dth_all.append(np.array([0.0 + 0.0j]))
            dr_all.append(np.array([complex(math.nan, math.nan)]))
            dz_all.append(np.array([dz0]))
            dzbar_all.append(np.array([dzbar0]))
            flags.append(FLAG_ORIGIN)
            continue
        dth, rdr = circle_derivs(a, F, r, q)
        dth, rdr = dth[sel], rdr[sel]
        zs = r * np.exp(1j * thetas_out)
        dz = (rdr - 1j * dth) / (2.0 * zs)
        dzbar = (rdr + 1j * dth) / (2.0 * np.conj(zs))
        points.append(zs)
        dth_all.append(dth)
        dr_all.append(rdr / r)
        dz_all.append(dz)
        dzbar_all.append(dzbar)
        point_flag = FLAG_UNDER_RESOLVED if n < 8.0 / (1.0 - r) else FLAG_NONE
        flags.extend([point_flag] * len(zs))
    return DerivField(
        np.concatenate(points),
        np.concatenate(dth_all),
        np.concatenate(dr_all),
        np.concatenate(dz_all),
        np.concatenate(dzbar_all),
        flags,
    )


_DERIV_CSV_HEADER = [
    "r", "theta",
    "re_dtheta", "im_dtheta",
    "re_dr", "im_dr",
    "re_dz", "im_dz",
    "re_dzbar", "im_dzbar",
    "flag",
]


def write_deriv_rows(fh, fld: DerivField) -> None:
    """Write the field as CSV rows, one per grid point, to an open stream."""
    r = np.abs(fld.points)
    theta = np.mod(np.angle(fld.points), 2.0 * np.pi)
    writer = csv.writer(fh)
    writer.writerow(_DERIV_CSV_HEADER)
    for i in range(len(fld.points)):
        row = [repr(float(r[i])), repr(float(theta[i]))]
        for arr in (fld.dtheta, fld.dr, fld.dz, fld.dzbar):
            row.append(repr(float(arr[i].real)))
            row.append(repr(float(arr[i].imag)))
        row.append(fld.flags[i])
        writer.writerow(row)


def write_deriv_csv(path: str, fld: DerivField) -> None:
    """Write the field as CSV with one row per grid point."""
    with open(path, "w", newline="") as fh:
        write_deriv_rows(fh, fld)


def read_deriv_csv(path: str) -> DerivField:
    """Read a field written by write_deriv_csv."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != _DERIV_CSV_HEADER:
            raise ValueError(f"unexpected derivative CSV header: {header!r}")
        for row in reader:
            rows.append(row)
    n = len(rows)
    points = np.empty(n, dtype=complex)
    cols = {name: np.empty(n) for name in _DERIV_CSV_HEADER[2:-1]}
    flags = []
    for i, row in enumerate(rows):
        r, theta = float(row[0]), float(row[1])
        points[i] = r * complex(math.cos(theta), math.sin(theta))
        for j, name in enumerate(_DERIV_CSV_HEADER[2:-1]):
            cols[name][i] = float(row[2 + j])
        flags.append(row[-1])
    return DerivField(
        points,
        cols["re_dtheta"] + 1j * cols["im_dtheta"],
        cols["re_dr"] + 1j * cols["im_dr"],
        cols["re_dz"] + 1j * cols["im_dz"],
        cols["re_dzbar"] + 1j * cols["im_dzbar"],
        flags,
    )
