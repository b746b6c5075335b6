"""Parameter-regime classification and explicit-constant inequality checks.

The (alpha, p) plane splits into three regimes that govern which partial
derivatives of a kernel extension are controlled by the boundary
derivative's L^p norm:

    Pi1: alpha > 0 with any p in [1, inf], plus alpha = 0 with 1 < p < inf.
         All four partials obey Hardy-type bounds.
    Pi2: -1 < alpha < 0 with 1 <= p < -1/alpha, plus the point (0, 1).
         Bergman-type bounds hold; Hardy-type bounds admit counterexamples.
    Pi3: -1 < alpha < 0 with p >= -1/alpha, plus the point (0, inf).
         Both norm families admit counterexamples.

    In Pi2 and Pi3 an ellipticity hypothesis on the mapping restores the
    Hardy bounds.

Only inequalities with fully explicit constants are certified numerically:
the weighted kernel mean bound, the boundary-distance integral bound, the
unit-constant angular-derivative bound, and the scaled kernel bound
|J1| <= |alpha| sup|F|. Asymptotic bounds with implicit constants are
exercised qualitatively by the divergence probes instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .specfun import gamma
from .kernel import BoundaryData, QuadSpec, as_alpha, boundary_derivative
from .derivs import circle_derivs
from .kernel import circle_poisson_values
from .norms import lp_norm_circle, integral_mean

__all__ = [
    "RegimeClass",
    "CertificationRecord",
    "classify",
    "check_kernel_mean_bound",
    "check_distance_integral_bound",
    "check_angular_derivative_bound",
    "check_scaled_kernel_bound",
    "certification_grid",
]

_SLACK = 1e-8

PREDICTIONS = {
    "Pi1": ("hardy_all_partials_bounded",),
    "Pi2": (
        "bergman_bounded",
        "counterexample_exists_hardy",
        "elliptic_hypothesis_rescues",
    ),
    "Pi3": (
        "counterexample_exists_hardy",
        "counterexample_exists_bergman",
        "elliptic_hypothesis_rescues",
    ),
}


@dataclass(frozen=True)
class RegimeClass:
    """Regime label for one (alpha, p) pair with its qualitative predictions."""

    label: str
    alpha: float
    p: float
    predictions: tuple


def classify(alpha: float, p: float) -> RegimeClass:
    """Assign (alpha, p) to its regime Pi1, Pi2, or Pi3.

    p may be math.inf; the infinite case is branched on symbolically so no
    arithmetic is ever done with it.
    """
    alpha = float(alpha)
    p = float(p)
    if alpha <= -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha!r}")
    if not (p >= 1.0):
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {p!r}")
    is_inf = math.isinf(p)
    if alpha > 0.0:
        label = "Pi1"
    elif alpha == 0.0:
        if is_inf:
            label = "Pi3"
        elif p == 1.0:
            label = "Pi2"
        else:
            label = "Pi1"
    else:
        if is_inf or p >= -1.0 / alpha:
            label = "Pi3"
        else:
            label = "Pi2"
    return RegimeClass(label=label, alpha=alpha, p=p, predictions=PREDICTIONS[label])


@dataclass(frozen=True)
class CertificationRecord:
    """Outcome of one explicit-constant inequality check."""

    check: str
    params: dict
    lhs: float
    rhs: float
    holds: bool

    def as_dict(self) -> dict:
        return asdict(self)


def check_kernel_mean_bound(alpha: float, r: float, q: QuadSpec,
                            slack: float = _SLACK) -> CertificationRecord:
    """Certify (1/2pi) int (1-r^2)^a / |1-r e^{i t}|^{a+1} dt <= Gamma(a)/Gamma((a+1)/2)^2.

    Holds for every a > 0 and r in [0, 1); the right side is the sharp
    r -> 1 limit. Left side by trapezoid quadrature at q.angular_nodes.
    """
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError(f"kernel mean bound needs alpha > 0, got {alpha!r}")
    if not 0.0 <= r < 1.0:
        raise ValueError(f"radius must lie in [0, 1), got {r!r}")
    t = 2.0 * np.pi * np.arange(q.angular_nodes) / q.angular_nodes
    lhs = float(np.mean((1.0 - r * r) ** alpha / np.abs(1.0 - r * np.exp(1j * t)) ** (alpha + 1.0)))
    rhs = gamma(alpha) / gamma((alpha + 1.0) / 2.0) ** 2
    return CertificationRecord(
        check="kernel_mean_bound",
        params={"alpha": alpha, "r": float(r), "nodes": q.angular_nodes},
        lhs=lhs,
        rhs=float(rhs),
        holds=bool(lhs <= rhs + slack),
    )


def check_distance_integral_bound(alpha: float, r: float, q: QuadSpec,
                                  slack: float = _SLACK) -> CertificationRecord:
    """Certify int_0^{2pi} dt / |1-r e^{i t}|^{a+1} <= 3^{(a+1)/2} 2^{1-a} Gamma(-a) sqrt(pi) / Gamma(1/2-a).

    Valid for -1 < a < 0 and r in [1/2, 1); the integrand's exponent a+1
    lies in (0, 1) so the integral stays finite up to the boundary.
    """
    alpha = float(alpha)
    if not -1.0 < alpha < 0.0:
        raise ValueError(f"distance integral bound needs alpha in (-1, 0), got {alpha!r}")
    if not 0.5 <= r < 1.0:
        raise ValueError(f"radius must lie in [1/2, 1), got {r!r}")
    t = 2.0 * np.pi * np.arange(q.angular_nodes) / q.angular_nodes
    lhs = float(np.mean(np.abs(1.0 - r * np.exp(1j * t)) ** (-(alpha + 1.0))) * 2.0 * np.pi)
    rhs = (3.0 ** ((alpha + 1.0) / 2.0) / 2.0 ** (alpha - 1.0)
           * gamma(-alpha) * gamma(0.5) / gamma(0.5 - alpha))
    return CertificationRecord(
        check="distance_integral_bound",
        params={"alpha": alpha, "r": float(r), "nodes": q.angular_nodes},
        lhs=lhs,
        rhs=float(rhs),
        holds=bool(lhs <= rhs + slack),
    )


_ANGULAR_CAP = 1 << 17


def _resolved_nodes(base: int, r: float) -> int:
    """Angular node count resolving the kernel at radius r: >= 32/(1-r), power of two."""
    want = 32.0 / max(1.0 - r, 1e-9)
    n = base
    while n < want and n < _ANGULAR_CAP:
        n *= 2
    return n


def check_angular_derivative_bound(a, F: BoundaryData, p: float, q: QuadSpec,
                                   slack: float = 1e-6,
                                   label: Optional[str] = None) -> CertificationRecord:
    """Certify M_p(r, df/dtheta) <= ||dF/dt||_{L^p} across the radial grid.

    The unit-constant Hardy bound for the angular derivative. Every circle
    is swept at a node count adapted to its radius (the kernel peak narrows
    like 1-r), capped at 2^17; sampled-only boundary data is used at its
    native resolution.
    """
    a = as_alpha(a)
    p = float(p)
    if not (1.0 <= p < math.inf):
        raise ValueError(f"p must be finite and >= 1, got {p!r}")
    can_resample = F.closed_form is not None
    max_ratio = 0.0
    cache: dict = {}
    for r in q.radial_grid:
        n_eff = _resolved_nodes(q.angular_nodes, r) if can_resample else F.n_samples
        if n_eff not in cache:
            F_eff = F.resample(n_eff) if can_resample else F
            q_eff = QuadSpec(angular_nodes=n_eff, r_max=q.r_max,
                             radial_grid=q.radial_grid, tol=q.tol)
            cache[n_eff] = (F_eff, q_eff, lp_norm_circle(boundary_derivative(F_eff), p))
        F_eff, q_eff, rhs_eff = cache[n_eff]
        dth, _ = circle_derivs(a, F_eff, float(r), q_eff)
        mean = integral_mean(dth, float(r), p)
        if rhs_eff > 0.0:
            max_ratio = max(max_ratio, mean / rhs_eff)
    return CertificationRecord(
        check="angular_derivative_bound",
        params={"alpha": a.alpha, "p": p, "boundary": label or "unnamed",
                "nodes": q.angular_nodes, "r_max": float(q.radial_grid[-1])},
        lhs=float(max_ratio),
        rhs=1.0,
        holds=bool(max_ratio <= 1.0 + slack),
    )


def check_scaled_kernel_bound(a, F: BoundaryData, q: QuadSpec,
                              slack: float = _SLACK,
                              label: Optional[str] = None) -> CertificationRecord:
    """Certify sup |J1| <= |alpha| sup |F| over the radial grid.

    J1 = alpha K_a[F] and the operator is an average against a unit-mass
    positive kernel, so the bound is the maximum principle scaled by alpha.
    """
    a = as_alpha(a)
    can_resample = F.closed_form is not None
    sup_j1 = 0.0
    cache: dict = {}
    for r in q.radial_grid:
        n_eff = _resolved_nodes(q.angular_nodes, r) if can_resample else F.n_samples
        if n_eff not in cache:
            F_eff = F.resample(n_eff) if can_resample else F
            q_eff = QuadSpec(angular_nodes=n_eff, r_max=q.r_max,
                             radial_grid=q.radial_grid, tol=q.tol)
            cache[n_eff] = (F_eff, q_eff)
        F_eff, q_eff = cache[n_eff]
        vals = circle_poisson_values(a, F_eff, float(r), q_eff)
        sup_j1 = max(sup_j1, float(np.max(np.abs(a.alpha * vals))))
    rhs = abs(a.alpha) * float(np.max(np.abs(F.values)))
    return CertificationRecord(
        check="scaled_kernel_bound",
        params={"alpha": a.alpha, "boundary": label or "unnamed",
                "nodes": q.angular_nodes, "r_max": float(q.radial_grid[-1])},
        lhs=sup_j1,
        rhs=rhs,
        holds=bool(sup_j1 <= rhs + slack),
    )


KERNEL_MEAN_GRID = {
    "alphas": (0.25, 0.5, 1.0, 2.0, 5.0),
    "radii": (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99),
}

DISTANCE_INTEGRAL_GRID = {
    "alphas": (-0.9, -0.5, -0.1),
    "radii": (0.5, 0.75, 0.9, 0.99),
}


def certification_grid(q: Optional[QuadSpec] = None):
    """All kernel-mean and distance-integral checks on their standard grids."""
    if q is None:
        q = QuadSpec()
    records = []
    for alpha in KERNEL_MEAN_GRID["alphas"]:
        for r in KERNEL_MEAN_GRID["radii"]:
            records.append(check_kernel_mean_bound(alpha, r, q))
    for alpha in DISTANCE_INTEGRAL_GRID["alphas"]:
        for r in DISTANCE_INTEGRAL_GRID["radii"]:
            records.append(check_distance_integral_bound(alpha, r, q))
    return records
