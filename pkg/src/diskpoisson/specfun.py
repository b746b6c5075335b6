"""Self-contained real-valued special functions.

Provides the Gamma function, the Pochhammer (rising factorial) symbol, the
Gauss hypergeometric function 2F1 on [-1, 1] with an Euler-transformation
path for arguments near 1, the Gauss summation value at x = 1, and the
Euler beta integral. Everything is scalar, pure, and deterministic; no
external dependencies.
"""

from __future__ import annotations

import functools
import math

__all__ = [
    "ConvergenceError",
    "gamma",
    "pochhammer",
    "hyp2f1",
    "hyp2f1_dx",
    "gauss_value",
    "beta_integral",
]


class ConvergenceError(ArithmeticError):
    """A series failed to reach the requested tolerance under the term cap."""


# Lanczos coefficients for g = 7, nine terms. Relative error of the
# resulting Gamma is a few ulp across the range used here.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Series controls: hard term cap, and the number of consecutive
# below-tolerance terms required before declaring convergence.
_TERM_CAP = 10000
_QUIET_RUN = 3


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function for real x away from the poles at 0, -1, -2, ...

    Lanczos rational approximation for x >= 0.5, reflection below.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise ValueError(f"gamma pole at nonpositive integer x={x!r}")
    if x < 0.5:
        # Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    if k < 0 or k != int(k):
        raise ValueError(f"pochhammer order must be a nonnegative integer, got {k!r}")
    result = 1.0
    value = float(a)
    for _ in range(int(k)):
        result *= value
        value += 1.0
    return result


def _series_2f1(a: float, b: float, c: float, x: float, tol: float) -> float:
    """Direct summation of the 2F1 series with a quiet-run stopping rule."""
    total = 1.0
    term = 1.0
    quiet = 0
    for k in range(_TERM_CAP):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        total += term
        if abs(term) <= tol * abs(total):
            quiet += 1
            if quiet >= _QUIET_RUN:
                return total
        else:
            quiet = 0
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) did not converge within {_TERM_CAP} terms"
    )


# Arguments this close to 1 are routed through the Euler transformation
# when the series would otherwise diverge or lose accuracy (c - a - b < 0).
_EULER_SWITCH = 0.95


@functools.lru_cache(maxsize=200000)
def _hyp2f1_cached(a: float, b: float, c: float, x: float, tol: float) -> float:
    if _is_nonpositive_integer(c):
        raise ValueError(f"2F1 undefined: c={c!r} is zero or a negative integer")
    if abs(x) > 1.0:
        raise ValueError(f"2F1 argument out of range: |x|={abs(x)!r} > 1")
    if a == 0.0 or b == 0.0:
        return 1.0
    s = c - a - b
    if x == 1.0:
        if s <= 0.0:
            raise ValueError(
                f"2F1 diverges at x=1 when c-a-b={s!r} <= 0"
            )
        try:
            return gauss_value(a, b, c)
        except ValueError:
            # Gamma pole in the closed form (terminating cases); sum directly.
            return _series_2f1(a, b, c, 1.0, tol)
    if s < 0.0 and x > _EULER_SWITCH:
        # Euler transformation keeps the series well conditioned as x -> 1-.
        return (1.0 - x) ** s * _series_2f1(c - a, c - b, c, x, tol)
    return _series_2f1(a, b, c, x, tol)


def hyp2f1(a: float, b: float, c: float, x: float, tol: float = 1e-14) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) for real parameters, x in [-1, 1].

    Direct series summation; for c - a - b < 0 and x near 1 the Euler
    transformation 2F1(a,b;c;x) = (1-x)^(c-a-b) 2F1(c-a,c-b;c;x) is applied
    so evaluation stays accurate up to x -> 1-. At x = 1 the series value
    (finite only for c - a - b > 0) is returned.
    """
    return _hyp2f1_cached(float(a), float(b), float(c), float(x), float(tol))


def hyp2f1_dx(a: float, b: float, c: float, x: float, tol: float = 1e-14) -> float:
    """Derivative d/dx 2F1(a, b; c; x) = (a b / c) 2F1(a+1, b+1; c+1; x)."""
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x, tol)


def gauss_value(a: float, b: float, c: float) -> float:
    """Value of 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).

    Requires c - a - b > 0 (and no Gamma poles among c, c-a, c-b).
    """
    s = c - a - b
    if s <= 0.0:
        raise ValueError(f"Gauss summation needs c-a-b > 0, got {s!r}")
    for name, arg in (("c", c), ("c-a", c - a), ("c-b", c - b)):
        if _is_nonpositive_integer(arg):
            raise ValueError(f"Gauss summation pole: {name}={arg!r}")
    return gamma(c) * gamma(s) / (gamma(c - a) * gamma(c - b))


def beta_integral(s: float, t: float) -> float:
    """Beta integral B(s, t) = Gamma(s+1) Gamma(t+1) / Gamma(s+t+2).

    Equals the integral of (1-r)^s r^t over r in [0, 1]; needs s, t > -1.
    """
    if s <= -1.0 or t <= -1.0:
        raise ValueError(f"beta integral needs s, t > -1, got s={s!r}, t={t!r}")
    return gamma(s + 1.0) * gamma(t + 1.0) / gamma(s + t + 2.0)
