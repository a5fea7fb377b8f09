"""Complex special functions needed by the interference closed forms.

scipy's incomplete gamma only accepts real arguments, so the upper
incomplete gamma for complex z is implemented here: a power series for
small |z| and a modified-Lentz continued fraction for large |z|, switching
at |z| = 4.  The Gauss hypergeometric 2F1 is evaluated by its series
inside the unit disc and continued outside via the Pfaff and 1/z linear
transformations.  Both functions are only required on the parameter
ranges produced by path-loss exponents alpha > 2 (first gamma argument
in (-1, 0), 2F1 arguments purely imaginary), and are unit-tested against
mpmath over those ranges.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gamma as _gamma_real

__all__ = ["upper_incomplete_gamma", "hyp2f1"]

_SERIES_CF_SWITCH = 4.0
_MAX_ITER = 600


def _lower_gamma_series(s: float, z: complex) -> complex:
    """gamma_lower(s, z) = z^s e^-z sum_k z^k / (s (s+1) ... (s+k))."""
    term = 1.0 / s
    total = term
    for k in range(1, _MAX_ITER):
        term *= z / (s + k)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    else:
        raise ArithmeticError(f"incomplete gamma series stalled at s={s}, z={z}")
    return np.power(z, s) * np.exp(-z) * total


def _upper_gamma_cf(s: float, z: complex) -> complex:
    """Modified Lentz continued fraction, valid away from the negative real axis."""
    tiny = 1e-300
    b = z + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise ArithmeticError(f"incomplete gamma CF stalled at s={s}, z={z}")
    return np.power(z, s) * np.exp(-z) * h


def upper_incomplete_gamma(s: float, z: complex) -> complex:
    """Upper incomplete gamma Gamma(s, z) for real s in (-1, 1), complex z.

    s must not be 0 (the series form divides by s); z = 0 returns the
    complete gamma when that is finite.
    """
    if s == 0 or s <= -1:
        raise ValueError(f"first argument must be in (-1, 0) u (0, 1), got {s}")
    z = complex(z)
    if z == 0:
        if s < 0:
            raise ValueError("Gamma(s, 0) diverges for s < 0")
        return complex(_gamma_real(s))
    if z.real < 0 and abs(z.imag) < 1e-14 * abs(z.real):
        raise ValueError("negative real axis is outside the supported branch")
    if abs(z) < _SERIES_CF_SWITCH:
        return complex(_gamma_real(s)) - _lower_gamma_series(s, z)
    return _upper_gamma_cf(s, z)


def _hyp2f1_series(a: float, b: float, c: float, z: complex) -> complex:
    term = 1.0 + 0.0j
    total = term
    for k in range(_MAX_ITER):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) < 1e-17 * abs(total):
            return total
    raise ArithmeticError(f"2F1 series stalled at z={z}")


def hyp2f1(a: float, b: float, c: float, z: complex) -> complex:
    """Gauss 2F1(a, b; c; z) for real parameters and complex z.

    Direct series for |z| < 0.9; Pfaff transform z -> z/(z-1) in the
    annulus around |z| = 1; the 1/z connection formula beyond (requires
    a - b non-integer, which holds for the beta closed form where
    a - b = -2/alpha).
    """
    z = complex(z)
    az = abs(z)
    if az < 0.9:
        return _hyp2f1_series(a, b, c, z)
    w = z / (z - 1.0)
    if abs(w) < 0.9:
        # Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1))
        return np.power(1.0 - z, -a) * _hyp2f1_series(a, c - b, c, w)
    if az > 1.1:
        ab = a - b
        if abs(ab - round(ab)) < 1e-9:
            raise ValueError("1/z continuation needs a - b non-integer")
        g = _gamma_real
        pref1 = g(c) * g(b - a) / (g(b) * g(c - a))
        pref2 = g(c) * g(a - b) / (g(a) * g(c - b))
        inv = 1.0 / z
        t1 = pref1 * np.power(-z, -a) * _hyp2f1_series(a, a - c + 1.0, a - b + 1.0, inv)
        t2 = pref2 * np.power(-z, -b) * _hyp2f1_series(b, b - c + 1.0, b - a + 1.0, inv)
        return t1 + t2
    raise ArithmeticError(f"2F1 argument z={z} falls in the uncovered annulus")
