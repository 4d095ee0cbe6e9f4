"""Cardinal B-splines: evaluation, derivatives, Fourier transforms, Riesz bounds.

Q_m denotes the B-spline of order m with knots 0, 1, ..., m (support [0, m]).
`eval_q` is the production path (Cox-de Boor recurrence, stable in float);
the truncated-power form is kept in `eval_q_power` / `eval_q_exact` and acts
as an independent oracle in the tests.  Fourier transforms use the convention
f^(w) = int f(t) exp(-2 pi i w t) dt, so Q_m^(xi) = ((1-e^{-2 pi i xi})/(2 pi i xi))^m.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

__all__ = [
    "eval_q",
    "eval_q_power",
    "eval_q_exact",
    "eval_q_deriv",
    "eval_q_deriv_exact",
    "fourier_q",
    "fourier_q_deriv",
    "krein_favard",
    "riesz_lower_bound",
]

_TWO_PI_I = 2j * math.pi


def _check_order(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"spline order must be a positive integer, got {m!r}")


def eval_q(m: int, t):
    """Evaluate Q_m at t (scalar or ndarray) by the Cox-de Boor recurrence.

    Right-continuous at knots for m=1 (indicator of [0,1)); continuous for m>=2.
    """
    _check_order(m)
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    # levels[s] holds Q_k(t - s); start at k=1 with shifted indicators
    levels = [((arr - s >= 0.0) & (arr - s < 1.0)).astype(float) for s in range(m)]
    for k in range(1, m):
        nxt = []
        for s in range(m - k):
            x = arr - s
            nxt.append((x * levels[s] + (k + 1.0 - x) * levels[s + 1]) / k)
        levels = nxt
    out = levels[0]
    return float(out) if scalar else out


def eval_q_power(m: int, t):
    """Truncated-power form of Q_m in float arithmetic (test oracle, not stable
    for large m; prefer eval_q)."""
    _check_order(m)
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    if m == 1:
        out = ((arr >= 0.0) & (arr < 1.0)).astype(float)
        return float(out) if scalar else out
    acc = np.zeros_like(arr)
    for j in range(m + 1):
        acc += (-1.0) ** j * math.comb(m, j) * np.maximum(arr - j, 0.0) ** (m - 1)
    out = acc / math.factorial(m - 1)
    # clamp tiny negatives from cancellation outside the support
    out = np.where((arr < 0.0) | (arr > m), 0.0, out)
    return float(out) if scalar else out


def eval_q_exact(m: int, t) -> Fraction:
    """Exact rational value of Q_m at a rational point."""
    _check_order(m)
    t = Fraction(t)
    if m == 1:
        return Fraction(1) if 0 <= t < 1 else Fraction(0)
    if t <= 0 or t >= m:
        # formula vanishes outside (0, m); endpoints are zero for m >= 2
        return Fraction(0)
    acc = Fraction(0)
    for j in range(m + 1):
        d = t - j
        if d > 0:
            acc += (-1) ** j * math.comb(m, j) * d ** (m - 1)
    return acc / math.factorial(m - 1)


def _check_deriv_order(m: int, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"derivative order must be a nonnegative integer, got {k!r}")
    if k > 0 and k > m - 2:
        raise ValueError(
            f"derivative order {k} not available for Q_{m}: need k <= m-2 "
            "(higher derivatives are not continuous)"
        )


def eval_q_deriv(m: int, k: int, t):
    """k-th derivative of Q_m via the difference identity
    Q_m^(k)(t) = sum_r (-1)^r C(k,r) Q_{m-k}(t-r), valid for k <= m-2."""
    _check_order(m)
    _check_deriv_order(m, k)
    if k == 0:
        return eval_q(m, t)
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    acc = np.zeros_like(arr)
    for r in range(k + 1):
        acc += (-1.0) ** r * math.comb(k, r) * eval_q(m - k, arr - r)
    return float(acc) if scalar else acc


def eval_q_deriv_exact(m: int, k: int, t) -> Fraction:
    """Exact rational k-th derivative of Q_m at a rational point (k <= m-2)."""
    _check_order(m)
    _check_deriv_order(m, k)
    t = Fraction(t)
    if k == 0:
        return eval_q_exact(m, t)
    acc = Fraction(0)
    for r in range(k + 1):
        acc += (-1) ** r * math.comb(k, r) * eval_q_exact(m - k, t - r)
    return acc


# ---------------------------------------------------------------------------
# Fourier transform of Q_m and its first three derivatives.
#
# Q_m^ = Phi^m with Phi(xi) = (1 - e^{-2 pi i xi}) / (2 pi i xi) = G(c xi),
# c = -2 pi i and G(x) = (e^x - 1)/x.  Derivatives of Phi reduce to closed
# forms for G', G'', G''' away from 0; near 0 the closed forms cancel
# catastrophically, so a short Taylor series is used instead.
# ---------------------------------------------------------------------------

_C = -_TWO_PI_I  # so that Phi(xi) = G(_C * xi)
_SERIES_RADIUS = 0.5  # |c xi| below this -> series (covers |xi| < 1e-4 and more)
_SERIES_TERMS = 26


def _g_deriv(r: int, x: complex) -> complex:
    """G^(r)(x) for G(x) = (e^x - 1)/x, r in 0..3."""
    if abs(x) < _SERIES_RADIUS:
        # G^(r)(x) = sum_j x^j / (j! (j+r+1)); terms decay factorially, so the
        # truncation error at 26 terms is below 1e-30 on this radius
        return sum(x ** j / (math.factorial(j) * (j + r + 1)) for j in range(_SERIES_TERMS + 1))
    e = cmath.exp(x)
    if r == 0:
        return (e - 1.0) / x
    if r == 1:
        return ((x - 1.0) * e + 1.0) / x ** 2
    if r == 2:
        return ((x * x - 2.0 * x + 2.0) * e - 2.0) / x ** 3
    if r == 3:
        return ((x ** 3 - 3.0 * x * x + 6.0 * x - 6.0) * e + 6.0) / x ** 4
    raise ValueError(f"unsupported derivative order {r}")


def _phi_deriv(r: int, xi: float) -> complex:
    return _C ** r * _g_deriv(r, _C * xi)


def fourier_q(m: int, xi: float) -> complex:
    """Fourier transform of Q_m at xi (removable singularity at 0 handled)."""
    _check_order(m)
    return _phi_deriv(0, float(xi)) ** m


def fourier_q_deriv(m: int, r: int, xi: float) -> complex:
    """r-th derivative of the Fourier transform of Q_m, hard-coded for r <= 3."""
    _check_order(m)
    if not isinstance(r, (int, np.integer)) or r < 0:
        raise ValueError(f"derivative order must be a nonnegative integer, got {r!r}")
    if r > 3:
        raise ValueError(f"Fourier derivative order {r} not supported (max 3)")
    xi = float(xi)
    p0 = _phi_deriv(0, xi)
    if r == 0:
        return p0 ** m
    p1 = _phi_deriv(1, xi)
    if r == 1:
        return m * p0 ** (m - 1) * p1
    p2 = _phi_deriv(2, xi)
    if r == 2:
        acc = m * p0 ** (m - 1) * p2
        if m >= 2:
            acc += m * (m - 1) * p0 ** (m - 2) * p1 ** 2
        return acc
    p3 = _phi_deriv(3, xi)
    acc = m * p0 ** (m - 1) * p3
    if m >= 2:
        acc += 3 * m * (m - 1) * p0 ** (m - 2) * p1 * p2
    if m >= 3:
        acc += m * (m - 1) * (m - 2) * p0 ** (m - 3) * p1 ** 3
    return acc


# ---------------------------------------------------------------------------
# Krein-Favard constants K_m = (4/pi) sum_{v>=0} (-1)^{v(m+1)} / (2v+1)^{m+1}
# and the Riesz lower bound 2^{2m-1} K_{2m-1} / pi^{2m-1} for the Q_m basis.
#
# The defining series converges far too slowly for tol ~ 1e-14 when m <= 1
# (the plain integral/first-term tail bounds would need ~1e14 terms), so the
# tail is *evaluated* by Euler-Maclaurin with a certified remainder bound
# instead of merely bounded.  Both branches keep the remainder below tol/2.
# ---------------------------------------------------------------------------


def _rising(s: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= s + i
    return out


def krein_favard(m: int, tol: float = 1e-14) -> float:
    """Krein-Favard constant K_m, accurate to within tol."""
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"index must be a nonnegative integer, got {m!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = m + 1
    if m % 2 == 1:
        # positive series sum (2v+1)^{-s}, s even >= 2
        n = 32
        while True:
            u = 2.0 * n + 1.0
            rem = 4.0 * 128.0 * _rising(s, 7) * u ** (-(s + 7)) / 1209600.0
            if rem < tol * math.pi / 8.0:
                break
            n *= 2
        partial = math.fsum((2.0 * v + 1.0) ** (-s) for v in range(n))
        u = 2.0 * n + 1.0
        tail = (
            u ** (1 - s) / (2.0 * (s - 1))
            + 0.5 * u ** (-s)
            + 2.0 * s * u ** (-s - 1) / 12.0
            - 8.0 * _rising(s, 3) * u ** (-s - 3) / 720.0
            + 32.0 * _rising(s, 5) * u ** (-s - 5) / 30240.0
        )
        total = partial + tail
    else:
        # alternating series; pair terms: h(j) = (4j+1)^{-s} - (4j+3)^{-s}
        n = 32
        while True:
            a1 = 4.0 * n + 1.0
            rem = 4.0 * 4.0 ** 7 * _rising(s, 7) * a1 ** (-(s + 7)) / 1209600.0
            if rem < tol * math.pi / 8.0:
                break
            n *= 2
        partial = math.fsum(
            (4.0 * j + 1.0) ** (-s) - (4.0 * j + 3.0) ** (-s) for j in range(n)
        )
        a1 = 4.0 * n + 1.0
        a3 = 4.0 * n + 3.0
        if s > 1:
            integral = (a1 ** (1 - s) - a3 ** (1 - s)) / (4.0 * (s - 1))
        else:
            integral = 0.25 * math.log(a3 / a1)
        tail = (
            integral
            + 0.5 * (a1 ** (-s) - a3 ** (-s))
            + 4.0 * s * (a1 ** (-s - 1) - a3 ** (-s - 1)) / 12.0
            - 64.0 * _rising(s, 3) * (a1 ** (-s - 3) - a3 ** (-s - 3)) / 720.0
            + 1024.0 * _rising(s, 5) * (a1 ** (-s - 5) - a3 ** (-s - 5)) / 30240.0
        )
        total = partial + tail
    return 4.0 / math.pi * total


def riesz_lower_bound(m: int) -> float:
    """Lower Riesz bound 2^{2m-1} K_{2m-1} / pi^{2m-1} of the shifted Q_m basis
    (upper bound is 1 by partition of unity)."""
    _check_order(m)
    return 2.0 ** (2 * m - 1) * krein_favard(2 * m - 1) / math.pi ** (2 * m - 1)
