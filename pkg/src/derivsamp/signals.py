"""Catalog of test signals with analytic derivatives and smoothness metadata.

Three reference signals with progressively worse smoothness:

  f1  e^{-t^2/4} sin(2 pi t)      entire, rapidly decaying
  f2  sin^2(pi t) on |t| <= 3     C^1, second derivative jumps at +-3
  f3  -t^3/2 + 2 on (-1.5, 3)     discontinuous at the window ends

plus constant/monomial probes.  Each signal knows its derivative channels,
the points where a channel is undefined, and the expected decay exponent of
the averaged smoothness modulus tau_r(f^{(i)}; delta)_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampler import SplineElement

__all__ = [
    "SignalSpec",
    "channel",
    "catalog",
    "get_signal",
    "constant_signal",
    "monomial_signal",
    "random_spline",
]

_TWO_PI = 2.0 * math.pi


class SignalSpec:
    """Immutable signal with derivative channels eval(i, t).

    Channels return NaN exactly at declared undefined points; one-sided
    values are returned arbitrarily close to them.
    """

    def __init__(self, id, evals, support_hint, undefined=None,
                 special_points=(), tau_rule=None):
        self.id = id
        self._evals = dict(evals)
        self.max_deriv = max(self._evals)
        self.support_hint = (float(support_hint[0]), float(support_hint[1]))
        self._undefined = {i: tuple(p) for i, p in (undefined or {}).items()}
        self.special_points = tuple(sorted(special_points))
        self._tau_rule = tau_rule

    def __repr__(self):
        return f"SignalSpec({self.id!r}, max_deriv={self.max_deriv})"

    def eval(self, i, t):
        if i not in self._evals:
            raise ValueError(f"signal {self.id!r} has no derivative channel {i}")
        x = np.asarray(t, dtype=float)
        scalar = x.ndim == 0
        out = np.asarray(self._evals[i](np.atleast_1d(x)), dtype=float).copy()
        for pt in self._undefined.get(i, ()):
            out[np.abs(np.atleast_1d(x) - pt) <= 1e-12 * max(1.0, abs(pt))] = np.nan
        return float(out[0]) if scalar else out.reshape(x.shape)

    def undefined_points(self, i) -> tuple[float, ...]:
        return self._undefined.get(i, ())

    def tau_exponent(self, i: int, r: int, p: float):
        """Expected alpha with tau_r(f^{(i)}; delta)_p = O(delta^alpha)."""
        if self._tau_rule is None:
            return None
        return self._tau_rule(i, r, p)


@dataclass(frozen=True)
class channel:
    """Single derivative channel as a plain callable (for modulus routines)."""

    spec: SignalSpec
    i: int = 0

    def __call__(self, t):
        return self.spec.eval(self.i, t)

    @property
    def special_points(self) -> tuple[float, ...]:
        return self.spec.special_points


def _f1_evals():
    def d0(t):
        return np.exp(-t * t / 4.0) * np.sin(_TWO_PI * t)

    def d1(t):
        e = np.exp(-t * t / 4.0)
        return e * (-(t / 2.0) * np.sin(_TWO_PI * t) + _TWO_PI * np.cos(_TWO_PI * t))

    def d2(t):
        e = np.exp(-t * t / 4.0)
        s, c = np.sin(_TWO_PI * t), np.cos(_TWO_PI * t)
        return e * ((t * t / 4.0 - 0.5 - 4.0 * math.pi**2) * s - _TWO_PI * t * c)

    def d3(t):
        e = np.exp(-t * t / 4.0)
        s, c = np.sin(_TWO_PI * t), np.cos(_TWO_PI * t)
        return e * (
            (-(t**3) / 8.0 + (0.75 + 6.0 * math.pi**2) * t) * s
            + (1.5 * math.pi * t * t - 3.0 * math.pi - 8.0 * math.pi**3) * c
        )

    return {0: d0, 1: d1, 2: d2, 3: d3}


def _f2_evals():
    def d0(t):
        return np.where(np.abs(t) <= 3.0, np.sin(math.pi * t) ** 2, 0.0)

    def d1(t):
        return np.where(np.abs(t) < 3.0, math.pi * np.sin(_TWO_PI * t), 0.0)

    def d2(t):
        return np.where(np.abs(t) < 3.0, 2.0 * math.pi**2 * np.cos(_TWO_PI * t), 0.0)

    return {0: d0, 1: d1, 2: d2}


def _f3_evals():
    def inside(t):
        return (t > -1.5) & (t < 3.0)

    evals = {0: lambda t: np.where(inside(t), -0.5 * t**3 + 2.0, 0.0)}
    for i, g in ((1, lambda t: -1.5 * t**2), (2, lambda t: -3.0 * t),
                 (3, lambda t: -3.0 + 0.0 * t)):
        evals[i] = (lambda gg: lambda t: np.where(inside(t), gg(t), 0.0))(g)
    return evals


def _tau_f1(i, r, p):
    return float(r)


def _tau_f2(i, r, p):
    if i == 0:
        return float(r) if r <= 2 else 2.0 + 1.0 / p
    if i == 1:
        return 1.0 if r == 1 else 1.0 + 1.0 / p
    return 1.0 / p


def _tau_f3(i, r, p):
    return 1.0 / p


def constant_signal(value: float = 1.0, half_width: float = 8.0) -> SignalSpec:
    evals = {0: lambda t: np.full_like(t, float(value))}
    for i in range(1, 4):
        evals[i] = lambda t: np.zeros_like(t)
    return SignalSpec("const", evals, (-half_width, half_width))


def monomial_signal(n: int, half_width: float = 4.0) -> SignalSpec:
    """t^n with exact derivative channels 0..3 (unbounded; probe use only)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")

    def make(i):
        if i > n:
            return lambda t: np.zeros_like(t)
        coef = math.perm(n, i)
        return lambda t: coef * t ** (n - i)

    return SignalSpec(f"t^{n}", {i: make(i) for i in range(4)},
                      (-half_width, half_width))


def catalog() -> list[SignalSpec]:
    jump23 = {i: (-3.0, 3.0) for i in (1, 2)}
    jump3 = {i: (-1.5, 3.0) for i in (1, 2, 3)}
    return [
        SignalSpec("f1", _f1_evals(), (-12.0, 12.0), tau_rule=_tau_f1),
        SignalSpec("f2", _f2_evals(), (-3.0, 3.0), undefined=jump23,
                   special_points=(-3.0, 3.0), tau_rule=_tau_f2),
        SignalSpec("f3", _f3_evals(), (-1.5, 3.0), undefined=jump3,
                   special_points=(-1.5, 3.0), tau_rule=_tau_f3),
        constant_signal(),
        monomial_signal(1),
        monomial_signal(2),
    ]


def get_signal(id: str) -> SignalSpec:
    for spec in catalog():
        if spec.id == id:
            return spec
    raise KeyError(f"unknown signal {id!r}")


def random_spline(m: int, support_len: int, seed: int) -> SplineElement:
    """Deterministic random element of the integer-shift spline space."""
    if support_len < 1:
        raise ValueError("support_len must be >= 1")
    rng = np.random.default_rng(seed)
    return SplineElement(m, 0, rng.uniform(-1.0, 1.0, support_len))
