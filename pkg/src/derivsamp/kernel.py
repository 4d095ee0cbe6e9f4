"""Reconstruction kernels Theta_i for derivative sampling.

The inverse symbol Psi^{-1} has Fourier coefficients c^{ji}(v) decaying
geometrically; the kernels are the finite-bandwidth combinations

    Theta_i(t) = sum_v sum_j c^{ji}(v) Q_m(t - rho v - j).

Coefficients are extracted from a uniform grid of matrix inverses by FFT,
with the grid refined until aliasing sits below the requested tolerance.
The kernels reproduce polynomials up to the configuration's order; both the
time-domain and Fourier-domain forms of that moment condition are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bspline import eval_q_deriv, fourier_q_deriv
from .symbol import Kappa, build_symbol, check_cis

__all__ = [
    "KernelTable",
    "inv_symbol_coeffs",
    "theta_eval",
    "theta_support",
    "ReproducingReport",
    "reproducing_order",
    "moment_check_time",
    "moment_check_fourier",
]

_TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class KernelTable:
    """Fourier coefficients of Psi^{-1}: coeffs[j, i, V + v] = c^{ji}(v),
    |v| <= V; tail_bound bounds the discarded coefficient mass."""

    kappa: Kappa
    radius: int
    coeffs: np.ndarray  # complex, shape (rho, rho, 2*radius + 1)
    tail_bound: float

    def coeff(self, j: int, i: int, v: int) -> complex:
        if abs(v) > self.radius:
            return 0j
        return complex(self.coeffs[j, i, self.radius + v])

    def to_csv(self, path=None) -> str:
        k = self.kappa
        lines = [
            f"# derivsamp v1,a={k.a},m={k.m},radius={self.radius},"
            f"rho={k.rho},tail_bound={self.tail_bound!r}",
            "j,i,v,re,im",
        ]
        for j in range(k.rho):
            for i in range(k.rho):
                for v in range(-self.radius, self.radius + 1):
                    c = self.coeff(j, i, v)
                    lines.append(f"{j},{i},{v},{c.real!r},{c.imag!r}")
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @staticmethod
    def from_csv(path) -> "KernelTable":
        with open(path) as fh:
            line = fh.readline()
            if not line.startswith("# derivsamp v1,"):
                raise ValueError(f"not a derivsamp kernel file: {path}")
            # tolerate extra leading comment lines (CLI dumps prepend a config
            # header); the metadata line is the one carrying the radius
            meta = None
            while line.startswith("#"):
                if line.startswith("# derivsamp v1,"):
                    fields = dict(
                        kv.split("=", 1)
                        for kv in line.strip()[2:].split(",")[1:]
                        if "=" in kv
                    )
                    if "radius" in fields:
                        meta = fields
                line = fh.readline()
            if meta is None:
                raise ValueError(f"{path}: missing kernel metadata header")
            cols = line.strip()
            if cols != "j,i,v,re,im":
                raise ValueError(f"unexpected column header {cols!r}")
            kappa = Kappa(int(meta["m"]), Fraction(meta["a"]), int(meta["rho"]))
            radius = int(meta["radius"])
            coeffs = np.zeros((kappa.rho, kappa.rho, 2 * radius + 1), dtype=complex)
            for line in fh:
                j, i, v, re, im = line.strip().split(",")
                coeffs[int(j), int(i), radius + int(v)] = float(re) + 1j * float(im)
        return KernelTable(kappa, radius, coeffs, float(meta["tail_bound"]))


def inv_symbol_coeffs(
    kappa: Kappa,
    tol: float = 1e-12,
    min_radius: int | None = None,
    cis_tol: float = 1e-9,
) -> KernelTable:
    """Fourier coefficients of the inverse symbol, |coeff| resolved to tol.

    Raises if kappa is not certified CIS (the inverse symbol would be
    unbounded) or if grid refinement fails to converge.
    """
    report = check_cis(kappa, tol=cis_tol)
    if not report.is_cis:
        detail = "inconclusive certificate" if report.inconclusive else "det vanishes on |z|=1"
        raise ValueError(f"{kappa} is not a stable sampling configuration: {detail}")
    sym = build_symbol(kappa)
    rho = kappa.rho

    n = 128
    prev_slice = None
    while True:
        ts = np.arange(n) / n
        inv = np.linalg.inv(sym.eval_grid(ts))  # (n, rho, rho), entry [t, j, i]
        spec = np.fft.fft(inv, axis=0) / n  # index v mod n
        mags = np.max(np.abs(spec), axis=(1, 2))
        nyquist = float(mags[n // 2 - 2 : n // 2 + 3].max())
        probe = min(32, n // 4)
        cur_slice = np.stack([spec[v % n] for v in range(-probe, probe + 1)])
        agree = (
            prev_slice is not None
            and prev_slice.shape == cur_slice.shape
            and float(np.max(np.abs(cur_slice - prev_slice))) < tol
        )
        if nyquist < tol and agree:
            break
        prev_slice = cur_slice
        if n >= 8192:
            raise ArithmeticError(
                f"inverse-symbol coefficients did not converge for {kappa} "
                f"(nyquist magnitude {nyquist:.3e} at n={n})"
            )
        n *= 2

    def mag(v: int) -> float:
        return float(mags[v % n])

    adaptive = 1
    for v in range(1, n // 3):
        if mag(v) >= tol or mag(-v) >= tol:
            adaptive = v
    radius = max(adaptive, min_radius or 1)

    def tail_estimate(v0: int) -> float:
        peak = max(mag(v0), mag(-v0))
        back = max(mag(v0 - 3), mag(-(v0 - 3)), 1e-300)
        ratio = (max(peak, 1e-300) / back) ** (1.0 / 3.0)
        ratio = min(max(ratio, 1e-3), 0.95)
        return 10.0 * rho * peak * ratio / (1.0 - ratio)

    while radius < n // 3 and tail_estimate(radius) >= tol and max(mag(radius), mag(-radius)) > 0:
        radius += 2
    tail_bound = tail_estimate(radius)

    stacked = np.stack([spec[v % n] for v in range(-radius, radius + 1)])  # (2V+1, j, i)
    coeffs = np.transpose(stacked, (1, 2, 0)).copy()
    return KernelTable(kappa, radius, coeffs, tail_bound)


def theta_support(table: KernelTable) -> tuple[float, float]:
    """Interval outside of which every Theta_i vanishes."""
    rho, m = table.kappa.rho, table.kappa.m
    return (-rho * table.radius, rho * table.radius + rho - 1 + m)


def theta_eval(table: KernelTable, i: int, t, deriv: int = 0):
    """Evaluate Theta_i (or a derivative) at t; the imaginary residue from the
    complex coefficients is checked to be below 1e-10 + tail and dropped."""
    kappa = table.kappa
    if not 0 <= i < kappa.rho:
        raise ValueError(f"channel {i} out of range for rho={kappa.rho}")
    x = np.asarray(t, dtype=float)
    scalar = x.ndim == 0
    acc = np.zeros(x.shape, dtype=complex)
    for vi, v in enumerate(range(-table.radius, table.radius + 1)):
        for j in range(kappa.rho):
            c = table.coeffs[j, i, vi]
            if c == 0:
                continue
            acc += c * eval_q_deriv(kappa.m, deriv, x - kappa.rho * v - j)
    worst = float(np.max(np.abs(acc.imag))) if acc.size else 0.0
    if worst > 1e-10 + table.tail_bound:
        raise ArithmeticError(
            f"kernel evaluation produced imaginary residue {worst:.3e} for {kappa}"
        )
    out = acc.real
    return float(out) if scalar else out


@dataclass(frozen=True)
class ReproducingReport:
    kappa: Kappa
    order: int
    residuals: tuple[float, ...]  # per polynomial degree 0..r_max
    tol: float


def _kernel_l_range(table: KernelTable) -> range:
    rho, m = table.kappa.rho, table.kappa.m
    lo, hi = theta_support(table)
    # t in [0, rho): Theta_i(t - rho l) != 0 needs t - rho l in [lo, hi]
    return range(math.floor(-hi / rho) - 1, math.ceil((rho - lo) / rho) + 1)


def reproducing_order(table: KernelTable, r_max: int = 6, tol: float = 1e-8) -> ReproducingReport:
    """Largest r such that sum_i C(n,i) i! sum_l (a+rho l-t)^{n-i}
    Theta_i(t-rho l) = delta_{n0} holds to tol for all n <= r, checked on a
    64-point grid over one period [0, rho)."""
    kappa = table.kappa
    rho, a = kappa.rho, float(kappa.a)
    ts = np.arange(64) / 64 * rho
    ls = list(_kernel_l_range(table))
    theta_cache = {
        (i, l): theta_eval(table, i, ts - rho * l) for i in range(rho) for l in ls
    }
    residuals = []
    for n in range(r_max + 1):
        acc = np.zeros_like(ts)
        for i in range(min(n, rho - 1) + 1):
            w = math.comb(n, i) * math.factorial(i)
            for l in ls:
                acc += w * (a + rho * l - ts) ** (n - i) * theta_cache[(i, l)]
        if n == 0:
            acc -= 1.0
        residuals.append(float(np.max(np.abs(acc))))
    order = -1
    for n, res in enumerate(residuals):
        if res <= tol:
            order = n
        else:
            break
    return ReproducingReport(kappa, order, tuple(residuals), tol)


def moment_check_time(table: KernelTable, n: int, t: float) -> float:
    """Residual of the degree-n time-domain moment condition at t."""
    kappa = table.kappa
    rho, a = kappa.rho, float(kappa.a)
    acc = 0.0
    for i in range(min(n, rho - 1) + 1):
        w = math.comb(n, i) * math.factorial(i)
        for l in _kernel_l_range_at(table, t):
            acc += w * (a + rho * l - t) ** (n - i) * theta_eval(table, i, t - rho * l)
    return acc - (1.0 if n == 0 else 0.0)


def _kernel_l_range_at(table: KernelTable, t: float) -> range:
    rho = table.kappa.rho
    lo, hi = theta_support(table)
    return range(math.floor((t - hi) / rho) - 1, math.ceil((t - lo) / rho) + 2)


def _theta_hat_deriv(table: KernelTable, i: int, d: int, xi: float) -> complex:
    """d-th derivative of Theta_i^ at xi via the coefficient expansion
    Theta_i^(xi) = sum_{j,v} c^{ji}(v) Q_m^(xi) e^{-2 pi i (rho v + j) xi}."""
    kappa = table.kappa
    q = [fourier_q_deriv(kappa.m, s, xi) for s in range(d + 1)]
    acc = 0j
    for vi, v in enumerate(range(-table.radius, table.radius + 1)):
        for j in range(kappa.rho):
            c = table.coeffs[j, i, vi]
            if c == 0:
                continue
            w = kappa.rho * v + j
            phase = np.exp(-_TWO_PI_I * w * xi)
            inner = sum(
                math.comb(d, s) * q[s] * (-_TWO_PI_I * w) ** (d - s) for s in range(d + 1)
            )
            acc += c * inner * phase
    return complex(acc)


def moment_check_fourier(table: KernelTable, n: int, l: int) -> complex:
    """Residual of the degree-n moment condition in Fourier form at frequency
    l/rho: sum_i C(n,i) i! sum_u C(n-i,u) a^u (2 pi i)^{u+i-n}
    Theta_i^[(n-i-u)](l/rho) - rho delta_{l0} delta_{n0}.  Supports n <= 3."""
    if n > 3:
        raise ValueError("Fourier moment residuals are supported for n <= 3 only")
    kappa = table.kappa
    rho, a = kappa.rho, float(kappa.a)
    xi = l / rho
    acc = 0j
    for i in range(min(n, rho - 1) + 1):
        for u in range(n - i + 1):
            acc += (
                math.comb(n, i)
                * math.factorial(i)
                * math.comb(n - i, u)
                * a ** u
                * _TWO_PI_I ** (u + i - n)
                * _theta_hat_deriv(table, i, n - i - u, xi)
            )
    if n == 0 and l == 0:
        acc -= rho
    return acc
