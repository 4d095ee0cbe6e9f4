"""Exact Laurent polynomial arithmetic, determinants, and the unit-circle
zero certificate."""

import math
from fractions import Fraction

import numpy as np
import pytest

from derivsamp.laurent import (
    ONE,
    ZERO,
    Z,
    LaurentPoly,
    divexact,
    dominant_coeff_test,
    laurent_det,
    roots_unit_circle,
)


def _random_poly(rng) -> LaurentPoly:
    low = int(rng.integers(-4, 5))
    n = int(rng.integers(1, 7))
    coeffs = [
        Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
        for _ in range(n)
    ]
    return LaurentPoly.make(low, coeffs)


def test_ring_axioms():
    rng = np.random.default_rng(21)
    for _ in range(500):
        a, b, c = (_random_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a
        assert a * ONE == a
        assert a - a == ZERO


def test_shift_and_scale():
    rng = np.random.default_rng(22)
    for _ in range(50):
        a = _random_poly(rng)
        assert a.shift(3) == a * Z * Z * Z
        assert a.scale(Fraction(2)) == a + a
        assert a.shift(2).shift(-2) == a


def test_evaluation_homomorphism():
    rng = np.random.default_rng(23)
    for _ in range(100):
        a, b = _random_poly(rng), _random_poly(rng)
        t = float(rng.uniform(0, 1))
        z = complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
        lhs = (a * b).eval_complex(z)
        rhs = a.eval_complex(z) * b.eval_complex(z)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))
        assert abs(a.eval_unit(t) - a.eval_complex(z)) <= 1e-10 * (1 + abs(lhs))


def test_eval_exact_rational():
    p = LaurentPoly.make(-1, [Fraction(1, 2), Fraction(0), Fraction(3)])
    z = Fraction(2, 3)
    # (1/2) z^-1 + 3 z = 3/4 + 2
    assert p.eval_exact(z) == Fraction(3, 4) + Fraction(2)


def test_divexact_roundtrip_and_failure():
    rng = np.random.default_rng(24)
    for _ in range(60):
        a, b = _random_poly(rng), _random_poly(rng)
        if b.is_zero:
            continue
        assert divexact(a * b, b) == a
    with pytest.raises(ValueError):
        divexact(Z + ONE, Z - ONE)


def test_coeff_accessors():
    p = LaurentPoly.make(-2, [Fraction(5), Fraction(0), Fraction(-1)])
    assert p.low == -2 and p.high == 0
    assert p.coeff(-2) == 5 and p.coeff(0) == -1 and p.coeff(7) == 0
    # normalization strips zero fringes
    q = LaurentPoly.make(0, [Fraction(0), Fraction(1), Fraction(0)])
    assert q.low == 1 and len(q.coeffs) == 1


def _frac_matrix(rng, n):
    return [
        [
            LaurentPoly.make(
                int(rng.integers(-1, 2)),
                [Fraction(int(rng.integers(-4, 5))) for _ in range(int(rng.integers(1, 3)))],
            )
            for _ in range(n)
        ]
        for _ in range(n)
    ]


def _det_cofactor_oracle(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = ZERO
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _det_cofactor_oracle(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def test_determinant_against_cofactor_oracle():
    rng = np.random.default_rng(25)
    for n in (1, 2, 3, 4, 5):
        for _ in range(8):
            mat = _frac_matrix(rng, n)
            assert laurent_det(mat) == _det_cofactor_oracle(mat)


def test_determinant_row_swap_flips_sign():
    rng = np.random.default_rng(26)
    mat = _frac_matrix(rng, 4)
    swapped = [mat[1], mat[0]] + mat[2:]
    assert laurent_det(swapped) == -laurent_det(mat)


def test_determinant_triangular():
    d = [LaurentPoly.make(1, [Fraction(k + 2)]) for k in range(3)]
    mat = [
        [d[0], Z, ONE],
        [ZERO, d[1], Z],
        [ZERO, ZERO, d[2]],
    ]
    assert laurent_det(mat) == d[0] * d[1] * d[2]


def _poly_from_roots(roots, scale=Fraction(1)) -> LaurentPoly:
    p = ONE.scale(scale)
    for r in roots:
        if isinstance(r, tuple):  # conjugate pair r = (radius, cos_angle)
            rad, c = r
            p = p * LaurentPoly.make(
                0,
                [Fraction(rad) ** 2, -2 * Fraction(c) * Fraction(rad), Fraction(1)],
            )
        else:
            p = p * LaurentPoly.make(0, [-Fraction(r), Fraction(1)])
    return p


def test_circle_certificate_detects_on_circle_roots():
    rng = np.random.default_rng(27)
    for _ in range(25):
        # one exact root at z = 1 or z = -1 plus off-circle noise roots
        on = 1 if rng.integers(2) else -1
        noise = [(Fraction(3, 2), Fraction(int(rng.integers(-5, 6)), 10))]
        p = _poly_from_roots([on] + noise)
        cert = roots_unit_circle(p)
        assert cert.verdict == "vanishing"
        assert cert.min_modulus <= 1e-9
    # conjugate pair exactly on the circle (float cosine, still machine-close)
    for k in (1, 7, 100):
        c = Fraction(math.cos(2 * math.pi * k / 4096))
        p = LaurentPoly.make(0, [Fraction(1), -2 * c, Fraction(1)])
        cert = roots_unit_circle(p)
        assert cert.verdict == "vanishing"


def test_circle_certificate_clears_off_circle_roots():
    rng = np.random.default_rng(28)
    for _ in range(25):
        roots = []
        for _ in range(int(rng.integers(1, 4))):
            rad = Fraction(9, 10) if rng.integers(2) else Fraction(11, 10)
            roots.append((rad, Fraction(int(rng.integers(-9, 10)), 10)))
        p = _poly_from_roots(roots)
        cert = roots_unit_circle(p)
        assert cert.verdict == "nonvanishing"
        assert cert.min_modulus > 0
        assert cert.root_margin > 1e-3


def test_circle_certificate_monomial():
    # z^k never vanishes on the circle
    cert = roots_unit_circle(Z * Z)
    assert cert.verdict == "nonvanishing"
    assert cert.min_modulus == pytest.approx(1.0, abs=1e-12)


def test_dominant_coeff_sufficient_condition():
    strong = LaurentPoly.make(0, [Fraction(1), Fraction(-10), Fraction(1)])
    weak = LaurentPoly.make(0, [Fraction(1), Fraction(-2), Fraction(1)])
    assert dominant_coeff_test(strong)
    assert not dominant_coeff_test(weak)
    assert roots_unit_circle(strong).verdict == "nonvanishing"
