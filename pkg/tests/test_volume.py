import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from scissors.hypmodel import GeometryError, HPoint
from scissors.simplex import Simplex, subdivide
from scissors.volume import (
    PiPowerClass,
    area_h2,
    bloch_wigner,
    five_term_defect,
    poincare_alternating_sum_h2,
    sv_polylog,
    vol_h3,
    vol_numeric,
    vol_orthogonal_class,
    vol_sphere,
)

from tests_helpers import (
    random_finite_tetra,
    regular_ideal_tetra,
    triangle_with_angles,
)

CATALAN = 0.915965594177219015  # sum (-1)^k/(2k+1)^2
D_MAX = 1.014941606409653625   # D(exp(i pi/3)), the maximum of D


def mp_bloch_wigner(z):
    """Independent oracle via mpmath's polylog."""
    import mpmath as mp

    mp.mp.dps = 30
    zc = mp.mpc(z)
    if mp.im(zc) == 0:
        return 0.0
    val = mp.im(mp.polylog(2, zc)) + mp.log(abs(zc)) * mp.arg(1 - zc)
    return float(val)


def test_bloch_wigner_catalan():
    # D(i) = Catalan: direct alternating series oracle
    cat = sum((-1) ** k / (2 * k + 1) ** 2 for k in range(2000000))
    assert bloch_wigner(1j) == pytest.approx(cat, abs=1e-12)
    assert bloch_wigner(1j) == pytest.approx(CATALAN, abs=1e-13)


def test_bloch_wigner_max_value():
    z = cmath.exp(1j * math.pi / 3)
    assert bloch_wigner(z) == pytest.approx(D_MAX, abs=1e-13)
    assert bloch_wigner(z) == pytest.approx(mp_bloch_wigner(z), abs=1e-13)


def test_bloch_wigner_conjugation_antisymmetry():
    rng = random.Random(0)
    for _ in range(100):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.01, 3))
        assert bloch_wigner(z.conjugate()) == pytest.approx(-bloch_wigner(z), abs=1e-13)


def test_bloch_wigner_matches_mpmath_everywhere():
    rng = random.Random(1)
    for _ in range(200):
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(z) < 1e-3 or abs(z - 1) < 1e-3:
            continue
        assert bloch_wigner(z) == pytest.approx(mp_bloch_wigner(z), abs=1e-12), z


def test_bloch_wigner_vanishes_on_reals():
    for x in (-5.0, 0.0, 0.5, 1.0, 7.3):
        assert bloch_wigner(x) == 0.0
    assert bloch_wigner(float("inf")) == 0.0


def test_five_term_relation():
    rng = random.Random(2)
    for _ in range(100):
        x, y = rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)
        assert abs(five_term_defect(x, y)) < 1e-10
    for _ in range(100):
        x = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        y = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(1 - x * y) < 1e-3:
            continue
        assert abs(five_term_defect(x, y)) < 1e-10


def test_sv_polylog_dilog_identity():
    rng = random.Random(3)
    for _ in range(100):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(z) < 1e-2 or abs(z - 1) < 1e-2:
            continue
        lhs = (sv_polylog("x0x1", z) - sv_polylog("x1x0", z)) / (4j)
        assert lhs.imag == pytest.approx(0.0, abs=1e-12)
        assert lhs.real == pytest.approx(bloch_wigner(z), abs=1e-10)


def test_sv_polylog_shuffle():
    rng = random.Random(4)
    for _ in range(50):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(z) < 1e-2 or abs(z - 1) < 1e-2:
            continue
        lhs = sv_polylog("x0", z) * sv_polylog("x1", z)
        rhs = sv_polylog("x0x1", z) + sv_polylog("x1x0", z)
        assert abs(lhs - rhs) < 1e-12
        # squares match the printed weight-2 diagonal values
        assert abs(sv_polylog("x0", z) ** 2 / 2 - sv_polylog("x0x0", z)) < 1e-12
        assert abs(sv_polylog("x1", z) ** 2 / 2 - sv_polylog("x1x1", z)) < 1e-12


def test_sv_polylog_weight_one_value():
    assert sv_polylog("x0", math.e).real == pytest.approx(2.0, abs=1e-14)


def test_sv_polylog_singularities():
    with pytest.raises(ValueError):
        sv_polylog("x0", 0.0)
    with pytest.raises(ValueError):
        sv_polylog("x0x1", 1.0)
    with pytest.raises(ValueError):
        sv_polylog("x0x1x1", 0.5)


# -- H^2 ---------------------------------------------------------------------


def test_area_ideal_triangle():
    tri = Simplex.from_coords(
        [(1, 0), (-0.5, math.sqrt(3) / 2), (-0.5, -math.sqrt(3) / 2)],
        ideal=[True, True, True])
    assert abs(area_h2(tri)) == pytest.approx(math.pi, abs=1e-12)


def test_area_angle_defect_237():
    tri = triangle_with_angles(math.pi / 2, math.pi / 3, math.pi / 7)
    assert abs(area_h2(tri)) == pytest.approx(math.pi / 42, abs=1e-12)


def test_area_degenerate_is_zero():
    tri = Simplex.from_coords([(0, 0), (0.3, 0), (0.6, 0)])
    assert area_h2(tri) == 0.0


def test_area_subdivision_additive():
    rng = random.Random(5)
    for _ in range(30):
        tri = Simplex.from_coords(
            [(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)) for _ in range(3)])
        if tri.is_degenerate():
            continue
        pts = tri.float_matrix()
        lam = np.array([rng.uniform(0.2, 0.8) for _ in range(3)])
        lam /= lam.sum()
        y = HPoint.klein(tuple(lam @ pts))
        pieces = subdivide(tri, y)
        total = sum(area_h2(p) for p in pieces)
        assert total == pytest.approx(area_h2(tri), abs=1e-10)


def test_poincare_formula_sign_convention():
    tri = triangle_with_angles(math.pi / 2, math.pi / 3, math.pi / 7)
    assert poincare_alternating_sum_h2(tri) == pytest.approx(-abs(area_h2(tri)), abs=1e-12)


# -- H^3 ---------------------------------------------------------------------


def test_vol_regular_ideal_tetrahedron():
    s = regular_ideal_tetra()
    assert abs(vol_h3(s)) == pytest.approx(D_MAX, abs=1e-12)


def test_vol_h3_orientation_reversal():
    rng = random.Random(6)
    s = random_finite_tetra(rng)
    assert vol_h3(s.reversed()) == pytest.approx(-vol_h3(s), abs=1e-14)


def test_vol_h3_subdivision_additivity():
    rng = random.Random(7)
    for _ in range(100):
        s = random_finite_tetra(rng)
        pts = s.float_matrix()
        lam = np.array([rng.uniform(0.1, 0.9) for _ in range(4)])
        lam /= lam.sum()
        y = HPoint.klein(tuple(lam @ pts))
        pieces = subdivide(s, y)
        total = sum(vol_h3(p) for p in pieces)
        assert total == pytest.approx(vol_h3(s), abs=1e-8)


def test_vol_h3_isometry_invariance():
    # rotations about a diameter are isometries of the Klein ball
    rng = random.Random(8)
    s = random_finite_tetra(rng)
    theta = 0.7
    R = np.array([
        [math.cos(theta), -math.sin(theta), 0],
        [math.sin(theta), math.cos(theta), 0],
        [0, 0, 1.0],
    ])
    moved = Simplex.from_coords([tuple(R @ v) for v in s.float_matrix()])
    assert vol_h3(moved) == pytest.approx(vol_h3(s), abs=1e-9)


def test_vol_h3_matches_numeric():
    rng = random.Random(9)
    for _ in range(5):
        s = random_finite_tetra(rng)
        num, err = vol_numeric(s, samples=200000, seed=3)
        assert vol_h3(s) == pytest.approx(num, abs=max(1e-6, 4 * err))


def test_vol_numeric_ideal_tetra():
    s = regular_ideal_tetra()
    val, err = vol_numeric(s, samples=1 << 20, seed=0)
    assert err < 1e-3
    assert abs(val) == pytest.approx(D_MAX, abs=3 * err)


def test_vol_numeric_h2_matches_area():
    rng = random.Random(10)
    tri = Simplex.from_coords(
        [(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)) for _ in range(3)])
    val, err = vol_numeric(tri, samples=1 << 18, seed=1)
    assert val == pytest.approx(area_h2(tri), abs=3 * err + 1e-9)


def test_vol_numeric_degenerate():
    tri = Simplex.from_coords([(0, 0), (0.3, 0), (0.6, 0)])
    val, err = vol_numeric(tri, samples=2048, seed=0)
    assert val == 0.0


def test_vol_numeric_determinism_and_seeds():
    s = regular_ideal_tetra()
    a1 = vol_numeric(s, samples=50000, seed=42)
    a2 = vol_numeric(s, samples=50000, seed=42)
    assert a1 == a2
    b, berr = vol_numeric(s, samples=50000, seed=43)
    assert abs(abs(b) - abs(a1[0])) < 3 * (berr + a1[1])


def test_vol_numeric_rejects_bad_input():
    seg = Simplex.from_coords([(0.0,), (1.0,)], ideal=[False, True])
    with pytest.raises(GeometryError):
        vol_numeric(seg, samples=2048)
    with pytest.raises(ValueError):
        vol_numeric(regular_ideal_tetra(), samples=10)
    # vertex on the absolute without the flag
    bad = Simplex.from_coords([(1.0, 0, 0), (0.1, 0, 0), (0, 0.1, 0), (0, 0, 0.1)])
    with pytest.raises(GeometryError):
        vol_numeric(bad, samples=2048)


# -- sphere / orthogonal classes ----------------------------------------------


def test_vol_sphere_values():
    assert vol_sphere(1) == PiPowerClass(Fraction(2), 1)
    assert vol_sphere(2) == PiPowerClass(Fraction(4), 1)
    assert vol_sphere(3) == PiPowerClass(Fraction(2), 2)
    # float cross-check against the closed form 2 pi^((n+1)/2)/Gamma((n+1)/2)
    for n in range(1, 10):
        ref = 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)
        assert float(vol_sphere(n)) == pytest.approx(ref, rel=1e-12)


def test_vol_orthogonal_class():
    assert vol_orthogonal_class(2) == 1
    assert vol_orthogonal_class(3) == 2
    assert vol_orthogonal_class(5) == 6
    # closed form: m(m-1) for n=2m-1, m^2 for n=2m
    for n in range(1, 12):
        m = (n + 1) // 2 if n % 2 else n // 2
        expect = m * (m - 1) if n % 2 else m * m
        assert vol_orthogonal_class(n) == expect


def test_vol_sphere_validation():
    with pytest.raises(ValueError):
        vol_sphere(0)
