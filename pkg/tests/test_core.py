import math
import random
from fractions import Fraction

import pytest

from lorenzmaps.core import (
    AffineSlopes,
    LorenzMap,
    Side,
    SignedPoint,
    check_map_invariants,
    make_affine_map,
    make_quadratic_map,
    map_from_dict,
)
from lorenzmaps.errors import AmbiguousSideError, DomainError, EscapeError


def test_signed_point_invariants():
    with pytest.raises(DomainError):
        SignedPoint(0.0)  # zero needs a side
    with pytest.raises(DomainError):
        SignedPoint(0.5, Side.FROM_LEFT)  # sides only at zero
    assert SignedPoint.zero_minus().symbol() == "L"
    assert SignedPoint.zero_plus().symbol() == "R"
    assert SignedPoint.at(-0.3).symbol() == "L"
    assert SignedPoint.at(0.7).symbol() == "R"


def test_quadratic_constructor_corners():
    # the four distinguished corner behaviours of the family
    m = make_quadratic_map(0, 1)
    assert m.left(0.0) == 0.0 and m.right(0.0) == 0.0
    m = make_quadratic_map(1, 0)
    assert m.left(0.0) == 1.0 and m.right(0.0) == -1.0
    with pytest.raises(DomainError):
        make_quadratic_map(1.2, 0.5)
    with pytest.raises(DomainError):
        make_quadratic_map(0.5, -0.1)


def test_quadratic_boundary_derivative():
    # left branch s - (1+s)x^2 has derivative -2(1+s)x; at x = -1 and
    # s = 1/2 that is 3, and symmetrically for the right branch
    m = make_quadratic_map(0.5, 0.5)
    d_left = m.derivative(SignedPoint.at(-1.0))
    d_right = m.derivative(SignedPoint.at(1.0))
    assert d_left == pytest.approx(3.0, abs=1e-12)
    assert d_right == pytest.approx(3.0, abs=1e-12)
    # finite-difference cross-check
    h = 1e-7
    fd = (m.left(-1.0 + h) - m.left(-1.0)) / h
    assert fd == pytest.approx(3.0, abs=1e-5)


def test_quadratic_boundary_expansion_over_square():
    for s in (0.0, 0.25, 0.5, 0.75, 1.0):
        for t in (0.0, 0.25, 0.5, 0.75, 1.0):
            m = make_quadratic_map(s, t)
            assert m.derivative(SignedPoint.at(-1.0)) > 1.0
            assert m.derivative(SignedPoint.at(1.0)) > 1.0


def test_affine_constructor_and_eval():
    m = make_affine_map("3/2", "3/2")
    assert m.left(Fraction(0)) == Fraction(1, 2)
    assert m.right(Fraction(0)) == Fraction(-1, 2)
    assert m.eval(SignedPoint.at(Fraction(1, 2))) == Fraction(1, 4)
    full = make_affine_map(2, 2)
    assert full.left(Fraction(0)) == 1 and full.right(Fraction(0)) == -1
    for bad in (1, "1/1", "5/2", 3):
        with pytest.raises(DomainError):
            make_affine_map(bad, "3/2")


def test_exact_orbit_oracle():
    # hand-checkable rational orbit of 0- under slopes 3/2
    m = make_affine_map("3/2", "3/2")
    orb = m.orbit(SignedPoint.zero_minus(exact=True), 5)
    values = [p.value for p in orb[1:]]
    assert values == [Fraction(1, 2), Fraction(1, 4), Fraction(-1, 8),
                      Fraction(5, 16), Fraction(-1, 32)]


def test_exact_float_agreement_per_step():
    rng = random.Random(7)
    for _ in range(10):
        den = rng.randrange(3, 40)
        km = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        kp = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        m = make_affine_map(km, kp)
        exact = m.orbit(SignedPoint.zero_minus(exact=True), 30)
        approx = m.orbit(SignedPoint.zero_minus(), 30)
        for pe, pa in zip(exact, approx):
            # agreement within 1e-12 per step is only claimed while the
            # float orbit has not drifted; check the first 12 steps
            if exact.index(pe) > 12:
                break
            assert abs(float(pe.value) - pa.value) < 1e-12 * (exact.index(pe) + 1)


def test_zero_landing_keeps_seed_side():
    # right critical point fixed: 0+ -> 0+ -> ...
    m = make_quadratic_map(1, 1)
    orb = m.orbit(SignedPoint.zero_plus(), 3)
    assert all(p.value == 0 and p.side is Side.FROM_RIGHT for p in orb)
    # left critical value 0 with left inheritance
    m = make_quadratic_map(0, 1)
    orb = m.orbit(SignedPoint.zero_minus(), 4)
    assert all(p.symbol() == "L" for p in orb)


def test_orbit_of_fixed_boundary():
    m = make_quadratic_map(1, 0)
    orb = m.orbit(SignedPoint.zero_minus(), 2)
    assert orb[1].value == pytest.approx(1.0)
    assert orb[2].value == pytest.approx(1.0)


def test_interior_orbit_hitting_discontinuity_raises():
    m = make_affine_map(2, 2)
    with pytest.raises(AmbiguousSideError):
        m.orbit(SignedPoint.at(Fraction(1, 2)), 2)  # 1/2 -> 0 exactly


def test_orbit_escape_detected_for_broken_map():
    broken = LorenzMap(Fraction(-1), Fraction(1), 1.0,
                       AffineSlopes(Fraction(5, 2), Fraction(5, 2)))
    with pytest.raises(EscapeError):
        broken.orbit(SignedPoint.zero_minus(exact=True), 3)


def _fd_schwarzian(f, x, h):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    d3 = (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h ** 3)
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def test_schwarzian_against_finite_differences():
    m = make_quadratic_map(0.0, 0.0)
    x = -0.5
    # quadratic branch: f''' = 0, so Sf = -1.5 (f''/f')^2 = -1.5 / x^2
    assert m.schwarzian(x) == pytest.approx(-6.0, abs=1e-12)
    for h in (1e-2, 1e-3):
        fd = _fd_schwarzian(m.left, x, h)
        assert fd == pytest.approx(-6.0, rel=1e-3)


def test_schwarzian_signs():
    rng = random.Random(1)
    for _ in range(10):
        m = make_quadratic_map(rng.random(), rng.random())
        for _ in range(100):
            x = rng.uniform(-0.999, 0.999)
            if abs(x) < 1e-6:
                continue
            assert m.schwarzian(x) < 0.0
    aff = make_affine_map("3/2", "7/4")
    assert aff.schwarzian(0.3) == 0
    assert aff.schwarzian(-0.3) == 0
    with pytest.raises(DomainError):
        make_quadratic_map(0.3, 0.3).schwarzian(0.0)


def test_branch_monotonicity_sampled():
    rng = random.Random(3)
    for _ in range(20):
        m = make_quadratic_map(rng.random(), rng.random())
        assert check_map_invariants(m) == []


def test_boundary_points_fixed():
    for s, t in ((0.0, 0.0), (0.3, 0.8), (1.0, 1.0)):
        m = make_quadratic_map(s, t)
        assert m.eval(SignedPoint.at(-1.0)) == pytest.approx(-1.0, abs=1e-12)
        assert m.eval(SignedPoint.at(1.0)) == pytest.approx(1.0, abs=1e-12)
    aff = make_affine_map("7/4", "9/8")
    assert aff.eval(SignedPoint.at(Fraction(-1))) == Fraction(-1)
    assert aff.eval(SignedPoint.at(Fraction(1))) == Fraction(1)


def test_eval_domain_errors():
    m = make_quadratic_map(0.5, 0.5)
    with pytest.raises(DomainError):
        m.eval(SignedPoint.at(1.5))
    with pytest.raises(DomainError):
        m.eval(0.0)  # bare zero has no side


def test_serialization_round_trip():
    for m in (make_quadratic_map(0.3, 0.7), make_affine_map("5/4", "9/5")):
        doc = m.to_dict()
        again = map_from_dict(doc)
        assert again.to_dict() == doc
    doc = make_affine_map("3/2", "3/2").to_dict()
    assert doc["params"]["k_minus"] == "3/2"
