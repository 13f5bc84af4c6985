import random
from fractions import Fraction

import pytest

from lorenzmaps.core import (
    AffineSlopes,
    LorenzMap,
    SignedPoint,
    check_map_invariants,
    make_affine_map,
    make_quadratic_map,
)
from lorenzmaps.renorm import (
    RenormType,
    check_nesting,
    detect_renormalizations,
    find_periodic_boundary,
    probe_type,
    renormalize,
    return_map_kneading,
    verify_renormalization,
)
from lorenzmaps.symbolic import kneading


def test_renorm_type_validation():
    with pytest.raises(Exception):
        RenormType("RL", "RL")
    with pytest.raises(Exception):
        RenormType("LR", "LR")
    rt = RenormType("LR", "RL")
    assert rt.a == 2 and rt.b == 2


def test_periodic_boundary_exact_two_cycle():
    # slopes 2: f- = 2x+1 on the LR branch gives f^2 = 4x+1, fixed at -1/3
    full = make_affine_map(2, 2)
    assert find_periodic_boundary(full, "LR") == Fraction(-1, 3)
    assert find_periodic_boundary(full, "RL") == Fraction(1, 3)
    x = Fraction(-1, 3)
    assert full.left(x) == Fraction(1, 3)
    assert full.right(Fraction(1, 3)) == Fraction(-1, 3)


def test_periodic_boundary_absent():
    # -x^2 = x has no root inside (-1, 0)
    assert find_periodic_boundary(make_quadratic_map(0, 1), "L") is None
    # word not carried by the adjacent branch
    assert find_periodic_boundary(make_quadratic_map(0.7, 0.3), "LL") is None


def test_full_branch_maps_not_renormalizable():
    # both critical values sit on the repelling endpoints, so the left
    # branch image always overflows any candidate return domain
    assert detect_renormalizations(make_affine_map(2, 2), 8, 8) == []
    assert detect_renormalizations(make_quadratic_map(1, 0), 8, 8) == []


def test_detect_at_island_centre():
    # symmetric island member: the LR/RL two-cycle is {-s/(1+s), s/(1+s)}
    m = make_quadratic_map(0.75, 0.25)
    rens = detect_renormalizations(m, 8, 8)
    assert [(r.a, r.b) for r in rens][:2] == [(2, 2), (4, 4)]
    r = rens[0]
    assert r.rtype.alpha == "LR" and r.rtype.beta == "RL"
    assert r.p == pytest.approx(-3 / 7, abs=1e-9)
    assert r.q == pytest.approx(3 / 7, abs=1e-9)
    assert r.deriv_p == pytest.approx(2.25, abs=1e-6)
    assert r.deriv_q == pytest.approx(2.25, abs=1e-6)
    assert not r.uncertain and r.margin > 1e-8


def test_detected_renormalizations_repel():
    rng = random.Random(23)
    count = 0
    for _ in range(30):
        m = make_quadratic_map(rng.random(), rng.random())
        for r in detect_renormalizations(m, 6, 6):
            count += 1
            assert r.deriv_p > 1.0
            assert r.deriv_q > 1.0
    assert count > 0


def test_probe_statuses():
    rt = RenormType("LR", "RL")
    inside = probe_type(make_quadratic_map(0.75, 0.25), rt)
    assert inside.status == "inside" and inside.margin > 1e-8
    outside = probe_type(make_quadratic_map(0.5, 0.5), rt)
    assert outside.status == "outside" and outside.margin < 0
    mismatch = probe_type(make_quadratic_map(0.0, 0.5), rt)
    assert mismatch.status == "outside"
    assert mismatch.margin == float("-inf")


def test_detector_soundness_independent_verification():
    rng = random.Random(31)
    points = [(rng.random(), rng.random()) for _ in range(20)]
    # renormalizable parameters are sparse; add a sweep across the main island
    points += [(0.62 + 0.02 * k, 0.38 - 0.02 * k) for k in range(9)]
    checked = 0
    for s, t in points:
        m = make_quadratic_map(s, t)
        for r in detect_renormalizations(m, 6, 6):
            rep = verify_renormalization(m, r)
            assert rep.ok, (m.kind, r, rep)
            assert rep.margin == pytest.approx(r.margin, abs=1e-6)
            checked += 1
    assert checked > 0


def test_renormalize_fixed_points_and_invariants():
    m = make_quadratic_map(0.75, 0.25)
    r = detect_renormalizations(m, 4, 4)[0]
    rescaled = renormalize(m, r)
    assert rescaled.eval(SignedPoint.at(1.0)) == pytest.approx(1.0, abs=1e-10)
    lo = rescaled.domain_lo
    assert rescaled.eval(SignedPoint.at(lo)) == pytest.approx(lo, abs=1e-10)
    assert check_map_invariants(rescaled) == []


def test_rescaled_kneading_matches_return_oracle():
    for s, t in ((0.75, 0.25), (0.8, 0.3), (0.7, 0.22)):
        m = make_quadratic_map(s, t)
        rens = detect_renormalizations(m, 6, 6)
        if not rens:
            continue
        r = rens[0]
        got = kneading(renormalize(m, r), 10)
        want = return_map_kneading(m, r, 10)
        assert got.k_minus == want.k_minus
        assert got.k_plus == want.k_plus


def test_nesting_trivial_and_composite():
    m = make_quadratic_map(0.75, 0.25)
    rens = detect_renormalizations(m, 8, 8)
    base, comp = rens[0], rens[1]
    trivial = check_nesting(base, base)
    assert trivial.ok and trivial.lambda_word == "L"
    rel = check_nesting(base, comp)
    assert rel.ok
    assert rel.lambda_word.startswith("LR")
    assert rel.mu_word.startswith("RL")
    assert comp.a >= base.a + base.b
    assert comp.b >= base.a + base.b
    # order of arguments must not matter
    assert check_nesting(comp, base).ok


def test_nesting_violation_detected():
    m = make_quadratic_map(0.75, 0.25)
    r = detect_renormalizations(m, 4, 4)[0]
    import dataclasses

    fake = dataclasses.replace(r, rtype=RenormType("LLR", "RRL"), a=3, b=3)
    rel = check_nesting(r, fake)
    assert not rel.ok


def test_exact_and_float_detectors_agree():
    rng = random.Random(41)
    for _ in range(12):
        den = rng.randrange(4, 30)
        km = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        kp = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        exact_map = make_affine_map(km, kp)
        float_map = LorenzMap(-1.0, 1.0, 1.0,
                              AffineSlopes(float(km), float(kp)))
        assert exact_map.is_exact and not float_map.is_exact
        got_e = {(r.a, r.b, r.rtype.alpha, r.rtype.beta)
                 for r in detect_renormalizations(exact_map, 8, 8)}
        got_f = {(r.a, r.b, r.rtype.alpha, r.rtype.beta)
                 for r in detect_renormalizations(float_map, 8, 8)}
        assert got_e == got_f


def test_exact_detection_small_slopes():
    # slopes 6/5: the return domain is exactly [-1/11, 1/11]
    m = make_affine_map("6/5", "6/5")
    rens = detect_renormalizations(m, 2, 2)
    assert len(rens) == 1
    r = rens[0]
    assert r.p == Fraction(-1, 11) and r.q == Fraction(1, 11)
    assert (r.a, r.b) == (2, 2)
