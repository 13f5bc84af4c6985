import random
from fractions import Fraction

import pytest

from lorenzmaps.core import SignedPoint, make_affine_map, make_quadratic_map
from lorenzmaps.errors import DomainError, HypothesisNotMetError
from lorenzmaps.symbolic import (
    adjacent_branches,
    branch_partition,
    check_combinatorial_equivalence,
    compare_words,
    cutting_times,
    kneading,
    partition_mesh,
    partition_tower,
)


def test_compare_words_examples():
    assert compare_words("LRL", "LRR") == -1
    assert compare_words("R", "LLL") == 1
    assert compare_words("LRL", "LRL") == 0
    # a proper prefix precedes its extensions
    assert compare_words("LR", "LRL") == -1
    with pytest.raises(DomainError):
        compare_words("LRX", "L")


def test_compare_words_total_order():
    rng = random.Random(11)
    words = ["".join(rng.choice("LR") for _ in range(rng.randrange(1, 7)))
             for _ in range(60)]
    for w1 in words:
        for w2 in words:
            c12 = compare_words(w1, w2)
            assert c12 == -compare_words(w2, w1)
            for w3 in words:
                if c12 <= 0 and compare_words(w2, w3) <= 0:
                    assert compare_words(w1, w3) <= 0


def test_kneading_examples():
    assert kneading(make_quadratic_map(1, 1), 6).k_minus == "LRRRRR"
    assert kneading(make_quadratic_map(0, 1), 4).k_minus == "LLLL"
    kp = kneading(make_affine_map("3/2", "3/2"), 6)
    assert kp.k_minus == "LRRLRL"
    assert kp.k_plus == "RLLRLR"
    assert kp.exact_hits == frozenset()


def test_kneading_exact_hits_recorded():
    kp = kneading(make_quadratic_map(0, 1), 5)
    assert ("-", 1) in kp.exact_hits and ("+", 1) in kp.exact_hits
    assert ("-", 5) in kp.exact_hits  # recorded one step past the symbols


def test_partition_depth_one():
    for m in (make_quadratic_map(0.3, 0.9), make_affine_map("4/3", "9/5")):
        part = branch_partition(m, 1)
        assert len(part.branches) == 2
        assert [b.word for b in part.branches] == ["L", "R"]
        assert float(part.branches[0].lo) == -1.0
        assert float(part.branches[0].hi) == 0.0
        assert float(part.branches[1].hi) == 1.0


def test_partition_full_branch_words():
    m = make_quadratic_map(1, 0)
    part = branch_partition(m, 2)
    assert [b.word for b in part.branches] == ["LL", "LR", "RL", "RR"]
    # oracle: branch count = 1 + number of decreasing jumps of f^2 on a grid
    drops = 0
    prev = None
    for i in range(4097):
        x = -1.0 + 2.0 * i / 4096
        y = m.left(x) if x < 0 else m.right(x)
        y = m.left(y) if y < 0 else m.right(y)
        if prev is not None and y < prev:
            drops += 1
        prev = y
    assert len(part.branches) == drops + 1


def test_partition_exact_affine_endpoints():
    part = branch_partition(make_affine_map(2, 2), 3)
    assert len(part.branches) == 8
    endpoints = [b.lo for b in part.branches] + [part.branches[-1].hi]
    assert endpoints == [Fraction(n, 4) for n in range(-4, 5)]


def test_partition_depth_cap():
    with pytest.raises(DomainError):
        branch_partition(make_quadratic_map(0.5, 0.5), 25)


def test_cutting_times_boundary_branches():
    part = branch_partition(make_quadratic_map(0.4, 0.6), 1)
    left, right = part.branches
    assert cutting_times(None, left) == (0, None)
    assert cutting_times(None, right) == (None, 0)


def test_cutting_times_depth_two():
    part = branch_partition(make_quadratic_map(1, 0), 2)
    lr = part.by_word("LR")
    assert (lr.cut_l, lr.cut_r) == (0, 1)
    ll = part.by_word("LL")
    assert (ll.cut_l, ll.cut_r) == (1, None)


def test_cutting_times_mirror_swap():
    # the symmetric affine map commutes with x -> -x, so the cutting
    # times of mirror branches swap l and r
    part = branch_partition(make_affine_map("3/2", "3/2"), 6)
    by_interval = {(b.lo, b.hi): b for b in part.branches}
    for b in part.branches:
        mirror = by_interval[(-b.hi, -b.lo)]
        assert mirror.cut_l == b.cut_r
        assert mirror.cut_r == b.cut_l
        assert mirror.word == b.word.translate(str.maketrans("LR", "RL"))


def test_mesh_examples():
    assert partition_mesh(make_affine_map(2, 2), 10) == pytest.approx(2 * 2 ** -10)
    assert partition_mesh(make_quadratic_map(0.2, 0.9), 1) == 1.0
    meshes = [partition_mesh(make_quadratic_map(1, 1), n) for n in range(1, 17)]
    assert all(m2 <= m1 + 1e-15 for m1, m2 in zip(meshes, meshes[1:]))


def test_partition_refinement():
    rng = random.Random(5)
    for _ in range(5):
        m = make_quadratic_map(rng.random(), rng.random())
        tower = partition_tower(m, 7)
        for fine, coarse in zip(tower[1:], tower):
            parents = {(b.lo, b.hi): b for b in coarse.branches}
            for child in fine.branches:
                parent = next(b for (lo, hi), b in parents.items()
                              if lo <= child.lo and child.hi <= hi)
                assert child.word[:coarse.depth] == parent.word


def test_word_orbit_consistency():
    rng = random.Random(9)
    for _ in range(5):
        m = make_quadratic_map(rng.random(), rng.random())
        part = branch_partition(m, 6)
        for b in part.branches:
            x = 0.5 * (float(b.lo) + float(b.hi))
            for sym in b.word:
                assert ("L" if x < 0 else "R") == sym
                x = m.left(x) if x < 0 else m.right(x)


def test_kneading_equals_adjacent_branch_words():
    rng = random.Random(13)
    for _ in range(8):
        m = make_quadratic_map(rng.random(), rng.random())
        kp = kneading(m, 8)
        part = branch_partition(m, 8)
        left = next(b for b in part.branches if float(b.hi) == 0.0)
        right = next(b for b in part.branches if float(b.lo) == 0.0)
        assert left.word == kp.k_minus
        assert right.word == kp.k_plus
        # and the single-branch fast path agrees with the full partition
        adj = adjacent_branches(m, "-", 8)[-1]
        assert adj.word == kp.k_minus
        assert float(adj.lo) == pytest.approx(float(left.lo), abs=1e-12)


def test_float_kneading_matches_exact():
    rng = random.Random(17)
    for _ in range(10):
        den = rng.randrange(5, 60)
        km = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        kp_ = Fraction(rng.randrange(den + 1, 2 * den + 1), den)
        m = make_affine_map(km, kp_)
        exact = kneading(m, 40, exact=True)
        orbit_m = m.orbit(SignedPoint.zero_minus(exact=True), 40)
        orbit_p = m.orbit(SignedPoint.zero_plus(exact=True), 40)
        near_zero = min(abs(p.value) for p in orbit_m[1:] + orbit_p[1:]
                        if p.value != 0)
        if near_zero < Fraction(1, 10 ** 9):
            continue
        approx = kneading(m, 40, exact=False)
        assert approx.k_minus == exact.k_minus
        assert approx.k_plus == exact.k_plus


def test_equivalence_identity():
    m = make_quadratic_map(0.6, 0.3)
    rep = check_combinatorial_equivalence(m, m, 6)
    assert rep.ok
    assert rep.discrepancy is None
    assert len(rep.branch_counts) == 6


def test_equivalence_hypothesis_not_met():
    m1 = make_affine_map("3/2", "3/2")
    m2 = make_affine_map(2, 2)
    with pytest.raises(HypothesisNotMetError) as err:
        check_combinatorial_equivalence(m1, m2, 6)
    assert "index 3" in str(err.value)


def test_equivalence_across_families():
    # an affine map and a quadratic member with the same depth-5 kneading
    from lorenzmaps.family import realize_kneading

    aff = make_affine_map("3/2", "3/2")
    kp = kneading(aff, 5)
    pt = realize_kneading(kp.k_minus, kp.k_plus)
    assert pt is not None
    quad = make_quadratic_map(pt.s, pt.t)
    rep = check_combinatorial_equivalence(aff, quad, 5)
    assert rep.ok, rep.discrepancy
