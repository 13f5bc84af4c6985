"""Kneading sequences, branch partitions and cutting times.

A *branch* of f^n is a maximal interval on which f^n is monotone; its
endpoints are P, Q or preimages of 0 of depth < n.  Each branch I carries
a word w(I) in {L, R}^n recording which side of 0 the iterates f^i(I)
visit.  The *kneading pair* (K-_n, K+_n) is the pair of words of the two
branches adjacent to 0, equivalently the itineraries of the one-sided
critical orbits of 0- and 0+.

Partitions are built by refinement: a branch of f^n splits at the unique
preimage of 0 it contains (found by monotone bisection, or by exact
division for the affine family) whenever the image f^n(I) straddles 0.
Branch image endpoints are critical-orbit values and are tracked exactly
through the refinement instead of being recomputed by re-iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import AffineSlopes, LorenzMap, Real, Side, SignedPoint
from .errors import DomainError, HypothesisNotMetError, InternalConsistencyError

#: Absolute tolerance for preimage-of-0 bisection (floating maps).
PREIMAGE_TOL = 1e-14

#: Default cap on partition depth; branch counts grow exponentially.
MAX_PARTITION_DEPTH = 24


# -- words ------------------------------------------------------------------

def validate_word(word: str) -> str:
    if not isinstance(word, str):
        raise DomainError(f"word must be a string, got {type(word).__name__}")
    for ch in word:
        if ch not in "LR":
            raise DomainError(f"invalid symbol {ch!r} in word {word!r}")
    return word


def compare_words(w1: str, w2: str) -> int:
    """Lexicographic order with L < R; a proper prefix precedes its
    extensions.  Returns -1, 0 or 1.

    Python string comparison implements exactly this order since
    'L' < 'R' as characters, so this is a documented thin wrapper.
    """
    validate_word(w1)
    validate_word(w2)
    if w1 == w2:
        return 0
    return -1 if w1 < w2 else 1


# -- kneading ---------------------------------------------------------------

@dataclass(frozen=True)
class KneadingPair:
    """Depth-n itineraries of the two one-sided critical orbits.

    ``exact_hits`` lists the pairs (side, i) with f^i(0 side) = 0 for
    1 <= i <= depth; equality of these patterns is part of combinatorial
    equivalence at depth n.
    """

    depth: int
    k_minus: str
    k_plus: str
    exact_hits: frozenset[tuple[str, int]]

    def __post_init__(self) -> None:
        if len(self.k_minus) != self.depth or len(self.k_plus) != self.depth:
            raise DomainError("kneading words must have length equal to depth")
        if self.depth >= 1 and (self.k_minus[0] != "L" or self.k_plus[0] != "R"):
            raise DomainError("kneading words must start on their own side")


def kneading(map_: LorenzMap, n: int, exact: Optional[bool] = None) -> KneadingPair:
    """Kneading pair of depth n >= 1.

    The i-th symbol of k_minus is the side of f^i(0-), with an iterate
    landing on 0 keeping the seed's side (L for the 0- orbit).  Exact
    hits are recorded one step past the last symbol so that equality of
    kneading pairs matches the hypothesis of the branch-correspondence
    check at the same depth.
    """
    if n < 1:
        raise DomainError("kneading depth must be >= 1")
    if exact is None:
        exact = map_.is_exact
    if exact and not map_.is_exact:
        raise DomainError("exact kneading requires an exact-arithmetic map")
    hits = set()
    words = {}
    for side, seed in (("-", SignedPoint.zero_minus(exact)),
                       ("+", SignedPoint.zero_plus(exact))):
        pts = map_.orbit(seed, n)
        words[side] = "".join(p.symbol() for p in pts[:n])
        hits.update((side, i) for i, p in enumerate(pts) if i >= 1 and p.value == 0)
    return KneadingPair(n, words["-"], words["+"], frozenset(hits))


# -- branch partitions -------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    """A maximal monotonicity interval of f^n together with its word.

    ``cut_l`` is the iterate index at which the image first has 0 as its
    right endpoint (None when the right endpoint descends from Q), and
    ``cut_r`` the index at which 0 first is the left endpoint (None when
    the left endpoint descends from P).
    """

    lo: Real
    hi: Real
    word: str
    cut_l: Optional[int]
    cut_r: Optional[int]

    @property
    def length(self) -> float:
        return float(self.hi - self.lo)


@dataclass(frozen=True)
class BranchPartition:
    depth: int
    branches: tuple[Branch, ...]

    def mesh(self) -> float:
        return max(b.length for b in self.branches)

    def by_word(self, word: str) -> Optional[Branch]:
        for b in self.branches:
            if b.word == word:
                return b
        return None


class _BranchState:
    """Mutable refinement record: interval, word, endpoint hit times and
    the tracked one-sided images of the endpoints under f^depth."""

    __slots__ = ("lo", "hi", "word", "h_lo", "h_hi", "img_lo", "img_hi")

    def __init__(self, lo, hi, word, h_lo, h_hi, img_lo, img_hi):
        self.lo = lo
        self.hi = hi
        self.word = word
        self.h_lo = h_lo
        self.h_hi = h_hi
        self.img_lo = img_lo  # SignedPoint: f^depth of lo from inside
        self.img_hi = img_hi  # SignedPoint: f^depth of hi from inside

    def freeze(self) -> Branch:
        return Branch(self.lo, self.hi, self.word, self.h_hi, self.h_lo)


def _advance(map_: LorenzMap, pt: SignedPoint, at_zero_side: Side) -> SignedPoint:
    """One map application for a tracked endpoint image.  A value landing
    on 0 is snapped and keeps the side dictated by the endpoint's position
    in its branch (left endpoints are approached from the right, right
    endpoints from the left)."""
    v = map_.left(pt.value) if pt.is_left else map_.right(pt.value)
    ztol = map_.zero_tol
    if v == 0 or (ztol and -ztol < v < ztol):
        return SignedPoint(type(v)(0), at_zero_side)
    return SignedPoint(v)


def apply_word(map_: LorenzMap, word: str, x: Real) -> Real:
    """f^n(x) computed by composing the branches named by ``word``.

    Following the word avoids sign decisions near branch endpoints, where
    an iterate may sit on the wrong side of 0 by rounding.
    """
    for sym in word:
        x = map_.left(x) if sym == "L" else map_.right(x)
    return x


def preimage_in_branch(map_: LorenzMap, word: str, lo: Real, hi: Real,
                       target: Real = 0) -> Real:
    """The unique solution of f^len(word)(z) = target inside (lo, hi),
    where the composition follows ``word`` and is increasing there.

    Exact maps invert branch by branch; floating maps bisect to
    PREIMAGE_TOL.  Raises when the endpoint values do not bracket.
    """
    if map_.is_exact and isinstance(map_.kind, AffineSlopes):
        y = Fraction(target)
        km, kp = map_.kind.k_minus, map_.kind.k_plus
        for sym in reversed(word):
            y = (y + 1) / km - 1 if sym == "L" else 1 - (1 - y) / kp
        if not (lo < y < hi):
            raise InternalConsistencyError(
                f"exact preimage {y} fell outside ({lo}, {hi})")
        return y
    a, b = float(lo), float(hi)
    fa = apply_word(map_, word, a) - target
    fb = apply_word(map_, word, b) - target
    if not (fa < 0 < fb):
        raise InternalConsistencyError(
            f"no sign change for word {word} on [{lo}, {hi}]: {fa}, {fb}")
    while b - a > PREIMAGE_TOL:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if apply_word(map_, word, mid) - target < 0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _seed_states(map_: LorenzMap) -> list[_BranchState]:
    exact = map_.is_exact
    lo, hi = map_.domain_lo, map_.domain_hi
    left = _BranchState(
        lo, type(lo)(0), "L", None, 0,
        img_lo=_advance(map_, SignedPoint.at(lo), Side.FROM_RIGHT),
        img_hi=_advance(map_, SignedPoint.zero_minus(exact), Side.FROM_LEFT),
    )
    right = _BranchState(
        type(hi)(0), hi, "R", 0, None,
        img_lo=_advance(map_, SignedPoint.zero_plus(exact), Side.FROM_RIGHT),
        img_hi=_advance(map_, SignedPoint.at(hi), Side.FROM_LEFT),
    )
    return [left, right]


def _refine(map_: LorenzMap, states: list[_BranchState],
            depth: int) -> list[_BranchState]:
    """One refinement step: states at ``depth`` -> states at depth + 1."""
    out: list[_BranchState] = []
    for st in states:
        a, b = st.img_lo, st.img_hi
        if not a.value < 0 < b.value:
            # the open image (a, b) avoids 0: img_lo at 0 is a right limit
            # and img_hi a left limit, so the side is decided by a >= 0
            st.word += "R" if a.value >= 0 else "L"
            st.img_lo = _advance(map_, a, Side.FROM_RIGHT)
            st.img_hi = _advance(map_, b, Side.FROM_LEFT)
            out.append(st)
            continue
        z = preimage_in_branch(map_, st.word, st.lo, st.hi)
        exact = map_.is_exact
        left = _BranchState(
            st.lo, z, st.word + "L", st.h_lo, depth,
            img_lo=_advance(map_, a, Side.FROM_RIGHT),
            img_hi=_advance(map_, SignedPoint.zero_minus(exact), Side.FROM_LEFT),
        )
        right = _BranchState(
            z, st.hi, st.word + "R", depth, st.h_hi,
            img_lo=_advance(map_, SignedPoint.zero_plus(exact), Side.FROM_RIGHT),
            img_hi=_advance(map_, b, Side.FROM_LEFT),
        )
        out.extend((left, right))
    return out


def partition_tower(map_: LorenzMap, n: int,
                    max_depth: int = MAX_PARTITION_DEPTH) -> list[BranchPartition]:
    """Partitions into branches of f^1, ..., f^n, built by refinement."""
    if not 1 <= n <= max_depth:
        raise DomainError(f"depth {n} outside 1..{max_depth}")
    states = _seed_states(map_)
    tower = [BranchPartition(1, tuple(st.freeze() for st in states))]
    for depth in range(1, n):
        states = _refine(map_, states, depth)
        tower.append(BranchPartition(depth + 1, tuple(st.freeze() for st in states)))
    for part in tower:
        _check_cover(map_, part)
    return tower


def branch_partition(map_: LorenzMap, n: int,
                     max_depth: int = MAX_PARTITION_DEPTH) -> BranchPartition:
    """The branches of f^n in increasing order, with words and cutting times."""
    return partition_tower(map_, n, max_depth)[-1]


def _check_cover(map_: LorenzMap, part: BranchPartition) -> None:
    bs = part.branches
    if bs[0].lo != map_.domain_lo or bs[-1].hi != map_.domain_hi:
        raise InternalConsistencyError("partition does not span the domain")
    for prev, nxt in zip(bs, bs[1:]):
        if prev.hi != nxt.lo:
            raise InternalConsistencyError("partition has a gap or overlap")


def cutting_times(map_: LorenzMap, branch: Branch) -> tuple[Optional[int], Optional[int]]:
    """(l, r): the first iterate indices at which the branch image gains 0
    as its right / left endpoint.

    These are read from the endpoint bookkeeping of the partition; a
    boundary branch whose endpoint descends from P or Q never acquires
    the corresponding cut and reports None there.
    """
    return branch.cut_l, branch.cut_r


def partition_mesh(map_: LorenzMap, n: int) -> float:
    """Largest branch length of f^n; tends to 0 for maps without
    intervals on which every iterate stays monotone."""
    return branch_partition(map_, n).mesh()


# -- adjacent branches (single-branch fast path) ------------------------------

@dataclass(frozen=True)
class AdjacentBranch:
    """The branch of f^depth whose closure touches 0 from one side."""

    side: str          # "-" for the branch in [P, 0], "+" for [0, Q]
    depth: int
    lo: Real
    hi: Real
    word: str
    image_at_zero: SignedPoint   # f^depth(0 from this side)
    image_far: SignedPoint       # f^depth of the far endpoint, from inside


def adjacent_branches(map_: LorenzMap, side: str, depth: int) -> list[AdjacentBranch]:
    """Adjacent branches of f^1 .. f^depth on one side of 0, computed by
    refining only the branch that stays glued to 0.

    This costs one preimage solve per splitting level instead of a full
    partition, and the words produced are the kneading prefixes.
    """
    if side not in "-+":
        raise DomainError("side must be '-' or '+'")
    exact = map_.is_exact
    if side == "-":
        far = SignedPoint.at(map_.domain_lo)
        zero = SignedPoint.zero_minus(exact)
        lo: Real = map_.domain_lo
        hi: Real = type(map_.domain_lo)(0)
    else:
        far = SignedPoint.at(map_.domain_hi)
        zero = SignedPoint.zero_plus(exact)
        lo = type(map_.domain_hi)(0)
        hi = map_.domain_hi
    word = ""
    img_far = far
    img_zero = zero
    out: list[AdjacentBranch] = []
    for k in range(depth):
        # state: (lo, hi) is the 0-adjacent branch of f^k, img_far / img_zero
        # its endpoint images under f^k, word its first k symbols.  If the
        # image straddles 0, the depth-(k+1) branch is the part glued to 0.
        if side == "-":
            if img_far.value < 0 < img_zero.value:
                lo = preimage_in_branch(map_, word, lo, hi)
                img_far = SignedPoint.zero_plus(exact)
        else:
            if img_zero.value < 0 < img_far.value:
                hi = preimage_in_branch(map_, word, lo, hi)
                img_far = SignedPoint.zero_minus(exact)
        word += img_zero.symbol()
        img_far = _advance(map_, img_far,
                           Side.FROM_RIGHT if side == "-" else Side.FROM_LEFT)
        img_zero = _advance(map_, img_zero, zero.side)
        out.append(AdjacentBranch(side, k + 1, lo, hi, word, img_zero, img_far))
    return out


# -- combinatorial equivalence ------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of matching the branch structures of two maps depth by depth."""

    ok: bool
    depth: int
    branch_counts: tuple[int, ...]
    discrepancy: Optional[str]


def check_combinatorial_equivalence(map1: LorenzMap, map2: LorenzMap,
                                    n: int) -> EquivalenceReport:
    """Verify that equal kneading pairs force equal branch combinatorics.

    Requires kneading(map1, n) == kneading(map2, n) including the exact-hit
    pattern; otherwise raises HypothesisNotMetError (the hypothesis failed,
    which is different from the conclusion failing).  On matching inputs,
    compares branch counts, the ordered branch words and both cutting times
    at every depth k <= n and reports the first discrepancy, if any.
    """
    kp1 = kneading(map1, n)
    kp2 = kneading(map2, n)
    if kp1.k_minus != kp2.k_minus or kp1.k_plus != kp2.k_plus:
        idx = _first_difference(kp1, kp2)
        raise HypothesisNotMetError(
            f"kneading differs first at index {idx}: "
            f"({kp1.k_minus}, {kp1.k_plus}) vs ({kp2.k_minus}, {kp2.k_plus})")
    if kp1.exact_hits != kp2.exact_hits:
        raise HypothesisNotMetError(
            f"exact-hit patterns differ: {sorted(kp1.exact_hits)} vs "
            f"{sorted(kp2.exact_hits)}")
    tower1 = partition_tower(map1, n)
    tower2 = partition_tower(map2, n)
    counts = []
    for part1, part2 in zip(tower1, tower2):
        k = part1.depth
        if len(part1.branches) != len(part2.branches):
            return EquivalenceReport(False, n, tuple(counts),
                                     f"branch counts differ at depth {k}: "
                                     f"{len(part1.branches)} vs {len(part2.branches)}")
        counts.append(len(part1.branches))
        for i, (b1, b2) in enumerate(zip(part1.branches, part2.branches)):
            if b1.word != b2.word:
                return EquivalenceReport(False, n, tuple(counts),
                                         f"words differ at depth {k}, branch {i}: "
                                         f"{b1.word} vs {b2.word}")
            if b1.cut_l != b2.cut_l or b1.cut_r != b2.cut_r:
                return EquivalenceReport(False, n, tuple(counts),
                                         f"cutting times differ at depth {k}, "
                                         f"branch {i} ({b1.word}): "
                                         f"({b1.cut_l}, {b1.cut_r}) vs "
                                         f"({b2.cut_l}, {b2.cut_r})")
    return EquivalenceReport(True, n, tuple(counts), None)


def _first_difference(kp1: KneadingPair, kp2: KneadingPair) -> int:
    for i in range(kp1.depth):
        if kp1.k_minus[i] != kp2.k_minus[i] or kp1.k_plus[i] != kp2.k_plus[i]:
            return i
    return kp1.depth
