"""Detection and application of renormalizations of a Lorenz map.

A map f is renormalizable when there are periodic points p < 0 < q, of
periods a and b, such that the first return map to (p, q) is again a
Lorenz map (p, q, f^a, f^b) and is non-trivial: f^a maps [p, 0] onto an
interval [p, f^a(0-)] with 0 <= f^a(0-) <= q, and symmetrically
p <= f^b(0+) <= 0.  The *type* of the renormalization is the pair of
words (alpha, beta) of the branches of f^a and f^b containing [p, 0] and
[0, q]; those branches are the ones adjacent to 0, so candidate types are
read off the adjacent-branch words and the boundary points are located by
bisection of f^word(x) - x on them.

Membership margins
------------------
Each candidate is scored by the minimum slack of the smooth membership
inequalities (the ones that degenerate exactly on archipelago boundaries):

* q - f^a(0-)              (left branch does not overflow the domain)
* f^a(0-)                  (left branch is non-trivial)
* f^b(0+) - p, -f^b(0+)    (the mirror conditions)
* first-return avoidance of the critical ends of intermediate images.

Orbit points of p and q may touch the boundary of (p, q) exactly (for a
two-cycle, f(p) is the partner fixed point); such contacts are structural
identities, are checked with a hard tolerance, and do not feed the
uncertainty band.  A candidate is accepted when its margin exceeds
-MARGIN_HARD and flagged uncertain below MARGIN_SOFT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import AffineSlopes, LorenzMap, Real, Rescaled, Side, SignedPoint, \
    _word_derivatives
from .errors import DomainError, InternalConsistencyError
from .symbolic import KneadingPair, adjacent_branches, apply_word, \
    preimage_in_branch, validate_word

#: Hard accept/reject tolerance for the membership inequalities.
MARGIN_HARD = 1e-10

#: Candidates with margin below this are flagged uncertain; scan cells with
#: |margin| below it are tri-state uncertain.
MARGIN_SOFT = 1e-8

#: Default caps on the renormalization periods searched.
DEFAULT_PERIOD_CAP = 16

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class RenormType:
    alpha: str
    beta: str

    def __post_init__(self) -> None:
        validate_word(self.alpha)
        validate_word(self.beta)
        if not self.alpha or self.alpha[0] != "L":
            raise DomainError(f"alpha must start with L, got {self.alpha!r}")
        if not self.beta or self.beta[0] != "R":
            raise DomainError(f"beta must start with R, got {self.beta!r}")

    @property
    def a(self) -> int:
        return len(self.alpha)

    @property
    def b(self) -> int:
        return len(self.beta)


@dataclass(frozen=True)
class Renormalization:
    """A verified first-return Lorenz map (p, q, f^a, f^b) of ``rtype``."""

    p: Real
    q: Real
    a: int
    b: int
    rtype: RenormType
    deriv_p: float
    deriv_q: float
    margin: float
    uncertain: bool


@dataclass(frozen=True)
class TypeProbe:
    """Membership of a map in the set of type-(alpha, beta) renormalizable
    maps, with the data needed by boundary classification."""

    status: str                    # "inside" | "outside" | "uncertain"
    margin: float
    reason: str
    fa0m: Optional[float] = None   # f^a(0-)
    fb0p: Optional[float] = None   # f^b(0+)
    p: Optional[Real] = None
    q: Optional[Real] = None
    renorm: Optional[Renormalization] = None


# -- fixed points on a branch -------------------------------------------------

def _roots_and_gap(map_: LorenzMap, word: str, lo: Real, hi: Real,
                   grid: int = 64) -> tuple[list[Real], float]:
    """Fixed points of the branch composition named by ``word`` strictly
    inside (lo, hi), sorted by distance to 0, plus the smallest |f^word - id|
    observed (0 when roots exist; otherwise the distance of the branch from
    acquiring a fixed point, which grades membership failure).

    Affine maps solve the composed linear map exactly; otherwise the
    interval is sampled and each sign change of f^word(x) - x bisected.
    """
    if map_.is_exact and isinstance(map_.kind, AffineSlopes):
        slope: Fraction = Fraction(1)
        offset: Fraction = Fraction(0)
        km, kp = map_.kind.k_minus, map_.kind.k_plus
        for sym in word:
            if sym == "L":
                k, c = km, km - 1
            else:
                k, c = kp, 1 - kp
            slope, offset = k * slope, k * offset + c
        # the domain endpoints P, Q are always fixed, so g vanishes there
        # structurally; they say nothing about root creation inside
        ends = [e for e in (lo, hi)
                if e != map_.domain_lo and e != map_.domain_hi]
        gaps = [abs(slope * e + offset - e) for e in ends]
        gap = float(min(gaps)) if gaps else float("inf")
        if slope == 1:
            return [], gap
        x = offset / (1 - slope)
        if lo < x < hi:
            return [x], 0.0
        return [], gap
    a, b = float(lo), float(hi)
    if not a < b:
        return [], float("inf")
    ztol = map_.zero_tol
    xs = [a + (b - a) * i / grid for i in range(grid + 1)]
    gs = [apply_word(map_, word, x) - x for x in xs]
    roots: list[float] = []
    for x0, x1, g0, g1 in zip(xs, xs[1:], gs, gs[1:]):
        if g0 == 0.0:
            if a < x0:
                roots.append(x0)
            continue
        if g0 * g1 < 0.0:
            roots.append(_bisect_root(map_, word, x0, x1, g0))
    if gs[-1] == 0.0 and xs[-1] < b:
        roots.append(xs[-1])
    roots = [r for r in roots if lo < r < hi and abs(r) > 10 * ztol]
    roots.sort(key=abs)
    if roots:
        return roots, 0.0
    keep = gs
    if lo == map_.domain_lo:
        keep = keep[1:]
    if hi == map_.domain_hi:
        keep = keep[:-1]
    gap = min(abs(g) for g in keep) if keep else float("inf")
    return roots, gap


def fixed_points_on_branch(map_: LorenzMap, word: str, lo: Real, hi: Real,
                           grid: int = 64) -> list[Real]:
    """Fixed points of the ``word`` branch composition inside (lo, hi),
    nearest to 0 first."""
    return _roots_and_gap(map_, word, lo, hi, grid)[0]


def _bisect_root(map_: LorenzMap, word: str, a: float, b: float,
                 ga: float) -> float:
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b or b - a <= 1e-15:
            break
        gm = apply_word(map_, word, mid) - mid
        if gm == 0.0:
            return mid
        if (gm < 0.0) == (ga < 0.0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


def find_periodic_boundary(map_: LorenzMap, word: str) -> Optional[Real]:
    """The fixed point of f^len(word) nearest to 0 on the branch adjacent
    to 0 carrying ``word``, or None when that branch has a different word
    or carries no fixed point."""
    validate_word(word)
    if not word:
        raise DomainError("word must be nonempty")
    side = "-" if word[0] == "L" else "+"
    adj = adjacent_branches(map_, side, len(word))[-1]
    if adj.word != word:
        return None
    roots = fixed_points_on_branch(map_, word, adj.lo, adj.hi)
    return roots[0] if roots else None


# -- membership margins --------------------------------------------------------

def _pair_margin(map_: LorenzMap, rtype: RenormType, p: Real, q: Real,
                 crit_m: list, crit_p: list) -> Optional[float]:
    """Minimum membership slack for a candidate pair (p, q), or None when
    a structural identity fails (the candidate is not a renormalization at
    all, as opposed to being near a boundary).

    crit_m[i] = f^i(0-) for 1 <= i <= a, crit_p[j] = f^j(0+) likewise.
    """
    alpha, beta = rtype.alpha, rtype.beta
    a, b = rtype.a, rtype.b
    fa0m = crit_m[a - 1].value
    fb0p = crit_p[b - 1].value
    margins = [
        q - fa0m,          # f^a([p,0]) stays inside [p, q]
        fa0m,              # ... and covers [p, 0]: non-trivial
        fb0p - p,
        -fb0p,
        p - map_.domain_lo,
        map_.domain_hi - q,
    ]
    # first-return avoidance: critical ends of the intermediate images must
    # clear the return domain; periodic ends may touch it (hard check only)
    x = p
    for i in range(1, a):
        x = map_.left(x) if alpha[i - 1] == "L" else map_.right(x)
        if alpha[i] == "L":
            if not x <= p + MARGIN_HARD:
                return None
            margins.append(p - crit_m[i - 1].value)
        else:
            if not x >= q - MARGIN_HARD:
                return None
    y = q
    for j in range(1, b):
        y = map_.left(y) if beta[j - 1] == "L" else map_.right(y)
        if beta[j] == "R":
            if not y >= q - MARGIN_HARD:
                return None
            margins.append(crit_p[j - 1].value - q)
        else:
            if not y <= p + MARGIN_HARD:
                return None
    return float(min(margins))


def probe_type(map_: LorenzMap, rtype: RenormType) -> TypeProbe:
    """Type-restricted membership test with a signed margin.

    The margin is positive inside the type-(alpha, beta) set, negative
    outside, and crosses 0 exactly on its boundary, so a parameter-plane
    scanner can bisect on its sign.  Status is tri-state with an
    uncertainty band of MARGIN_SOFT around 0.
    """
    a, b = rtype.a, rtype.b
    adj_m = adjacent_branches(map_, "-", a)
    if adj_m[-1].word != rtype.alpha:
        return TypeProbe("outside", _NEG_INF,
                         f"left adjacent word {adj_m[-1].word} != {rtype.alpha}")
    adj_p = adjacent_branches(map_, "+", b)
    if adj_p[-1].word != rtype.beta:
        return TypeProbe("outside", _NEG_INF,
                         f"right adjacent word {adj_p[-1].word} != {rtype.beta}")
    crit_m = [ab.image_at_zero for ab in adj_m]
    crit_p = [ab.image_at_zero for ab in adj_p]
    fa0m = float(crit_m[-1].value)
    fb0p = float(crit_p[-1].value)
    roots_p, gap_p = _roots_and_gap(map_, rtype.alpha, adj_m[-1].lo, adj_m[-1].hi)
    roots_q, gap_q = _roots_and_gap(map_, rtype.beta, adj_p[-1].lo, adj_p[-1].hi)
    if not roots_p or not roots_q:
        # grade the failure by the violated critical-value conditions and
        # by how far the adjacent branch is from carrying a fixed point
        signals = [fa0m, -fb0p]
        if not roots_p:
            signals.append(-gap_p)
        if not roots_q:
            signals.append(-gap_q)
        margin = min(signals)
        missing = "p" if not roots_p else "q"
        status = "outside" if margin <= -MARGIN_SOFT else "uncertain"
        return TypeProbe(status, margin, f"no fixed point for {missing}",
                         fa0m=fa0m, fb0p=fb0p)
    best: float = _NEG_INF
    for i, j in sorted(((i, j) for i in range(len(roots_p))
                        for j in range(len(roots_q))),
                       key=lambda ij: (ij[0] + ij[1], ij[0])):
        p, q = roots_p[i], roots_q[j]
        margin = _pair_margin(map_, rtype, p, q, crit_m, crit_p)
        if margin is None:
            continue
        if margin >= -MARGIN_HARD:
            deriv_p = float(_word_derivatives(map_, rtype.alpha, p)[1])
            deriv_q = float(_word_derivatives(map_, rtype.beta, q)[1])
            ren = Renormalization(p, q, a, b, rtype, deriv_p, deriv_q,
                                  margin, margin < MARGIN_SOFT)
            status = "inside" if margin >= MARGIN_SOFT else "uncertain"
            return TypeProbe(status, margin, "", fa0m=fa0m, fb0p=fb0p,
                             p=p, q=q, renorm=ren)
        best = max(best, margin)
    status = "outside" if best <= -MARGIN_SOFT else "uncertain"
    return TypeProbe(status, best, "all candidate pairs rejected",
                     fa0m=fa0m, fb0p=fb0p)


def detect_renormalizations(map_: LorenzMap,
                            a_max: int = DEFAULT_PERIOD_CAP,
                            b_max: int = DEFAULT_PERIOD_CAP) -> list[Renormalization]:
    """All renormalizations with periods a <= a_max, b <= b_max.

    For each period the only possible type word is the word of the branch
    adjacent to 0 (the return domain [p, 0] lies inside one branch of f^a
    whose closure touches 0), so the search enumerates adjacent-branch
    words and fixed points on them.  Results are sorted by total period;
    candidates passing the membership inequalities only marginally carry
    ``uncertain=True`` rather than being dropped.
    """
    if a_max < 1 or b_max < 1:
        raise DomainError("period caps must be >= 1")
    adj_m = adjacent_branches(map_, "-", a_max)
    adj_p = adjacent_branches(map_, "+", b_max)
    crit_m = [ab.image_at_zero for ab in adj_m]
    crit_p = [ab.image_at_zero for ab in adj_p]
    roots_p = {a: fixed_points_on_branch(map_, adj_m[a - 1].word,
                                         adj_m[a - 1].lo, adj_m[a - 1].hi)
               for a in range(1, a_max + 1)}
    roots_q = {b: fixed_points_on_branch(map_, adj_p[b - 1].word,
                                         adj_p[b - 1].lo, adj_p[b - 1].hi)
               for b in range(1, b_max + 1)}
    found: list[Renormalization] = []
    for a in range(1, a_max + 1):
        if not roots_p[a]:
            continue
        for b in range(1, b_max + 1):
            if not roots_q[b]:
                continue
            rtype = RenormType(adj_m[a - 1].word, adj_p[b - 1].word)
            for i, j in sorted(((i, j) for i in range(len(roots_p[a]))
                                for j in range(len(roots_q[b]))),
                               key=lambda ij: (ij[0] + ij[1], ij[0])):
                p, q = roots_p[a][i], roots_q[b][j]
                margin = _pair_margin(map_, rtype, p, q, crit_m[:a], crit_p[:b])
                if margin is not None and margin >= -MARGIN_HARD:
                    deriv_p = float(_word_derivatives(map_, rtype.alpha, p)[1])
                    deriv_q = float(_word_derivatives(map_, rtype.beta, q)[1])
                    found.append(Renormalization(p, q, a, b, rtype, deriv_p,
                                                 deriv_q, margin,
                                                 margin < MARGIN_SOFT))
                    break
    found.sort(key=lambda r: (r.a + r.b, r.a, r.rtype.alpha, r.rtype.beta))
    return found


# -- the renormalization operator ----------------------------------------------

def renormalize(map_: LorenzMap, ren: Renormalization) -> LorenzMap:
    """The first-return map of ``ren`` rescaled by x -> x/q, a Lorenz map
    on [p/q, 1] whose positive fixed point is exactly 1."""
    kind = Rescaled(map_, ren.p, ren.q, ren.a, ren.b,
                    ren.rtype.alpha, ren.rtype.beta)
    return LorenzMap(ren.p / ren.q, type(ren.q)(1), map_.exponent, kind)


def return_map_kneading(map_: LorenzMap, ren: Renormalization,
                        depth: int) -> KneadingPair:
    """Kneading pair of the first-return map computed without rescaling.

    The return orbit of 0 (from either side) is simulated pointwise in the
    coordinates of ``map_`` by direct iteration with seed-side inheritance;
    no branch words and no division by q are used, so this is an
    independent oracle for ``kneading(renormalize(map_, ren), depth)``.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    ztol = map_.zero_tol
    p, q = float(ren.p), float(ren.q)
    slack = 1e-9 * (q - p)
    words = {}
    hits = set()
    for tag, side in (("-", Side.FROM_LEFT), ("+", Side.FROM_RIGHT)):
        val: float = 0.0
        symbols = []
        for i in range(depth):
            left = val < 0 or (val == 0 and side is Side.FROM_LEFT)
            symbols.append("L" if left else "R")
            steps = ren.a if left else ren.b
            for _ in range(steps):
                go_left = val < 0 or (val == 0 and side is Side.FROM_LEFT)
                val = map_.left(val) if go_left else map_.right(val)
                if ztol and -ztol < val < ztol:
                    val = 0.0
            if not (p - slack <= val <= q + slack):
                raise InternalConsistencyError(
                    f"return orbit left [{p}, {q}]: {val}")
            if val == 0.0:
                hits.add((tag, i + 1))
        words[tag] = "".join(symbols)
    return KneadingPair(depth, words["-"], words["+"], frozenset(hits))


# -- nesting of renormalization types -------------------------------------------

@dataclass(frozen=True)
class NestingRelation:
    """How two renormalizations of one map relate.

    The composite (longer-period) type's words must be concatenations of
    the base type's words, starting alpha*beta and beta*alpha; written in
    base blocks (alpha -> L, beta -> R) they appear as ``lambda_word`` and
    ``mu_word``, which are themselves the type words of the once-
    renormalized map.
    """

    ok: bool
    base: RenormType
    composite: RenormType
    lambda_word: Optional[str]
    mu_word: Optional[str]
    domains_nested: bool
    message: str


def _decode_blocks(word: str, alpha: str, beta: str) -> Optional[str]:
    """Factor ``word`` into alpha/beta blocks; the block is forced by its
    first symbol since alpha starts with L and beta with R."""
    out = []
    i = 0
    while i < len(word):
        block = alpha if word[i] == "L" else beta
        if word[i:i + len(block)] != block:
            return None
        out.append("L" if word[i] == "L" else "R")
        i += len(block)
    return "".join(out)


def check_nesting(r1: Renormalization, r2: Renormalization) -> NestingRelation:
    """Verify the concatenation and domain-nesting laws for two
    renormalizations of the same map."""
    if (r1.rtype.alpha, r1.rtype.beta) == (r2.rtype.alpha, r2.rtype.beta):
        return NestingRelation(True, r1.rtype, r2.rtype, "L", "R", True,
                               "equal types: trivial decomposition")
    base, comp = (r1, r2) if r1.a + r1.b < r2.a + r2.b else (r2, r1)
    if base.a + base.b == comp.a + comp.b:
        return NestingRelation(False, base.rtype, comp.rtype, None, None, False,
                               "distinct types with equal total period cannot nest")
    lam = _decode_blocks(comp.rtype.alpha, base.rtype.alpha, base.rtype.beta)
    mu = _decode_blocks(comp.rtype.beta, base.rtype.alpha, base.rtype.beta)
    if lam is None or mu is None:
        return NestingRelation(False, base.rtype, comp.rtype, lam, mu, False,
                               "composite words are not concatenations of the base words")
    if not (lam.startswith("LR") and mu.startswith("RL")):
        return NestingRelation(False, base.rtype, comp.rtype, lam, mu, False,
                               f"decompositions start {lam[:2]}/{mu[:2]}, "
                               "expected alpha*beta and beta*alpha")
    nested = (float(base.p) - MARGIN_HARD <= float(comp.p)
              and float(comp.q) <= float(base.q) + MARGIN_HARD)
    if not nested:
        return NestingRelation(False, base.rtype, comp.rtype, lam, mu, False,
                               "return domains are not nested")
    return NestingRelation(True, base.rtype, comp.rtype, lam, mu, True, "")


# -- independent re-verification -------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    residual_p: float
    residual_q: float
    margin: float
    monotone_ok: bool

    @property
    def ok(self) -> bool:
        return (self.residual_p < 1e-9 and self.residual_q < 1e-9
                and self.margin >= -MARGIN_HARD and self.monotone_ok)


def verify_renormalization(map_: LorenzMap, ren: Renormalization,
                           samples: int = 64) -> VerificationReport:
    """Re-verify a detection through an independent code path.

    Orbits are iterated directly (branch chosen by sign, no stored words),
    periodicity residuals are measured at p and q, monotonicity of the
    return branches is sampled, and the membership margins are recomputed
    from fresh critical orbits.
    """
    p, q = float(ren.p), float(ren.q)

    def iterate(x: float, steps: int) -> float:
        for _ in range(steps):
            x = map_.left(x) if x < 0 else map_.right(x)
        return x

    residual_p = abs(iterate(p, ren.a) - p)
    residual_q = abs(iterate(q, ren.b) - q)
    mono = True
    prev = None
    for i in range(samples):
        x = p + (0.0 - p) * i / samples
        y = iterate(x, ren.a)
        if prev is not None and not y > prev:
            mono = False
            break
        prev = y
    prev = None
    for i in range(1, samples + 1):
        x = q * i / samples
        y = iterate(x, ren.b)
        if prev is not None and not y > prev:
            mono = False
            break
        prev = y
    crit_m = [pt for pt in map_.orbit(SignedPoint.zero_minus(map_.is_exact),
                                      ren.a)[1:]]
    crit_p = [pt for pt in map_.orbit(SignedPoint.zero_plus(map_.is_exact),
                                      ren.b)[1:]]
    margin = _pair_margin(map_, ren.rtype, ren.p, ren.q, crit_m, crit_p)
    return VerificationReport(residual_p, residual_q,
                              _NEG_INF if margin is None else margin, mono)
