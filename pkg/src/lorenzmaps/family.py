"""The monotone two-parameter quadratic family and its parameter plane.

Parameters live in the unit square; the diagonal coordinates

    u = s - t,   m = s + t - 1

are adapted to the family's monotone structure: moving up in m raises
both branches pointwise, so kneading data is monotone along every fiber
M_u = {u fixed}, while moving in u trades one branch against the other.
The sets of parameters whose map carries a renormalization of a given
type meet every fiber in a single interval; islands (connected components
of their interior) are bounded by two 1-Lipschitz graphs over an interval
[u1, u2] that meet at two extremal points, and the binding boundary
condition classifies each boundary point:

* upper boundary:  f^a(0-) = q   or  f^b(0+) = 0
* lower boundary:  f^a(0-) = 0   or  f^b(0+) = p
* vertex: both upper conditions at once
* extremal points: trivial (both critical values hit 0) or full-branch
  (both hit the return-domain boundary).

The scanner rasterizes membership with the tri-state margin of
:func:`lorenzmaps.renorm.probe_type`; the tracer locates boundaries by
bisecting the margin's sign along fibers, which is legitimate because the
margin is built from exactly the quantities above, each strictly monotone
in m.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import LorenzMap, make_quadratic_map
from .errors import ContractViolationError, DomainError
from .renorm import RenormType, TypeProbe, probe_type
from .symbolic import kneading, validate_word

_NEG_INF = float("-inf")


# -- parameters and cones ------------------------------------------------------

@dataclass(frozen=True)
class ParamPoint:
    s: float
    t: float

    def __post_init__(self) -> None:
        if not (-1e-9 <= self.s <= 1 + 1e-9 and -1e-9 <= self.t <= 1 + 1e-9):
            raise DomainError(f"({self.s}, {self.t}) outside the unit square")

    @property
    def u(self) -> float:
        return self.s - self.t

    @property
    def m(self) -> float:
        return self.s + self.t - 1.0

    @classmethod
    def from_um(cls, u: float, m: float) -> "ParamPoint":
        s = (u + m + 1.0) / 2.0
        t = (m - u + 1.0) / 2.0
        return cls(min(1.0, max(0.0, s)), min(1.0, max(0.0, t)))


class ConeRelation:
    EQUAL = "equal"
    C_PLUS = "c_plus"
    C_MINUS = "c_minus"
    B = "b"


def cone_relation(z: ParamPoint, zp: ParamPoint) -> str:
    """Position of zp relative to the deformation cones at z: C+ moves both
    branches up (weakly), C- both down, B one up and one down."""
    ds, dt = zp.s - z.s, zp.t - z.t
    if ds == 0 and dt == 0:
        return ConeRelation.EQUAL
    if ds >= 0 and dt >= 0:
        return ConeRelation.C_PLUS
    if ds <= 0 and dt <= 0:
        return ConeRelation.C_MINUS
    return ConeRelation.B


def family_map(pt: ParamPoint) -> LorenzMap:
    return make_quadratic_map(pt.s, pt.t)


def fiber_range(u: float) -> tuple[float, float]:
    """The m-interval the square cuts out of the fiber M_u."""
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"u = {u} outside [-1, 1]")
    return abs(u) - 1.0, 1.0 - abs(u)


def fiber_bisect(u: float, predicate: Callable[[float], bool], tol: float,
                 m_range: Optional[tuple[float, float]] = None,
                 samples: int = 8) -> Optional[float]:
    """Transition point of a monotone boolean predicate along the fiber M_u.

    The predicate is sampled at ``samples`` points to locate (and assert)
    a single switch, then the switch is bisected to ``tol``.  Returns None
    when the predicate is constant on the fiber; raises
    ContractViolationError when the samples are not monotone.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = m_range if m_range is not None else fiber_range(u)
    if not lo < hi:
        raise DomainError(f"empty m-range on fiber u = {u}")
    ms = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]
    vals = [bool(predicate(m)) for m in ms]
    switches = [i for i in range(samples - 1) if vals[i] != vals[i + 1]]
    if not switches:
        return None
    if len(switches) > 1:
        raise ContractViolationError(
            f"predicate is not monotone on fiber u = {u}: samples {vals}")
    i = switches[0]
    a, b = ms[i], ms[i + 1]
    va = vals[i]
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if bool(predicate(mid)) == va:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


# -- membership probing ---------------------------------------------------------

def probe_param(u: float, m: float, rtype: RenormType) -> TypeProbe:
    """Type membership of the family member at (u, m)."""
    return probe_type(family_map(ParamPoint.from_um(u, m)), rtype)


def _margin(u: float, m: float, rtype: RenormType) -> float:
    return probe_param(u, m, rtype).margin


# -- parameter-plane scan --------------------------------------------------------

_STATUS_CODE = {"outside": 0, "inside": 1, "uncertain": 2}
_STATUS_NAME = {v: k for k, v in _STATUS_CODE.items()}
_PGM_GRAY = {0: 0, 1: 255, 2: 128}


def _scan_column(args) -> list[tuple]:
    alpha, beta, u, ms = args
    rtype = RenormType(alpha, beta)
    out = []
    for m in ms:
        s = (u + m + 1.0) / 2.0
        t = (m - u + 1.0) / 2.0
        if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
            out.append((0, _NEG_INF, math.nan, math.nan, math.nan, math.nan))
            continue
        pr = probe_type(make_quadratic_map(s, t), rtype)
        out.append((
            _STATUS_CODE[pr.status], pr.margin,
            float(pr.p) if pr.p is not None else math.nan,
            float(pr.q) if pr.q is not None else math.nan,
            pr.fa0m if pr.fa0m is not None else math.nan,
            pr.fb0p if pr.fb0p is not None else math.nan,
        ))
    return out


@dataclass(frozen=True)
class Island:
    """A 4-connected component of inside cells of a scan."""

    cells: tuple[tuple[int, int], ...]   # (column i, row j) indices
    seed: ParamPoint                     # cell centre of maximal margin
    seed_margin: float


@dataclass
class ScanGrid:
    """Raster of type membership over the (u, m) bounding box [-1,1]^2.

    ``status[i, j]`` refers to column i (u ascending) and row j (m
    ascending); cells outside the parameter square read outside.
    """

    rtype: RenormType
    nu: int
    nm: int
    us: np.ndarray
    ms: np.ndarray
    status: np.ndarray      # int8, codes: 0 outside, 1 inside, 2 uncertain
    margin: np.ndarray
    p: np.ndarray
    q: np.ndarray
    fa0m: np.ndarray
    fb0p: np.ndarray
    contiguity_violations: tuple[int, ...]

    def csv_text(self) -> str:
        lines = ["u,m,s,t,status,p,q,fa0m,fb0p"]
        for j in range(self.nm):
            for i in range(self.nu):
                u, m = self.us[i], self.ms[j]
                s = (u + m + 1.0) / 2.0
                t = (m - u + 1.0) / 2.0
                vals = []
                for arr in (self.p, self.q, self.fa0m, self.fb0p):
                    v = arr[i, j]
                    vals.append("" if math.isnan(v) else f"{v:.17g}")
                lines.append(
                    f"{u:.17g},{m:.17g},{s:.17g},{t:.17g},"
                    f"{_STATUS_NAME[int(self.status[i, j])]},"
                    + ",".join(vals))
        return "\n".join(lines) + "\n"

    def pgm_bytes(self, comment: str = "") -> bytes:
        from .raster import pgm_bytes

        img = np.zeros((self.nm, self.nu), dtype=np.uint8)
        for code, gray in _PGM_GRAY.items():
            img[(self.status.T == code)] = gray
        return pgm_bytes(img, comment=comment)

    def islands(self) -> list[Island]:
        """Inside-cell components under 4-adjacency, by descending size."""
        seen = np.zeros_like(self.status, dtype=bool)
        comps: list[Island] = []
        for i in range(self.nu):
            for j in range(self.nm):
                if self.status[i, j] != 1 or seen[i, j]:
                    continue
                cells = []
                queue = deque([(i, j)])
                seen[i, j] = True
                while queue:
                    ci, cj = queue.popleft()
                    cells.append((ci, cj))
                    for ni, nj in ((ci - 1, cj), (ci + 1, cj),
                                   (ci, cj - 1), (ci, cj + 1)):
                        if (0 <= ni < self.nu and 0 <= nj < self.nm
                                and self.status[ni, nj] == 1
                                and not seen[ni, nj]):
                            seen[ni, nj] = True
                            queue.append((ni, nj))
                bi, bj = max(cells, key=lambda c: self.margin[c[0], c[1]])
                comps.append(Island(
                    tuple(sorted(cells)),
                    ParamPoint.from_um(float(self.us[bi]), float(self.ms[bj])),
                    float(self.margin[bi, bj])))
        comps.sort(key=lambda c: -len(c.cells))
        return comps


def scan_archipelago(rtype: RenormType, resolution: tuple[int, int] = (64, 64),
                     threads: Optional[int] = None) -> ScanGrid:
    """Rasterize type membership on cell centres of a (nu, nm) grid.

    Cells are tri-state; uncertain cells (membership margin within the
    soft tolerance of 0) trace the archipelago boundaries and are never
    coerced.  Fibers are independent, so columns may be scanned by a
    process pool (``threads`` or the LORENZ_THREADS variable); parallel
    and serial scans produce identical grids.
    """
    nu, nm = resolution
    if nu < 16 or nm < 16:
        raise DomainError("resolution must be at least 16x16")
    us = np.array([-1.0 + (i + 0.5) * 2.0 / nu for i in range(nu)])
    ms = np.array([-1.0 + (j + 0.5) * 2.0 / nm for j in range(nm)])
    jobs = [(rtype.alpha, rtype.beta, float(u), tuple(float(m) for m in ms))
            for u in us]
    if threads is None:
        threads = int(os.environ.get("LORENZ_THREADS", "1"))
    if threads > 1:
        from multiprocessing import Pool

        with Pool(threads) as pool:
            columns = pool.map(_scan_column, jobs)
    else:
        columns = [_scan_column(job) for job in jobs]
    status = np.zeros((nu, nm), dtype=np.int8)
    margin = np.full((nu, nm), _NEG_INF)
    arrays = {name: np.full((nu, nm), math.nan) for name in
              ("p", "q", "fa0m", "fb0p")}
    for i, column in enumerate(columns):
        for j, (code, mar, p, q, fa, fb) in enumerate(column):
            status[i, j] = code
            margin[i, j] = mar
            arrays["p"][i, j] = p
            arrays["q"][i, j] = q
            arrays["fa0m"][i, j] = fa
            arrays["fb0p"][i, j] = fb
    violations = tuple(i for i in range(nu)
                       if not _column_contiguous(status[i]))
    return ScanGrid(rtype, nu, nm, us, ms, status, margin,
                    arrays["p"], arrays["q"], arrays["fa0m"], arrays["fb0p"],
                    violations)


def _column_contiguous(col: np.ndarray) -> bool:
    """Inside cells must form one run; gaps bridged by uncertain cells or a
    single cell of slack are tolerated."""
    inside = [j for j in range(len(col)) if col[j] == 1]
    if len(inside) < 2:
        return True
    for j in range(inside[0], inside[-1] + 1):
        if col[j] == 0:
            gap = [jj for jj in range(inside[0], inside[-1] + 1)
                   if col[jj] == 0]
            return len(gap) <= 1
    return True


# -- boundary classification ------------------------------------------------------

@dataclass(frozen=True)
class BoundaryClassification:
    kind: str                     # upper | lower | vertex | trivial_extremal
    #                             # | full_branch_extremal | unclassified
    residuals: dict
    probe: TypeProbe


def classify_boundary_point(pt: ParamPoint, rtype: RenormType,
                            tol: float = 1e-6) -> BoundaryClassification:
    """Which boundary conditions hold, within tol, at a point on (or next
    to) the archipelago boundary.

    Evaluates the four residuals |f^a(0-) - q|, |f^a(0-)|, |f^b(0+) - p|,
    |f^b(0+)| at the limiting renormalization data.  ``unclassified``
    signals that no condition is active at this tolerance (the caller's
    boundary location is too coarse).
    """
    pr = probe_type(family_map(pt), rtype)
    if pr.fa0m is None or pr.p is None:
        return BoundaryClassification("unclassified", {}, pr)
    res = {
        "fa_vs_q": abs(pr.fa0m - float(pr.q)),
        "fa_vs_0": abs(pr.fa0m),
        "fb_vs_p": abs(pr.fb0p - float(pr.p)),
        "fb_vs_0": abs(pr.fb0p),
    }
    upper_full = res["fa_vs_q"] < tol
    upper_triv = res["fb_vs_0"] < tol
    lower_triv = res["fa_vs_0"] < tol
    lower_full = res["fb_vs_p"] < tol
    if upper_full and upper_triv:
        kind = "vertex"
    elif lower_triv and upper_triv:
        kind = "trivial_extremal"
    elif upper_full and lower_full:
        kind = "full_branch_extremal"
    elif upper_full or upper_triv:
        kind = "upper"
    elif lower_triv or lower_full:
        kind = "lower"
    else:
        kind = "unclassified"
    return BoundaryClassification(kind, res, pr)


# -- island boundary tracing -------------------------------------------------------

@dataclass(frozen=True)
class IslandBoundary:
    """Sampled boundary graphs of one island, with its special points."""

    rtype: RenormType
    u1: float
    u2: float
    us: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    left_extremal: tuple[ParamPoint, str]
    right_extremal: tuple[ParamPoint, str]
    vertices: tuple[tuple[ParamPoint, str], ...]   # (point, which boundary)
    clipped: tuple[str, ...]
    fiber_tol: float

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.rtype.alpha,
            "beta": self.rtype.beta,
            "u1": self.u1,
            "u2": self.u2,
            "lower": [[u, m] for u, m in zip(self.us, self.lower)],
            "upper": [[u, m] for u, m in zip(self.us, self.upper)],
            "extremals": [
                {"s": p.s, "t": p.t, "kind": kind}
                for p, kind in (self.left_extremal, self.right_extremal)
            ],
            "vertices": [
                {"s": p.s, "t": p.t, "boundary": which}
                for p, which in self.vertices
            ],
            "clipped": list(self.clipped),
            "fiber_tol": self.fiber_tol,
        }


def _golden_peak(f: Callable[[float], float], lo: float, hi: float,
                 iters: int = 36) -> tuple[float, float]:
    """Maximum of a quasiconcave function by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _bisect_sign(f: Callable[[float], float], a: float, b: float,
                 tol: float) -> float:
    """Root of sign change of f between a (f > 0) and b (f <= 0)."""
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if f(mid) > 0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


class _FiberSlice:
    __slots__ = ("m_lo", "m_hi", "m_peak", "peak", "clip_lo", "clip_hi")

    def __init__(self, m_lo, m_hi, m_peak, peak, clip_lo, clip_hi):
        self.m_lo = m_lo
        self.m_hi = m_hi
        self.m_peak = m_peak
        self.peak = peak
        self.clip_lo = clip_lo
        self.clip_hi = clip_hi


def _fiber_slice(rtype: RenormType, u: float, window: tuple[float, float],
                 tol: float) -> Optional[_FiberSlice]:
    """Island cross-section on the fiber M_u, searched inside ``window``.

    The membership margin is quasiconcave in m near an island (it is the
    minimum of increasing and decreasing monotone conditions), so a golden
    search finds its peak; the boundaries are then sign bisections.
    """
    f_lo, f_hi = fiber_range(u)
    lo = max(window[0], f_lo)
    hi = min(window[1], f_hi)
    if not lo < hi:
        return None
    g = lambda m: _margin(u, m, rtype)
    m_peak, peak = _golden_peak(g, lo, hi)
    if peak <= 0.0:
        return None
    clip_lo = clip_hi = False
    if g(lo) > 0.0:
        if lo <= f_lo + 1e-15:
            m_lo, clip_lo = f_lo, True
        else:
            return _fiber_slice(rtype, u, (window[0] - 0.1, window[1]), tol)
    else:
        m_lo = _bisect_sign(lambda m: g(m), m_peak, lo, tol)
    if g(hi) > 0.0:
        if hi >= f_hi - 1e-15:
            m_hi, clip_hi = f_hi, True
        else:
            return _fiber_slice(rtype, u, (window[0], window[1] + 0.1), tol)
    else:
        m_hi = _bisect_sign(lambda m: g(m), m_peak, hi, tol)
    return _FiberSlice(m_lo, m_hi, m_peak, peak, clip_lo, clip_hi)


def trace_island_boundary(rtype: RenormType, seed: ParamPoint,
                          fibers: int = 128, tol: float = 1e-10,
                          tip_tol: float = 1e-9) -> IslandBoundary:
    """Trace the island of ``rtype`` containing ``seed``.

    Marches fibers outward from the seed (windows grow by the fiber step
    plus slack, which suffices since the boundary graphs are 1-Lipschitz),
    bisects the island tips in u, then resamples ``fibers`` evenly spaced
    fibers and locates both boundary points on each to ``tol``.  Extremal
    points and binding-condition switches (vertices) are classified.
    """
    pr0 = probe_type(family_map(seed), rtype)
    if pr0.margin <= 0.0:
        raise DomainError(
            f"seed ({seed.s}, {seed.t}) is not inside the island: "
            f"margin {pr0.margin}")
    u0, m0 = seed.u, seed.m
    slice0 = _fiber_slice(rtype, u0, (m0 - 0.2, m0 + 0.2), tol)
    if slice0 is None:
        raise DomainError("failed to bracket the island on the seed fiber")
    clipped: set[str] = set()

    def march(direction: int) -> tuple[float, _FiberSlice, bool]:
        """Follow the island to its tip in one u direction.  Returns the
        tip u, the last usable slice, and whether the square clipped it."""
        du = 0.01
        u_prev, sl_prev = u0, slice0
        while True:
            if abs(u_prev) >= 1.0 - tip_tol:
                return u_prev, sl_prev, True
            u_next = u_prev + direction * du
            if abs(u_next) > 1.0:
                u_next = direction * 1.0
            window = (sl_prev.m_lo - du - 10 * tol, sl_prev.m_hi + du + 10 * tol)
            sl = None
            if abs(u_next) < 1.0:
                sl = _fiber_slice(rtype, u_next, window, tol)
            if sl is not None:
                u_prev, sl_prev = u_next, sl
                if sl.clip_lo:
                    clipped.add("lower")
                if sl.clip_hi:
                    clipped.add("upper")
                continue
            # island ended between u_prev and u_next
            if du <= tip_tol:
                return u_prev, sl_prev, False
            du = max(du / 4.0, tip_tol / 2.0)

    u_right, sl_right, clip_right = march(+1)
    u_left, sl_left, clip_left = march(-1)
    if clip_left:
        clipped.add("left")
    if clip_right:
        clipped.add("right")
    u1, u2 = u_left, u_right

    us: list[float] = []
    lower: list[float] = []
    upper: list[float] = []
    prev = sl_left
    prev_u = u1
    for i in range(fibers):
        u = u1 + (u2 - u1) * (i + 0.5) / fibers
        du = abs(u - prev_u)
        window = (prev.m_lo - du - 10 * tol, prev.m_hi + du + 10 * tol)
        sl = _fiber_slice(rtype, u, window, tol)
        if sl is None:
            # tip resolution artefact; widen once before giving up
            sl = _fiber_slice(rtype, u, (prev.m_lo - 0.05, prev.m_hi + 0.05), tol)
        if sl is None:
            continue
        us.append(u)
        lower.append(sl.m_lo)
        upper.append(sl.m_hi)
        prev, prev_u = sl, u

    left_pt = ParamPoint.from_um(u1, 0.5 * (sl_left.m_lo + sl_left.m_hi))
    right_pt = ParamPoint.from_um(u2, 0.5 * (sl_right.m_lo + sl_right.m_hi))
    left_cls = classify_boundary_point(left_pt, rtype, tol=1e-5)
    right_cls = classify_boundary_point(right_pt, rtype, tol=1e-5)

    vertices = _find_vertices(rtype, us, lower, upper, tol)

    return IslandBoundary(
        rtype, u1, u2, tuple(us), tuple(lower), tuple(upper),
        (left_pt, left_cls.kind), (right_pt, right_cls.kind),
        tuple(vertices), tuple(sorted(clipped)), tol)


def _boundary_binding(rtype: RenormType, u: float, m: float, which: str,
                      tol: float) -> float:
    """Signed difference of the two candidate residuals on one boundary;
    its sign says which condition is binding, its root is a corner.  The
    probe is taken a few tolerances inside the island so that the
    renormalization data exists."""
    inward = -10 * tol if which == "upper" else 10 * tol
    pr = probe_param(u, m + inward, rtype)
    if pr.fa0m is None or pr.p is None:
        return math.nan
    if which == "upper":
        return abs(pr.fa0m - float(pr.q)) - abs(pr.fb0p)
    return abs(pr.fa0m) - abs(pr.fb0p - float(pr.p))


def _find_vertices(rtype: RenormType, us: list[float], lower: list[float],
                   upper: list[float], tol: float):
    out = []
    for which, curve in (("upper", upper), ("lower", lower)):
        diffs = [_boundary_binding(rtype, u, m, which, tol)
                 for u, m in zip(us, curve)]
        for i in range(len(us) - 1):
            d0, d1 = diffs[i], diffs[i + 1]
            if math.isnan(d0) or math.isnan(d1) or d0 == 0.0 or (d0 < 0) == (d1 < 0):
                continue
            a, b = us[i], us[i + 1]
            ma, mb = curve[i], curve[i + 1]
            for _ in range(60):
                mid_u = 0.5 * (a + b)
                mid_m = 0.5 * (ma + mb)
                sl = _fiber_slice(rtype, mid_u,
                                  (mid_m - abs(b - a) - 10 * tol,
                                   mid_m + abs(b - a) + 10 * tol), tol)
                if sl is None:
                    break
                m_here = sl.m_hi if which == "upper" else sl.m_lo
                d = _boundary_binding(rtype, mid_u, m_here, which, tol)
                if math.isnan(d):
                    break
                if (d < 0) == (d0 < 0):
                    a, ma = mid_u, m_here
                else:
                    b, mb = mid_u, m_here
                if abs(b - a) <= 10 * tol:
                    break
            u_v = 0.5 * (a + b)
            m_v = 0.5 * (ma + mb)
            inward = -10 * tol if which == "upper" else 10 * tol
            cls = classify_boundary_point(
                ParamPoint.from_um(u_v, m_v + inward), rtype, tol=1e-5)
            if cls.kind == "vertex":
                out.append((ParamPoint.from_um(u_v, m_v), which))
    return out


# -- hyperbolicity sampling --------------------------------------------------------

@dataclass(frozen=True)
class OrbitFate:
    kind: str            # "attracting" | "neutral" | "none"
    period: int
    multiplier: float


@dataclass(frozen=True)
class HyperbolicReport:
    status: str          # hyperbolic-evidence | non-hyperbolic-evidence | undecided
    left: OrbitFate
    right: OrbitFate


_RETURN_TOL = 1e-9
_MULT_GAP = 1e-6


def _critical_fate(s: float, t: float, seed_left: bool, budget: int) -> OrbitFate:
    """Fate of one critical orbit within an iteration budget.

    Phases of transient iteration alternate with scans for a return to
    within 1e-9 of a base point; a candidate period is kept only if one
    more full period returns again (repelling shadows fail this), and the
    cycle multiplier then separates attracting from neutral.
    """
    sp1 = 1.0 + s
    tm1 = t - 1.0
    tm2 = 2.0 - t
    ztol = 1e-12
    x = 0.0
    left = seed_left
    used = 0
    transient = 512
    while used < budget:
        n = min(transient, budget - used)
        for _ in range(n):
            if x < 0.0 or (x == 0.0 and seed_left):
                x = s - sp1 * x * x
            else:
                x = tm1 + tm2 * x * x
            if -ztol < x < ztol:
                x = 0.0
        used += n
        transient *= 4
        if used >= budget:
            break
        x0 = x
        limit = min(4096, budget - used)
        cycle = [x0]
        period = 0
        for k in range(1, limit + 1):
            if x < 0.0 or (x == 0.0 and seed_left):
                x = s - sp1 * x * x
            else:
                x = tm1 + tm2 * x * x
            if -ztol < x < ztol:
                x = 0.0
            cycle.append(x)
            if abs(x - x0) < _RETURN_TOL:
                period = k
                break
        used += k
        if not period:
            continue
        # confirm: one more full period must return as well
        y = x
        for _ in range(period):
            if y < 0.0 or (y == 0.0 and seed_left):
                y = s - sp1 * y * y
            else:
                y = tm1 + tm2 * y * y
            if -ztol < y < ztol:
                y = 0.0
        used += period
        if abs(y - x0) >= _RETURN_TOL:
            continue
        log_mult = 0.0
        superattracting = False
        for xi in cycle[:period]:
            d = (-2.0 * sp1 * xi) if (xi < 0.0 or (xi == 0.0 and seed_left)) \
                else (2.0 * tm2 * xi)
            if d == 0.0:
                superattracting = True
                break
            log_mult += math.log(abs(d))
        if superattracting:
            return OrbitFate("attracting", period, 0.0)
        if log_mult < math.log(1.0 - _MULT_GAP):
            return OrbitFate("attracting", period, math.exp(log_mult))
        if log_mult <= math.log(1.0 + _MULT_GAP):
            return OrbitFate("neutral", period, math.exp(log_mult))
        # a repelling shadow that survived confirmation; keep iterating
    return OrbitFate("none", 0, math.nan)


def classify_hyperbolic(pt: ParamPoint, horizon: int = 100_000) -> HyperbolicReport:
    """Evidence that both critical orbits tend to attracting cycles.

    ``hyperbolic-evidence`` asserts only what was observed: both orbits
    converged to cycles with multiplier below 1 - 1e-6 inside the budget.
    A detected neutral cycle yields ``non-hyperbolic-evidence``; anything
    else is ``undecided``.  Nothing is claimed about the complement of the
    attractor basins.
    """
    if horizon > 10 ** 5:
        raise DomainError("horizon capped at 1e5")
    left = _critical_fate(pt.s, pt.t, True, horizon)
    right = _critical_fate(pt.s, pt.t, False, horizon)
    if left.kind == "attracting" and right.kind == "attracting":
        status = "hyperbolic-evidence"
    elif "neutral" in (left.kind, right.kind):
        status = "non-hyperbolic-evidence"
    else:
        status = "undecided"
    return HyperbolicReport(status, left, right)


# -- realization of kneading data ----------------------------------------------------

@dataclass
class RealizeReport:
    evaluated: int = 0
    pruned: int = 0
    exhausted: int = 0
    explored: int = 0
    matched_at: Optional[tuple[float, float]] = None


def realize_kneading_search(target_minus: str, target_plus: str,
                            max_rects: int = 300_000,
                            min_size: float = 1e-12
                            ) -> tuple[Optional[ParamPoint], RealizeReport]:
    """Search the square for a parameter realizing a kneading pair.

    Recursive quadrisection with cone pruning: on each rectangle the
    kneading pairs of the two C+-ordered corners bound the kneading of
    every interior point, so rectangles whose corner bounds exclude the
    target are dropped.  Movement in the mixed cone is never pruned, only
    subdivided.  ``None`` with a nonzero prune count is a certificate
    that the pair is not realized.
    """
    validate_word(target_minus)
    validate_word(target_plus)
    n = len(target_minus)
    if n != len(target_plus):
        raise DomainError("target words must have equal length")
    if not 1 <= n <= 14:
        raise DomainError("target depth must be between 1 and 14")
    if target_minus[0] != "L" or target_plus[0] != "R":
        raise DomainError("targets must start with L and R")
    report = RealizeReport()
    cache: dict[tuple[float, float], tuple[str, str]] = {}

    def knead_at(s: float, t: float) -> tuple[str, str]:
        key = (s, t)
        got = cache.get(key)
        if got is None:
            kp = kneading(make_quadratic_map(s, t), n)
            got = (kp.k_minus, kp.k_plus)
            cache[key] = got
            report.evaluated += 1
        return got

    target = (target_minus, target_plus)
    queue: deque = deque([(0.0, 1.0, 0.0, 1.0)])
    while queue and report.explored < max_rects:
        s0, s1, t0, t1 = queue.popleft()
        report.explored += 1
        klo = knead_at(s0, t0)
        if klo == target:
            report.matched_at = (s0, t0)
            return ParamPoint(s0, t0), report
        khi = knead_at(s1, t1)
        if khi == target:
            report.matched_at = (s1, t1)
            return ParamPoint(s1, t1), report
        if (target[0] < klo[0] or target[0] > khi[0]
                or target[1] < klo[1] or target[1] > khi[1]):
            report.pruned += 1
            continue
        sm = 0.5 * (s0 + s1)
        tm = 0.5 * (t0 + t1)
        kmid = knead_at(sm, tm)
        if kmid == target:
            report.matched_at = (sm, tm)
            return ParamPoint(sm, tm), report
        if s1 - s0 < min_size and t1 - t0 < min_size:
            report.exhausted += 1
            continue
        queue.extend(((s0, sm, t0, tm), (sm, s1, t0, tm),
                      (s0, sm, tm, t1), (sm, s1, tm, t1)))
    return None, report


def realize_kneading(target_minus: str, target_plus: str,
                     max_rects: int = 300_000,
                     min_size: float = 1e-12) -> Optional[ParamPoint]:
    """A parameter whose depth-n kneading pair equals the target words, or
    None when the corner-bound pruning exhausts the square."""
    pt, _ = realize_kneading_search(target_minus, target_plus,
                                    max_rects=max_rects, min_size=min_size)
    return pt
