"""Two-branch increasing interval maps with one discontinuity at 0.

A map lives on [P, Q] with P < 0 < Q and is given by a pair of continuous,
strictly increasing branches: f- on [P, 0] and f+ on [0, Q], both mapping
into [P, Q] and fixing the endpoints (f(P) = P, f(Q) = Q).  The jump at 0
produces two one-sided critical orbits, of 0- and 0+, which carry all the
combinatorial information computed by the other modules.

Three kinds of maps are supported:

* ``QuadraticFamily(s, t)`` on [-1, 1] with branches
  ``s - (1+s)*x**2`` and ``(t-1) + (2-t)*x**2`` for (s, t) in the unit
  square.  This is the production family scanned in the parameter plane:
  both branches move up pointwise as their parameter grows, the Schwarzian
  derivative is negative, and the boundary fixed points are expanding.
* ``AffineSlopes(k-, k+)`` on [-1, 1] with rational slopes in (1, 2].
  Orbits of rational points stay rational, so this family doubles as an
  exact-arithmetic oracle for the floating-point code paths.
* ``Rescaled`` -- a first-return map brought back to a fixed scale by
  x -> x/q; produced by :func:`lorenzmaps.renorm.renormalize`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import AmbiguousSideError, DomainError, EscapeError

Real = Union[int, float, Fraction]

#: Relative tolerance deciding when a floating iterate is deemed to sit
#: exactly on the discontinuity.  Exact (rational) maps use none.
ZERO_SNAP_REL = 1e-12

#: Relative slack beyond [P, Q] tolerated before an orbit counts as escaped.
ESCAPE_REL = 1e-9


class Side(Enum):
    """Approach side of a point; only meaningful on the discontinuity."""

    FROM_LEFT = "-"
    FROM_RIGHT = "+"
    INTERIOR = "."


@dataclass(frozen=True)
class SignedPoint:
    """A point of [P, Q], with an approach side when it sits at 0.

    The side is the memory of which side of the discontinuity a limit was
    taken from: ``f^n(0-)`` is the limit of ``f^n(x)`` as ``x`` increases
    to 0.  Points away from 0 carry ``Side.INTERIOR``.
    """

    value: Real
    side: Side = Side.INTERIOR

    def __post_init__(self) -> None:
        if self.value == 0:
            if self.side is Side.INTERIOR:
                raise DomainError(
                    "a point at 0 needs an approach side; "
                    "use zero_minus() or zero_plus()"
                )
        elif self.side is not Side.INTERIOR:
            raise DomainError("approach sides are only meaningful at 0")

    @classmethod
    def zero_minus(cls, exact: bool = False) -> "SignedPoint":
        return cls(Fraction(0) if exact else 0.0, Side.FROM_LEFT)

    @classmethod
    def zero_plus(cls, exact: bool = False) -> "SignedPoint":
        return cls(Fraction(0) if exact else 0.0, Side.FROM_RIGHT)

    @classmethod
    def at(cls, value: Real) -> "SignedPoint":
        return cls(value, Side.INTERIOR)

    @property
    def is_left(self) -> bool:
        """True when the point evaluates through the left branch."""
        return self.value < 0 or (self.value == 0 and self.side is Side.FROM_LEFT)

    def symbol(self) -> str:
        return "L" if self.is_left else "R"


@dataclass(frozen=True)
class QuadraticFamily:
    s: float
    t: float


@dataclass(frozen=True)
class AffineSlopes:
    k_minus: Fraction
    k_plus: Fraction


@dataclass(frozen=True)
class Rescaled:
    """First-return map (p, q, f^a, f^b) of ``parent`` rescaled by x -> x/q."""

    parent: "LorenzMap"
    p: Real
    q: Real
    a: int
    b: int
    alpha: str
    beta: str


Kind = Union[QuadraticFamily, AffineSlopes, Rescaled]


@dataclass(frozen=True)
class LorenzMap:
    """Immutable two-branch increasing map of [domain_lo, domain_hi]."""

    domain_lo: Real
    domain_hi: Real
    exponent: float
    kind: Kind

    # -- branch evaluation ------------------------------------------------

    def left(self, x: Real) -> Real:
        """Left branch value; defined for x in [P, 0]."""
        k = self.kind
        if isinstance(k, QuadraticFamily):
            return k.s - (1.0 + k.s) * x * x
        if isinstance(k, AffineSlopes):
            return -1 + k.k_minus * (x + 1)
        return _rescaled_branch(k, k.alpha, x)

    def right(self, x: Real) -> Real:
        """Right branch value; defined for x in [0, Q]."""
        k = self.kind
        if isinstance(k, QuadraticFamily):
            return (k.t - 1.0) + (2.0 - k.t) * x * x
        if isinstance(k, AffineSlopes):
            return 1 - k.k_plus * (1 - x)
        return _rescaled_branch(k, k.beta, x)

    def eval(self, x: Union[SignedPoint, Real]) -> Real:
        """Evaluate the map, picking the branch from the sign (and, at 0,
        the approach side) of ``x``."""
        if not isinstance(x, SignedPoint):
            x = SignedPoint.at(x)
        v = x.value
        if not (self.domain_lo <= v <= self.domain_hi):
            raise DomainError(f"{v!r} outside [{self.domain_lo}, {self.domain_hi}]")
        return self.left(v) if x.is_left else self.right(v)

    __call__ = eval

    # -- orbits -----------------------------------------------------------

    def orbit(self, start: SignedPoint, n: int) -> list[SignedPoint]:
        """The points start, f(start), ..., f^n(start).

        An iterate landing exactly on 0 (within :attr:`zero_tol` for
        floating maps) keeps the approach side of the seed: increasing
        branches carry an interval adjacent to 0 on one side to an
        interval adjacent to the image on the same side.  Seeds without a
        side cannot be continued through 0.
        """
        if n < 0:
            raise DomainError("orbit length must be >= 0")
        lo, hi = self.domain_lo, self.domain_hi
        if not (lo <= start.value <= hi):
            raise DomainError(f"start {start.value!r} outside [{lo}, {hi}]")
        ztol = self.zero_tol
        slack = ESCAPE_REL * float(hi - lo)
        points = [start]
        x = start
        for _ in range(n):
            v = self.left(x.value) if x.is_left else self.right(x.value)
            if v == 0 or (ztol and -ztol < v < ztol):
                if start.side is Side.INTERIOR:
                    raise AmbiguousSideError(
                        "orbit of an interior point reached the discontinuity"
                    )
                x = SignedPoint(type(v)(0), start.side)
            else:
                if v < lo - slack or v > hi + slack:
                    raise EscapeError(f"iterate {v!r} escaped [{lo}, {hi}]")
                x = SignedPoint(v)
            points.append(x)
        return points

    # -- smoothness data --------------------------------------------------

    def derivatives(self, x: SignedPoint) -> tuple[Real, Real, Real, Real]:
        """(f, f', f'', f''') of the branch selected by ``x`` at x.value."""
        return _branch_derivs(self, x.value, left=x.is_left)

    def derivative(self, x: SignedPoint) -> Real:
        return self.derivatives(x)[1]

    def schwarzian(self, x: Union[SignedPoint, Real]) -> float:
        """Schwarzian derivative f'''/f' - 1.5 (f''/f')^2 at an interior
        point of a branch where f' does not vanish."""
        if not isinstance(x, SignedPoint):
            x = SignedPoint.at(x)
        if x.value == 0:
            raise DomainError("Schwarzian is undefined at the discontinuity")
        _, d1, d2, d3 = self.derivatives(x)
        if d1 == 0:
            raise DomainError("Schwarzian is undefined where f' vanishes")
        r = d2 / d1
        return d3 / d1 - 1.5 * r * r

    # -- metadata ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        """True when evaluation at rational points is exact rational."""
        k = self.kind
        if isinstance(k, AffineSlopes):
            return isinstance(k.k_minus, Fraction) and isinstance(k.k_plus, Fraction)
        if isinstance(k, Rescaled):
            return (k.parent.is_exact and isinstance(k.p, Fraction)
                    and isinstance(k.q, Fraction))
        return False

    @property
    def zero_tol(self) -> float:
        if self.is_exact:
            return 0.0
        return ZERO_SNAP_REL * max(abs(float(self.domain_lo)), float(self.domain_hi))

    def to_dict(self) -> dict:
        k = self.kind
        if isinstance(k, QuadraticFamily):
            kind, params = "quadratic", {"s": k.s, "t": k.t}
        elif isinstance(k, AffineSlopes):
            kind, params = "affine", {
                "k_minus": _format_rational(k.k_minus),
                "k_plus": _format_rational(k.k_plus),
            }
        else:
            kind, params = "rescaled", {
                "parent": k.parent.to_dict(),
                "p": k.p, "q": k.q, "a": k.a, "b": k.b,
                "alpha": k.alpha, "beta": k.beta,
            }
        return {
            "kind": kind,
            "params": params,
            "domain": [float(self.domain_lo), float(self.domain_hi)],
            "exponent": self.exponent,
        }


def map_from_dict(data: dict) -> LorenzMap:
    kind = data["kind"]
    params = data["params"]
    if kind == "quadratic":
        return make_quadratic_map(params["s"], params["t"])
    if kind == "affine":
        return make_affine_map(
            _parse_rational(params["k_minus"]), _parse_rational(params["k_plus"])
        )
    if kind == "rescaled":
        parent = map_from_dict(params["parent"])
        r = Rescaled(parent, params["p"], params["q"], params["a"], params["b"],
                     params["alpha"], params["beta"])
        return LorenzMap(params["p"] / params["q"], 1.0, parent.exponent, r)
    raise DomainError(f"unknown map kind {kind!r}")


def _format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _parse_rational(text: Union[str, Fraction, int]) -> Fraction:
    if isinstance(text, str):
        return Fraction(text)
    return Fraction(text)


def _rescaled_branch(k: Rescaled, word: str, x: Real) -> Real:
    v = k.q * x
    parent = k.parent
    for sym in word:
        v = parent.left(v) if sym == "L" else parent.right(v)
    return v / k.q


def _word_derivatives(map_: LorenzMap, word: str, v: Real):
    """Value and first three derivatives of the branch composition named by
    ``word`` (first symbol applied first), at the point v.  The word decides
    which branch is applied at every step, so no sign decisions are made."""
    d1: Real = 1.0
    d2: Real = 0.0
    d3: Real = 0.0
    for sym in word:
        g, g1, g2, g3 = _branch_derivs(map_, v, left=(sym == "L"))
        d3 = g3 * d1 * d1 * d1 + 3 * g2 * d1 * d2 + g1 * d3
        d2 = g2 * d1 * d1 + g1 * d2
        d1 = g1 * d1
        v = g
    return v, d1, d2, d3


def _branch_derivs(map_: LorenzMap, v: Real, left: bool):
    k = map_.kind
    if isinstance(k, QuadraticFamily):
        if left:
            c = 1.0 + k.s
            return k.s - c * v * v, -2.0 * c * v, -2.0 * c, 0.0
        c = 2.0 - k.t
        return (k.t - 1.0) + c * v * v, 2.0 * c * v, 2.0 * c, 0.0
    if isinstance(k, AffineSlopes):
        slope = k.k_minus if left else k.k_plus
        val = map_.left(v) if left else map_.right(v)
        return val, slope, 0, 0
    word = k.alpha if left else k.beta
    f, d1, d2, d3 = _word_derivatives(k.parent, word, k.q * v)
    # F(x) = f(qx)/q:  F' = f'(qx),  F'' = q f''(qx),  F''' = q^2 f'''(qx)
    return f / k.q, d1, k.q * d2, k.q * k.q * d3


# -- constructors ----------------------------------------------------------

def make_quadratic_map(s: float, t: float) -> LorenzMap:
    """Member (s, t) of the quadratic two-parameter family on [-1, 1].

    Left branch s - (1+s) x^2, right branch (t-1) + (2-t) x^2.  The
    critical values are f(0-) = s and f(0+) = t - 1; the corner cases
    s, t in {0, 1} give the trivial and full-branch extremes.  Critical
    exponent 2.
    """
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise DomainError(f"(s, t) = ({s}, {t}) outside the unit square")
    return LorenzMap(-1.0, 1.0, 2.0, QuadraticFamily(float(s), float(t)))


def make_affine_map(k_minus: Union[Fraction, str, int],
                    k_plus: Union[Fraction, str, int]) -> LorenzMap:
    """Piecewise affine map on [-1, 1] with slopes in (1, 2].

    Left branch -1 + k-(x+1), right branch 1 - k+(1-x).  Slopes must
    exceed 1 so the boundary fixed points repel, and cannot exceed 2 or
    the critical values leave [-1, 1].  Rational slopes make every orbit
    of a rational point exactly rational.
    """
    km = _parse_rational(k_minus)
    kp = _parse_rational(k_plus)
    for name, k in (("k_minus", km), ("k_plus", kp)):
        if not (1 < k <= 2):
            raise DomainError(f"{name} = {k} not in (1, 2]")
    return LorenzMap(Fraction(-1), Fraction(1), 1.0, AffineSlopes(km, kp))


def check_map_invariants(map_: LorenzMap, samples: int = 200,
                         tol: float = 1e-9, seed: int = 0) -> list[str]:
    """Check the defining properties of a Lorenz map numerically.

    Returns a list of human-readable violations (empty when all hold):
    endpoint fixing, strict monotonicity of both branches on sampled
    triples, and one-sided critical values inside the domain.
    """
    import random

    rng = random.Random(seed)
    lo, hi = float(map_.domain_lo), float(map_.domain_hi)
    bad: list[str] = []
    if abs(float(map_.left(map_.domain_lo)) - lo) > tol:
        bad.append(f"left branch does not fix {lo}")
    if abs(float(map_.right(map_.domain_hi)) - hi) > tol:
        bad.append(f"right branch does not fix {hi}")
    for branch, a, b in (("left", lo, 0.0), ("right", 0.0, hi)):
        f = map_.left if branch == "left" else map_.right
        for _ in range(samples):
            x = rng.uniform(a, b)
            y = rng.uniform(a, b)
            if x > y:
                x, y = y, x
            if x < y and not float(f(x)) < float(f(y)):
                bad.append(f"{branch} branch not increasing at ({x}, {y})")
                break
    fm = float(map_.left(0.0))
    fp = float(map_.right(0.0))
    if not (lo - tol <= fm <= hi + tol):
        bad.append(f"f(0-) = {fm} outside the domain")
    if not (lo - tol <= fp <= hi + tol):
        bad.append(f"f(0+) = {fp} outside the domain")
    return bad
