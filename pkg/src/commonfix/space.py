"""Ambient space for the iteration: R x l1, with finite-support vectors.

The state of every iteration in this package is a pair (scalar, vector)
where the vector lives in l1 and is stored as a finite coordinate prefix;
all coordinates past the stored prefix are zero.  The product norm is

    ||(s, v)|| = |s| + ||v||_1

which makes R x l1 a Banach space and keeps every norm computation exact
up to ordinary float rounding (sums of absolute values, no squares).

Trailing zeros in a stored vector are representational only: appending or
trimming them never changes a norm, an arithmetic result, or membership in
an admissible set.  Equality between vectors is mathematical, so
``L1Vector((1.0, 0.0)) == L1Vector((1.0,))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import LengthMismatch, WeightSumViolation

# Convex weights must sum to 1 within this tolerance.
WEIGHT_TOL = 1e-12


def _trim(coords: tuple[float, ...]) -> tuple[float, ...]:
    n = len(coords)
    while n > 0 and coords[n - 1] == 0.0:
        n -= 1
    return coords[:n]


@dataclass(frozen=True, eq=False)
class L1Vector:
    """A finite-support vector in l1, stored as a coordinate prefix.

    Coordinates are 1-based in the mathematical reading: ``coords[0]`` is
    the first coordinate x_1.  Instances are immutable; every operation
    returns a new vector.
    """

    coords: tuple[float, ...]

    def __init__(self, coords: Iterable[float] = ()) -> None:
        object.__setattr__(self, "coords", tuple(float(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    @property
    def first(self) -> float:
        """The first coordinate x_1, or 0.0 for an empty prefix."""
        return self.coords[0] if self.coords else 0.0

    def trim(self) -> "L1Vector":
        """Drop trailing zero coordinates.  Mathematically a no-op."""
        return L1Vector(_trim(self.coords))

    def padded(self, length: int) -> tuple[float, ...]:
        """Coordinates zero-padded on the right to ``length``."""
        if length <= len(self.coords):
            return self.coords
        return self.coords + (0.0,) * (length - len(self.coords))

    # Value equality ignores trailing zeros.
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, L1Vector):
            return NotImplemented
        return _trim(self.coords) == _trim(other.coords)

    def __hash__(self) -> int:
        return hash(_trim(self.coords))

    def __add__(self, other: "L1Vector") -> "L1Vector":
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        return L1Vector(x + y for x, y in zip(a, b))

    def __sub__(self, other: "L1Vector") -> "L1Vector":
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        return L1Vector(x - y for x, y in zip(a, b))

    def __mul__(self, t: float) -> "L1Vector":
        return L1Vector(t * c for c in self.coords)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"L1Vector({list(self.coords)!r})"


ZERO_VECTOR = L1Vector(())


@dataclass(frozen=True)
class ProductPoint:
    """A point (scalar, vec) of R x l1."""

    scalar: float
    vec: L1Vector = field(default_factory=L1Vector)

    def __init__(self, scalar: float, vec: L1Vector | Sequence[float] = ()) -> None:
        object.__setattr__(self, "scalar", float(scalar))
        if not isinstance(vec, L1Vector):
            vec = L1Vector(vec)
        object.__setattr__(self, "vec", vec)

    def __add__(self, other: "ProductPoint") -> "ProductPoint":
        return ProductPoint(self.scalar + other.scalar, self.vec + other.vec)

    def __sub__(self, other: "ProductPoint") -> "ProductPoint":
        return ProductPoint(self.scalar - other.scalar, self.vec - other.vec)

    def __mul__(self, t: float) -> "ProductPoint":
        return ProductPoint(t * self.scalar, self.vec * t)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ProductPoint({self.scalar!r}, {list(self.vec.coords)!r})"


ORIGIN = ProductPoint(0.0, ())


@dataclass(frozen=True)
class AdmissibleSet:
    """A product set [a, b] x {v : ||v||_1 <= r}.

    ``scalar_interval`` is the closed interval for the scalar factor and
    ``ball_radius`` the l1-ball radius for the vector factor.  The set is
    closed, convex, and bounded, which is what the iteration relies on.
    """

    scalar_interval: tuple[float, float]
    ball_radius: float

    def __post_init__(self) -> None:
        lo, hi = self.scalar_interval
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValueError(f"invalid scalar interval [{lo}, {hi}]")
        if not (math.isfinite(self.ball_radius) and self.ball_radius >= 0.0):
            raise ValueError(f"invalid ball radius {self.ball_radius}")
        object.__setattr__(self, "scalar_interval", (float(lo), float(hi)))
        object.__setattr__(self, "ball_radius", float(self.ball_radius))


def l1_norm(v: L1Vector | Sequence[float]) -> float:
    """The l1 norm, a plain sum of absolute values in input order."""
    coords = v.coords if isinstance(v, L1Vector) else v
    total = 0.0
    for c in coords:
        total += abs(c)
    return total


def product_norm(p: ProductPoint) -> float:
    """||(s, v)|| = |s| + ||v||_1."""
    return abs(p.scalar) + l1_norm(p.vec)


def convex_combine(
    weights: Sequence[float], points: Sequence[ProductPoint]
) -> ProductPoint:
    """Weighted combination sum_j w_j p_j of points of R x l1.

    Weights must all be positive and sum to 1 within ``WEIGHT_TOL``;
    the number of weights must equal the number of points.  Vectors of
    different stored lengths are aligned by zero padding.  Accumulation
    is left to right in the given order, so results are deterministic.

    :raises LengthMismatch: the two sequences differ in length or are empty.
    :raises WeightSumViolation: a weight is not positive, or the sum is off.
    """
    if len(weights) != len(points) or len(points) == 0:
        raise LengthMismatch(
            f"{len(weights)} weights for {len(points)} points"
        )
    for w in weights:
        if not w > 0.0:
            raise WeightSumViolation(f"non-positive weight {w!r}")
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise WeightSumViolation(
            f"weights sum to {total!r}, off by more than {WEIGHT_TOL}"
        )
    scalar = 0.0
    length = max(len(p.vec) for p in points)
    acc = [0.0] * length
    for w, p in zip(weights, points):
        scalar += w * p.scalar
        coords = p.vec.coords
        for j in range(len(coords)):
            acc[j] += w * coords[j]
    return ProductPoint(scalar, L1Vector(acc))


def in_set(p: ProductPoint, k: AdmissibleSet) -> bool:
    """Inclusive membership test, with no tolerance slack.

    Boundary points belong to the set; a point whose norm exceeds the
    radius by one ulp does not.  Callers that need slack must widen the
    set rather than this predicate.
    """
    lo, hi = k.scalar_interval
    return lo <= p.scalar <= hi and l1_norm(p.vec) <= k.ball_radius


def point_to_json(p: ProductPoint) -> dict:
    """Serialize to the ``{"scalar": s, "vec": [...]}`` wire form."""
    return {"scalar": p.scalar, "vec": list(p.vec.coords)}


def point_from_json(obj: dict) -> ProductPoint:
    """Inverse of :func:`point_to_json`.  Raises ``ValueError`` on bad shape."""
    if not isinstance(obj, dict) or "scalar" not in obj or "vec" not in obj:
        raise ValueError(f"expected {{'scalar': s, 'vec': [...]}}, got {obj!r}")
    vec = obj["vec"]
    if not isinstance(vec, (list, tuple)):
        raise ValueError(f"'vec' must be a list, got {vec!r}")
    return ProductPoint(float(obj["scalar"]), L1Vector(float(c) for c in vec))
