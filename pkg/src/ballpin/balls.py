"""Ball configurations tangent to the pinned axis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DeltaTooLarge, GapTooSmall, InvalidConfig, InvalidPattern, NotTangent
from .geometry import TAU, Flat3, as_vector, embed_in_flat
from .linespace import Screen, ScreenFamily
from .pattern2d import HalfplanePattern


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center, name="center"))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def offset(self) -> np.ndarray:
        """Center minus its foot on the axis."""
        return self.center[:-1]

    @property
    def height(self) -> float:
        return float(self.center[-1])

    def axis_distance(self) -> float:
        return float(np.linalg.norm(self.offset))

    def is_tangent(self, tol: float = TAU) -> bool:
        return abs(self.axis_distance() - self.radius) <= tol * self.radius

    def to_json(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class BallConfig:
    balls: tuple
    d: int

    def __post_init__(self):
        balls = tuple(self.balls)
        for b in balls:
            if len(b.center) != self.d:
                raise ValueError(f"ball center of dimension {len(b.center)} in R^{self.d}")
        object.__setattr__(self, "balls", balls)

    def __len__(self):
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    def subfamily(self, idx: Sequence[int]) -> "BallConfig":
        return BallConfig(tuple(self.balls[i] for i in idx), self.d)

    def centers(self) -> np.ndarray:
        return np.array([b.center for b in self.balls]).reshape(len(self), self.d)

    def radii(self) -> np.ndarray:
        return np.array([b.radius for b in self.balls])

    def to_json(self) -> dict:
        return {"d": self.d, "balls": [b.to_json() for b in self.balls]}

    @classmethod
    def from_json(cls, doc: dict) -> "BallConfig":
        return cls(tuple(Ball(b["center"], b["radius"]) for b in doc["balls"]), int(doc["d"]))


@dataclass
class ValidationReport:
    tangency: list = field(default_factory=list)      # |axis distance - radius| per ball
    ordering: list = field(default_factory=list)      # consecutive height differences
    disjointness: list = field(default_factory=list)  # (i, j, |ci - cj| - ri - rj)
    tol: float = TAU

    @property
    def tangent_ok(self) -> bool:
        return all(m <= self.tol for m in self.tangency)

    @property
    def ordered_ok(self) -> bool:
        return all(m > 0 for m in self.ordering)

    @property
    def disjoint_ok(self) -> bool:
        return all(m > 0 for _, _, m in self.disjointness)

    @property
    def ok(self) -> bool:
        return self.tangent_ok and self.ordered_ok and self.disjoint_ok

    @property
    def min_disjoint_margin(self) -> float:
        return min((m for _, _, m in self.disjointness), default=float("inf"))

    def failures(self) -> list:
        out = [f"ball {i} not tangent (relative error {m:.3e})"
               for i, m in enumerate(self.tangency) if m > self.tol]
        out += [f"balls {i} and {i + 1} out of order (height step {m:.3e})"
                for i, m in enumerate(self.ordering) if m <= 0]
        out += [f"balls {i} and {j} overlap (margin {m:.3e})"
                for i, j, m in self.disjointness if m <= 0]
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "tangent": self.tangent_ok,
            "ordered": self.ordered_ok,
            "disjoint": self.disjoint_ok,
            "min_disjoint_margin": self.min_disjoint_margin,
            "failures": self.failures(),
        }


def validate(C: BallConfig, tol: float = TAU) -> ValidationReport:
    rep = ValidationReport(tol=tol)
    rep.tangency = [abs(b.axis_distance() - b.radius) / b.radius for b in C]
    heights = [b.height for b in C]
    rep.ordering = [b - a for a, b in zip(heights, heights[1:])]
    centers, radii = C.centers(), C.radii()
    for i, j in itertools.combinations(range(len(C)), 2):
        gap = float(np.linalg.norm(centers[i] - centers[j]) - radii[i] - radii[j])
        rep.disjointness.append((i, j, gap))
    return rep


def require_valid(C: BallConfig, tol: float = TAU) -> None:
    rep = validate(C, tol)
    if not rep.ok:
        raise InvalidConfig("; ".join(rep.failures()))


def _normal_of(b: Ball) -> np.ndarray:
    p = b.offset
    norm = np.linalg.norm(p)
    if norm == 0.0:
        raise InvalidConfig("ball center lies on the axis")
    return -p / norm


def project_to_pattern(C: BallConfig, tol: float = TAU) -> HalfplanePattern:
    """Outward normals ``-p_i`` of the halfplanes containing each projected disk."""
    if C.d != 3:
        raise InvalidConfig("projection to a planar pattern needs d = 3")
    require_valid(C, tol)
    # -p is exact in floating point; no normalisation so the direction is kept bit-for-bit
    try:
        return HalfplanePattern(tuple((-b.offset[0], -b.offset[1]) for b in C))
    except InvalidPattern as exc:
        raise InvalidConfig(f"projection is not a halfplane pattern: {exc}") from exc


def screens_of(C: BallConfig, tol: float = TAU) -> ScreenFamily:
    require_valid(C, tol)
    return ScreenFamily(tuple(Screen(b.height, _normal_of(b)) for b in C), C.d)


def realize_screens(F: ScreenFamily, radii: Sequence[float]) -> BallConfig:
    """Balls tangent to the axis whose screens are ``F``."""
    balls = tuple(Ball(np.append(-r * s.n, s.lam), r) for s, r in zip(F, radii))
    return BallConfig(balls, F.d)


def lift_pattern(P: HalfplanePattern, r: float = 1.0, gap: float = 3.0,
                 T: Optional[Flat3] = None, offset: float = 0.0) -> BallConfig:
    """Congruent balls whose projection along the axis is ``P``.

    Ball ``i`` sits at height ``offset + i * gap``; with ``gap > 2r`` any two
    balls are separated by a hyperplane orthogonal to the axis.
    """
    if not gap > 2 * r:
        raise GapTooSmall(f"gap {gap} must exceed the diameter {2 * r}")
    if T is None:
        T = Flat3.canonical(3)
    balls = []
    for i, n in enumerate(P.float_normals()):
        n = n / np.linalg.norm(n)
        center = embed_in_flat(T, (-r * n[0], -r * n[1], offset + i * gap))
        balls.append(Ball(center, r))
    return BallConfig(tuple(balls), T.d)


def shrink_toward_touchpoint(B: Ball, s: float, tol: float = TAU) -> Ball:
    if not 0 <= s < 1:
        raise ValueError("s must lie in [0, 1)")
    if not B.is_tangent(tol):
        raise NotTangent("ball is not tangent to the axis")
    # scale the offset from the touching point; the height is untouched
    center = B.center.copy()
    center[:-1] = (1.0 - s) * B.offset
    return Ball(center, (1.0 - s) * B.radius)


def shrink_radii(C: BallConfig, delta: float) -> BallConfig:
    if not delta > 0:
        raise DeltaTooLarge("delta must be positive")
    if delta >= C.radii().min():
        raise DeltaTooLarge(f"delta {delta} is not below the smallest radius")
    return BallConfig(tuple(Ball(b.center, b.radius - delta) for b in C), C.d)
