"""Halfplane patterns through the origin and the pinning-pattern decision.

A pattern is an ordered list of outward normals ``n_i``; halfplane ``i`` is
``{x : <n_i, x> <= 0}``.  All predicates run on :class:`fractions.Fraction`
coordinates, so every sign that decides a verdict is exact.  Floats enter
only through :func:`direction_from_angle` and leave only through the
``*_deg`` helpers used for reporting.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateInput,
    InvalidPattern,
    NotSpanningTriple,
    ProvidedAnglesNotSigma5,
)

Number = Union[int, float, str, Fraction]
Vec2 = tuple  # (Fraction, Fraction)

SIGMA5_DEFAULT_DEG = (0.0, 108.0, 216.0, 324.0, 72.0)
# signed labels of the sigma5 cyclic order: +i is n_i, -i is -n_i (1-based)
SIGMA5_ORDER = (1, -3, 5, 2, -4, -1, 3, -5, -2, 4)


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x!r}")
    return Fraction(x)


def vec(x: Number, y: Number) -> Vec2:
    return (to_fraction(x), to_fraction(y))


def direction_from_angle(deg: float) -> Vec2:
    rad = math.radians(deg)
    return vec(math.cos(rad), math.sin(rad))


def angle_deg(v: Vec2) -> float:
    return math.degrees(math.atan2(float(v[1]), float(v[0]))) % 360.0


def dot(a: Vec2, b: Vec2) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec2, b: Vec2) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def neg(a: Vec2) -> Vec2:
    return (-a[0], -a[1])


def rot90(a: Vec2) -> Vec2:
    return (-a[1], a[0])


def sign(x) -> int:
    return (x > 0) - (x < 0)


def is_zero(a: Vec2) -> bool:
    return a[0] == 0 and a[1] == 0


def same_direction(a: Vec2, b: Vec2) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def _upper(a: Vec2) -> bool:
    return a[1] > 0 or (a[1] == 0 and a[0] > 0)


def _ccw_cmp(a: Vec2, b: Vec2) -> int:
    """Order directions by counterclockwise angle from the positive x-axis."""
    ua, ub = _upper(a), _upper(b)
    if ua != ub:
        return -1 if ua else 1
    return -sign(cross(a, b))


ccw_key = functools.cmp_to_key(_ccw_cmp)


def sorted_directions(dirs: Iterable[Vec2]) -> list:
    """Counterclockwise-sorted directions with duplicates (same ray) merged."""
    out = []
    for v in sorted(dirs, key=ccw_key):
        if not out or not same_direction(out[-1], v):
            out.append(v)
    if len(out) > 1 and same_direction(out[0], out[-1]):
        out.pop()
    return out


def strictly_between(a: Vec2, b: Vec2) -> Vec2:
    """A direction strictly inside the counterclockwise gap from ``a`` to ``b``."""
    c = cross(a, b)
    if c > 0:
        return (a[0] + b[0], a[1] + b[1])
    if c < 0:
        return (-(a[0] + b[0]), -(a[1] + b[1]))
    if dot(a, b) < 0:
        return rot90(a)
    return neg(a)  # a == b: the gap is the whole circle minus a point


@dataclass(frozen=True)
class HalfplanePattern:
    normals: tuple

    def __post_init__(self):
        normals = tuple(vec(*n) for n in self.normals)
        if not normals:
            raise InvalidPattern("a pattern needs at least one halfplane")
        for i, n in enumerate(normals):
            if is_zero(n):
                raise InvalidPattern(f"normal {i} is the zero vector")
        for i, j in itertools.combinations(range(len(normals)), 2):
            if cross(normals[i], normals[j]) == 0:
                raise InvalidPattern(
                    f"halfplanes {i} and {j} are bounded by the same line"
                )
        object.__setattr__(self, "normals", normals)

    def __len__(self):
        return len(self.normals)

    @classmethod
    def from_angles(cls, degrees: Sequence[float]) -> "HalfplanePattern":
        return cls(tuple(direction_from_angle(a) for a in degrees))

    def angles(self) -> list:
        return [angle_deg(n) for n in self.normals]

    def rotated(self, deg: float) -> "HalfplanePattern":
        return HalfplanePattern.from_angles([a + deg for a in self.angles()])

    def float_normals(self) -> np.ndarray:
        return np.array([[float(x), float(y)] for x, y in self.normals])

    def to_json(self) -> dict:
        return {"normals": [[str(x), str(y)] for x, y in self.normals]}

    @classmethod
    def from_json(cls, doc: dict) -> "HalfplanePattern":
        return cls(tuple(tuple(n) for n in doc["normals"]))


def signed_cyclic_order(P: HalfplanePattern) -> list:
    """Labels (+i for n_i, -i for -n_i, 1-based) of all 2k signed normals, ccw."""
    labelled = []
    for i, n in enumerate(P.normals, start=1):
        labelled.append((n, i))
        labelled.append((neg(n), -i))
    labelled.sort(key=lambda t: ccw_key(t[0]))
    return [lab for _, lab in labelled]


def _is_rotation(seq: Sequence, target: Sequence) -> bool:
    if len(seq) != len(target):
        return False
    doubled = list(target) * 2
    m = len(seq)
    return any(doubled[s:s + m] == list(seq) for s in range(m))


def is_sigma5(P: HalfplanePattern) -> bool:
    """True when the signed normals realise the sigma5 cyclic order.

    The mirror image (same order read clockwise) is accepted too: a
    reflection of the plane preserves the pinning-pattern property.
    """
    if len(P) != 5:
        return False
    order = signed_cyclic_order(P)
    return _is_rotation(order, SIGMA5_ORDER) or _is_rotation(order, SIGMA5_ORDER[::-1])


def sigma5(angles: Optional[Sequence[float]] = None) -> HalfplanePattern:
    if angles is None:
        angles = SIGMA5_DEFAULT_DEG
    if len(angles) != 5:
        raise ProvidedAnglesNotSigma5(f"expected 5 angles, got {len(angles)}")
    try:
        P = HalfplanePattern.from_angles(angles)
    except InvalidPattern as exc:
        raise ProvidedAnglesNotSigma5(str(exc)) from exc
    if not is_sigma5(P):
        raise ProvidedAnglesNotSigma5(
            f"cyclic order {signed_cyclic_order(P)} is not the sigma5 order"
        )
    return P


def positively_spans(a: Vec2, b: Vec2, c: Vec2) -> bool:
    a, b, c = vec(*a), vec(*b), vec(*c)
    if is_zero(a) or is_zero(b) or is_zero(c):
        raise DegenerateInput("zero vector")
    s = (sign(cross(a, b)), sign(cross(b, c)), sign(cross(c, a)))
    if 0 in s:
        if s == (0, 0, 0) and not (same_direction(a, b) and same_direction(b, c)):
            raise DegenerateInput("collinear inputs with opposite directions")
        return False
    return s[0] == s[1] == s[2]


def spanning_triples(P: HalfplanePattern) -> list:
    """All 0-based index triples ``i < j < k`` whose normals positively span."""
    n = P.normals
    return [t for t in itertools.combinations(range(len(n)), 3)
            if positively_spans(n[t[0]], n[t[1]], n[t[2]])]


@dataclass(frozen=True)
class OpenArc:
    """Directions ``u`` with ``<u, enter_normal> < 0`` and ``<u, exit_normal> > 0``."""

    enter_normal: Vec2
    exit_normal: Vec2

    def contains(self, u: Vec2) -> bool:
        return dot(u, self.enter_normal) < 0 and dot(u, self.exit_normal) > 0

    @property
    def start(self) -> Vec2:
        c = cross(self.enter_normal, self.exit_normal)
        return rot90(self.enter_normal) if c >= 0 else neg(rot90(self.exit_normal))

    @property
    def end(self) -> Vec2:
        c = cross(self.enter_normal, self.exit_normal)
        if c > 0:
            return rot90(self.exit_normal)
        return neg(rot90(self.enter_normal))

    @property
    def start_deg(self) -> float:
        return angle_deg(self.start)

    @property
    def end_deg(self) -> float:
        return angle_deg(self.end)

    def to_json(self) -> dict:
        return {"start_deg": self.start_deg, "end_deg": self.end_deg}


def triple_arc(P: HalfplanePattern, i: int, j: int, k: int) -> OpenArc:
    if not (0 <= i < j < k < len(P)):
        raise NotSpanningTriple(f"indices {(i, j, k)} are not increasing and in range")
    n = P.normals
    if not positively_spans(n[i], n[j], n[k]):
        raise NotSpanningTriple(f"normals {(i, j, k)} do not positively span the plane")
    return OpenArc(n[i], n[k])


@dataclass(frozen=True)
class PlanarLine:
    """Directed line ``p0 + t u`` with exact coordinates."""

    p0: Vec2
    u: Vec2

    def to_json(self) -> dict:
        return {"p0": [str(c) for c in self.p0], "u": [str(c) for c in self.u]}

    @classmethod
    def from_json(cls, doc: dict) -> "PlanarLine":
        return cls(vec(*doc["p0"]), vec(*doc["u"]))


@dataclass(frozen=True)
class Crossing:
    kind: str  # "ENTER", "EXIT" or "NEVER"
    t: Optional[Fraction] = None


def crossing_time(n: Vec2, p0: Vec2, u: Vec2) -> Crossing:
    n, p0, u = vec(*n), vec(*p0), vec(*u)
    nu = dot(n, u)
    if nu == 0:
        return Crossing("NEVER")
    t = -dot(n, p0) / nu
    return Crossing("ENTER" if nu < 0 else "EXIT", t)


def order_violation(P: HalfplanePattern, line: PlanarLine):
    """Classify a directed line against the pattern, exactly.

    Returns ``"origin"`` if the line meets the origin, ``"misses"`` if it
    avoids some halfplane, a pair ``(i, j)`` with ``i < j`` when the line
    exits ``H_j`` before entering ``H_i``, and ``None`` when the line is a
    counterexample to the pinning property.
    """
    p0, u = line.p0, line.u
    if cross(p0, u) == 0:
        return "origin"
    enters, exits = [], []
    for n in P.normals:
        c = crossing_time(n, p0, u)
        if c.kind == "NEVER":
            if dot(n, p0) > 0:
                return "misses"
            enters.append(None)
            exits.append(None)
        elif c.kind == "ENTER":
            enters.append(c.t)
            exits.append(None)
        else:
            enters.append(None)
            exits.append(c.t)
    # None stands for -inf in ``enters`` and +inf in ``exits``
    best, best_i = None, None
    for j in range(len(P)):
        if best is not None and exits[j] is not None and exits[j] < best:
            return (best_i, j)
        if enters[j] is not None and (best is None or enters[j] > best):
            best, best_i = enters[j], j
    return None


def lines_with_direction(u: Vec2) -> tuple:
    """The two lines with direction ``u`` on either side of the origin.

    Crossing times of all other lines with direction ``u`` are positive
    multiples of one of these two, so they exhaust the behaviours.
    """
    w = rot90(u)
    return PlanarLine(w, u), PlanarLine(neg(w), u)


@dataclass
class PatternVerdict:
    is_pinning: bool
    arcs: list = field(default_factory=list)  # [(triple, OpenArc)]
    uncovered: Optional[Vec2] = None
    counterexample: Optional[PlanarLine] = None

    def to_json(self) -> dict:
        doc = {
            "is_pinning": self.is_pinning,
            "arcs": [{"triple": list(t), **a.to_json()} for t, a in self.arcs],
        }
        if self.uncovered is not None:
            doc["uncovered_direction"] = [str(c) for c in self.uncovered]
            doc["uncovered_deg"] = angle_deg(self.uncovered)
        if self.counterexample is not None:
            doc["counterexample"] = self.counterexample.to_json()
        return doc


def arcs_cover(arcs: Sequence[OpenArc], normals: Sequence[Vec2]) -> list:
    """Directions of S^1 not in the union of the open arcs.

    Only the returned candidate directions need checking: every arc endpoint
    is some ``+-rot90(n)``, so coverage is constant between consecutive ones.
    Returns ``(direction, is_gap)`` pairs, ``is_gap`` telling an interior gap
    representative from an isolated candidate.
    """
    marks = sorted_directions(
        d for n in normals for d in (rot90(n), neg(rot90(n)))
    )
    out = []
    for a, b in zip(marks, marks[1:] + marks[:1]):
        if not any(arc.contains(a) for arc in arcs):
            out.append((a, False))
        mid = strictly_between(a, b)
        if not any(arc.contains(mid) for arc in arcs):
            out.append((mid, True))
    return out


def is_pinning_pattern(P: HalfplanePattern) -> PatternVerdict:
    """Decide the pinning-pattern property exactly.

    Directions covered by a spanning-triple arc are settled by the triple.
    Every uncovered candidate direction is settled by testing the two lines
    with that direction, so a negative verdict always carries a concrete
    counterexample line.
    """
    arcs = [(t, triple_arc(P, *t)) for t in spanning_triples(P)]
    for u, _ in arcs_cover([a for _, a in arcs], P.normals):
        for line in lines_with_direction(u):
            if order_violation(P, line) is None:
                return PatternVerdict(False, arcs, uncovered=u, counterexample=line)
    return PatternVerdict(True, arcs)


def random_pattern(k: int, rng: np.random.Generator) -> HalfplanePattern:
    while True:
        try:
            return HalfplanePattern.from_angles(rng.uniform(0.0, 360.0, size=k))
        except InvalidPattern:
            continue


def _sample_lines(rng: np.random.Generator, m: int):
    # uniform in the annulus 0.1 <= |p0| <= 10 by area, direction uniform
    r = np.sqrt(rng.uniform(0.01, 100.0, size=m))
    phi = rng.uniform(0.0, 2 * np.pi, size=m)
    theta = rng.uniform(0.0, 2 * np.pi, size=m)
    p0 = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
    u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return p0, u


def respects_order(normals: np.ndarray, p0: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorised float test: which lines are counterexamples to pinning."""
    nu = u @ normals.T
    np0 = p0 @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -np0 / nu
    enter = np.where(nu < 0, t, -np.inf)
    exit_ = np.where(nu > 0, t, np.inf)
    misses = np.any((nu == 0) & (np0 > 0), axis=1)
    prior = np.maximum.accumulate(enter, axis=1)
    prior = np.concatenate([np.full((len(p0), 1), -np.inf), prior[:, :-1]], axis=1)
    violated = np.any(exit_ < prior, axis=1)
    return ~violated & ~misses


def sample_counterexample(
    P: HalfplanePattern, trials: int, seed: int = 0, chunk: int = 20000
) -> Optional[PlanarLine]:
    """Random search for a line that meets every halfplane in order.

    Returns the first counterexample in trial order, or None.  Not finding
    one is not a proof.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    normals = P.float_normals()
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        p0, u = _sample_lines(rng, m)
        hits = np.flatnonzero(respects_order(normals, p0, u))
        for h in hits:
            line = PlanarLine(vec(*p0[h]), vec(*u[h]))
            if order_violation(P, line) is None:
                return line
        done += m
    return None


def counterexample_from_direction(
    P: HalfplanePattern, u: Vec2, trials: int, seed: int = 0
) -> Optional[PlanarLine]:
    """Lines with direction ``u`` at random offsets on both sides of the origin."""
    rng = np.random.default_rng(seed)
    u = vec(*u)
    w = rot90(u)
    for _ in range(trials):
        s = to_fraction(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 10.0))
        t = to_fraction(rng.uniform(-10.0, 10.0))
        line = PlanarLine((s * w[0] + t * u[0], s * w[1] + t * u[1]), u)
        if order_violation(P, line) is None:
            return line
    return None


def min_signed_separation_deg(P: HalfplanePattern) -> float:
    """Smallest angular gap between consecutive signed normals (degrees)."""
    angs = sorted(a % 360.0 for n in P.normals for a in (angle_deg(n), angle_deg(neg(n))))
    gaps = [b - a for a, b in zip(angs, angs[1:])] + [angs[0] + 360.0 - angs[-1]]
    return min(gaps)
