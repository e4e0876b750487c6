"""Shared geometric primitives.

The pinned line is always the positively oriented last coordinate axis of
R^d.  Lines that are not orthogonal to it are encoded by the points where
they cross the hyperplanes ``x_d = 0`` and ``x_d = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

TAU = 1e-9


def as_vector(coords: Sequence[float], *, name: str = "vector") -> np.ndarray:
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def unit(v: Sequence[float]) -> np.ndarray:
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("zero vector has no direction")
    return v / norm


@dataclass(frozen=True, eq=False)
class LineChart:
    """The line through ``(u0, 0)`` and ``(u1, 1)``."""

    u0: np.ndarray
    u1: np.ndarray

    def __post_init__(self):
        u0 = as_vector(self.u0, name="u0")
        u1 = as_vector(self.u1, name="u1")
        if u0.shape != u1.shape:
            raise ValueError("chart anchors must have the same length")
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "u1", u1)

    @classmethod
    def axis(cls, d: int) -> "LineChart":
        return cls(np.zeros(d - 1), np.zeros(d - 1))

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "LineChart":
        x = as_vector(x)
        if len(x) % 2:
            raise ValueError("chart vectors have even length 2d-2")
        k = len(x) // 2
        return cls(x[:k], x[k:])

    @classmethod
    def through(cls, a: Sequence[float], za: float, b: Sequence[float], zb: float) -> "LineChart":
        """Line through ``(a, za)`` and ``(b, zb)``; requires ``za != zb``."""
        a, b = as_vector(a), as_vector(b)
        if za == zb:
            raise ValueError("anchor heights must differ")
        slope = (b - a) / (zb - za)
        u0 = a - za * slope
        return cls(u0, u0 + slope)

    @property
    def d(self) -> int:
        return len(self.u0) + 1

    def vector(self) -> np.ndarray:
        return np.concatenate([self.u0, self.u1])

    def point_at(self, height: float) -> np.ndarray:
        return np.append((1.0 - height) * self.u0 + height * self.u1, height)

    def direction(self) -> np.ndarray:
        return np.append(self.u1 - self.u0, 1.0)

    def __eq__(self, other):
        if not isinstance(other, LineChart):
            return NotImplemented
        return bool(np.array_equal(self.u0, other.u0) and np.array_equal(self.u1, other.u1))

    def __hash__(self):
        return hash((self.u0.tobytes(), self.u1.tobytes()))

    def to_json(self) -> dict:
        return {"u0": self.u0.tolist(), "u1": self.u1.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "LineChart":
        return cls(doc["u0"], doc["u1"])


def line_point_distance(g: LineChart, p: Sequence[float]) -> float:
    p = as_vector(p)
    if len(p) != g.d:
        raise ValueError(f"point has dimension {len(p)}, line lives in R^{g.d}")
    base = np.append(g.u0, 0.0)
    v = g.direction()
    w = p - base
    along = w @ v / (v @ v)
    return float(np.linalg.norm(w - along * v))


def line_point_distances(g: LineChart, points: np.ndarray) -> np.ndarray:
    """Vectorised distances from ``g`` to each row of ``points``."""
    base = np.append(g.u0, 0.0)
    v = g.direction()
    w = np.asarray(points, dtype=float) - base
    along = (w @ v) / (v @ v)
    return np.linalg.norm(w - along[:, None] * v, axis=1)


def exact_sq_distance(g: LineChart, p: Sequence[float]) -> Fraction:
    """Squared line-point distance in rational arithmetic.

    Floats are converted to Fractions without rounding, so the result is the
    exact squared distance between the represented line and point.
    """
    u0 = [Fraction(x) for x in g.u0.tolist()]
    u1 = [Fraction(x) for x in g.u1.tolist()]
    q = [Fraction(x) for x in np.asarray(p, dtype=float).tolist()]
    w = [q[i] - u0[i] for i in range(len(u0))] + [q[-1]]
    v = [u1[i] - u0[i] for i in range(len(u0))] + [Fraction(1)]
    wv = sum(a * b for a, b in zip(w, v))
    vv = sum(b * b for b in v)
    ww = sum(a * a for a in w)
    return ww - wv * wv / vv


@dataclass(frozen=True, eq=False)
class Flat3:
    """The 3-flat ``span(w1, w2) + axis`` inside R^d, with ``d = len(w1) + 1``."""

    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        w1, w2 = as_vector(self.w1), as_vector(self.w2)
        if w1.shape != w2.shape or len(w1) < 2:
            raise ValueError("flat basis vectors must share a length >= 2")
        if abs(np.linalg.norm(w1) - 1) > TAU or abs(np.linalg.norm(w2) - 1) > TAU:
            raise ValueError("flat basis vectors must be unit")
        if abs(w1 @ w2) > TAU:
            raise ValueError("flat basis vectors must be orthogonal")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @classmethod
    def canonical(cls, d: int) -> "Flat3":
        eye = np.eye(d - 1)
        return cls(eye[0], eye[1])

    @classmethod
    def from_vectors(cls, a: Sequence[float], b: Sequence[float]) -> "Flat3":
        """Gram-Schmidt ``a, b`` into an orthonormal basis."""
        w1 = unit(a)
        b = as_vector(b)
        b = b - (b @ w1) * w1
        return cls(w1, unit(b))

    @property
    def d(self) -> int:
        return len(self.w1) + 1

    def to_json(self) -> dict:
        return {"w1": self.w1.tolist(), "w2": self.w2.tolist()}


def embed_in_flat(T: Flat3, q: Sequence[float]) -> np.ndarray:
    x, y, z = as_vector(q)
    return np.append(x * T.w1 + y * T.w2, z)
