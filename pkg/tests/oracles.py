"""Reference computations used to check the package.

Each oracle works from first principles with a different formulation from
the code under test, and none of them calls into ``ballpin``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.linalg import qr
from scipy.optimize import lsq_linear, minimize_scalar


# ------------------------------------------------------------- distances

def sampled_line_distance(u0, u1, p) -> float:
    """Distance from the line through (u0, 0), (u1, 1) to ``p``, by bounded
    one-dimensional minimisation of the distance along the line."""
    u0, u1, p = (np.asarray(v, float) for v in (u0, u1, p))
    a = np.append(u0, 0.0)
    v = np.append(u1 - u0, 1.0)
    f = lambda t: float(np.linalg.norm(a + t * v - p))
    # the closest parameter is at most |p - a| / |v| away from 0
    reach = 2.0 * (np.linalg.norm(p - a) / np.linalg.norm(v) + 1.0)
    grid = np.linspace(-reach, reach, 2001)
    t0 = grid[np.argmin([f(t) for t in grid])]
    h = grid[1] - grid[0]
    res = minimize_scalar(f, bounds=(t0 - h, t0 + h), method="bounded",
                          options={"xatol": 1e-14})
    return float(res.fun)


def exact_foot_sq_distance(u0, u1, p) -> Fraction:
    """Squared distance to the foot of the perpendicular, in rationals."""
    u0 = [Fraction(x) for x in np.asarray(u0, float).tolist()]
    u1 = [Fraction(x) for x in np.asarray(u1, float).tolist()]
    p = [Fraction(x) for x in np.asarray(p, float).tolist()]
    a = u0 + [Fraction(0)]
    v = [y - x for x, y in zip(u0, u1)] + [Fraction(1)]
    t = sum((pi - ai) * vi for pi, ai, vi in zip(p, a, v)) / sum(vi * vi for vi in v)
    foot = [ai + t * vi for ai, vi in zip(a, v)]
    return sum((pi - qi) ** 2 for pi, qi in zip(p, foot))


def exact_is_transversal(centers, radii, u0, u1) -> bool:
    return all(
        exact_foot_sq_distance(u0, u1, c) <= Fraction(float(r)) ** 2
        for c, r in zip(np.asarray(centers, float), np.asarray(radii, float))
    )


# ---------------------------------------------------------- planar logic

def frac_vec(v):
    return tuple(Fraction(x) for x in v)


def positively_spans_cramer(a, b, c) -> bool:
    """Three plane vectors positively span iff one is a strictly negative
    combination of the other two, which are independent."""
    a, b, c = frac_vec(a), frac_vec(b), frac_vec(c)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        det = x[0] * y[1] - x[1] * y[0]
        if det == 0:
            continue
        # solve alpha x + beta y = -z
        alpha = (-z[0] * y[1] + z[1] * y[0]) / det
        beta = (-x[0] * z[1] + x[1] * z[0]) / det
        return alpha > 0 and beta > 0
    return False


def order_respecting_exact(normals, p0, u) -> bool:
    """True when the directed line p0 + t u avoids the origin, meets every
    closed halfplane <n, x> <= 0 and never leaves a later halfplane before
    entering an earlier one."""
    ns = [frac_vec(n) for n in normals]
    p0, u = frac_vec(p0), frac_vec(u)
    if p0[0] * u[1] - p0[1] * u[0] == 0:
        return False  # the line passes through the origin
    enter, leave = [], []
    for n in ns:
        nu = n[0] * u[0] + n[1] * u[1]
        npt = n[0] * p0[0] + n[1] * p0[1]
        if nu == 0:
            if npt > 0:
                return False
            enter.append(None)
            leave.append(None)
            continue
        t = -npt / nu
        enter.append(t if nu < 0 else None)
        leave.append(t if nu > 0 else None)
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            if enter[i] is not None and leave[j] is not None and leave[j] < enter[i]:
                return False
    return True


def sampled_counterexample(normals, trials: int, rng, chunk: int = 25_000):
    """Float screening of random lines, confirmed exactly; pairwise test."""
    N = np.asarray([[float(x) for x in n] for n in normals])
    k = len(N)
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        rad = np.sqrt(rng.uniform(0.01, 100.0, m))
        ang = rng.uniform(0, 2 * np.pi, m)
        th = rng.uniform(0, 2 * np.pi, m)
        p0 = np.stack([rad * np.cos(ang), rad * np.sin(ang)], 1)
        u = np.stack([np.cos(th), np.sin(th)], 1)
        nu = u @ N.T
        npt = p0 @ N.T
        ok = ~np.any((nu == 0) & (npt > 0), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -npt / nu
        for i in range(k):
            for j in range(i + 1, k):
                bad = (nu[:, i] < 0) & (nu[:, j] > 0) & (t[:, j] < t[:, i])
                ok &= ~bad
        for h in np.flatnonzero(ok):
            if order_respecting_exact(normals, p0[h], u[h]):
                return p0[h], u[h]
        done += m
    return None


def counterexample_along(normals, u, trials: int, rng):
    """Lines with direction u at random signed offsets from the origin."""
    u = np.asarray([float(x) for x in u])
    w = np.array([-u[1], u[0]])
    for _ in range(trials):
        s = rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 10.0)
        p0 = s * w + rng.uniform(-10, 10) * u
        if order_respecting_exact(normals, p0, u):
            return p0, u
    return None


def dense_arc_cover(arcs_deg, samples: int = 72_000) -> float:
    """Fraction of sampled directions lying inside some open arc (start, end)
    taken counterclockwise."""
    th = (np.arange(samples) + 0.5) * 360.0 / samples
    covered = np.zeros(samples, bool)
    for s, e in arcs_deg:
        width = (e - s) % 360.0
        covered |= ((th - s) % 360.0 > 0) & ((th - s) % 360.0 < width)
    return float(covered.mean())


def sigma5_from_increasing(angles):
    """A pattern with the five-halfplane order built from five increasing
    angles in [0, 180): they carry n1, -n3, n5, n2, -n4 in that order."""
    a1, a2, a3, a4, a5 = angles
    return [a1, a4, a2 + 180.0, a5 + 180.0, a3]


def unit_deg(a):
    r = math.radians(a)
    return (math.cos(r), math.sin(r))


# ------------------------------------------------------------ line space

def phi_vectors(lams, normals) -> np.ndarray:
    out = []
    for lam, n in zip(lams, normals):
        n = np.asarray(n, float) / np.linalg.norm(n)
        out.append(np.concatenate([(1 - lam) * n, lam * n]))
    return np.array(out)


def hull_distance(phis) -> float:
    """Distance from the origin to the convex hull of the unit rows, via a
    heavily weighted bounded least-squares fit of the simplex constraint.

    BVLS rather than ``nnls``: scipy 1.15's ``nnls`` can stop at a wrong
    point while reporting a zero residual.
    """
    A = np.asarray(phis, float)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    w = 1e4
    M = np.vstack([A.T, w * np.ones((1, len(A)))])
    rhs = np.append(np.zeros(A.shape[1]), w)
    c = lsq_linear(M, rhs, bounds=(0.0, np.inf), method="bvls", tol=1e-14).x
    c = c / c.sum()
    return float(np.linalg.norm(c @ A))


def pivoted_rank(M, rel: float = 1e-9) -> int:
    M = np.asarray(M, float)
    if M.size == 0:
        return 0
    _, R, _ = qr(M.T, pivoting=True, mode="economic")
    diag = np.abs(np.diag(R))
    return int(np.sum(diag > rel * diag[0])) if diag[0] > 0 else 0


def line_deficits(centers, radii, X) -> np.ndarray:
    """max_i (dist - r_i) for many chart points, from the squared-distance
    identity |w|^2 - (w.v)^2 / |v|^2 instead of an explicit projection."""
    C = np.asarray(centers, float)
    X = np.atleast_2d(np.asarray(X, float))
    k = C.shape[1] - 1
    a = np.concatenate([X[:, :k], np.zeros((len(X), 1))], axis=1)
    v = np.concatenate([X[:, k:] - X[:, :k], np.ones((len(X), 1))], axis=1)
    w = C[None, :, :] - a[:, None, :]
    wv = np.einsum("nid,nd->ni", w, v)
    sq = (w ** 2).sum(axis=2) - wv ** 2 / (v ** 2).sum(axis=1)[:, None]
    return (np.sqrt(np.maximum(sq, 0.0)) - np.asarray(radii, float)[None, :]).max(axis=1)
