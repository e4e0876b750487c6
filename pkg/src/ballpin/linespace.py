"""Screens, their halfspaces in line space, and strict-transversal tests.

A screen ``(lam, n)`` is the half-hyperplane ``{(x, lam) : <n, x> <= 0}``.
A line with chart ``(u0, u1)`` meets it iff ``<phi(lam, n), (u0, u1)> <= 0``
where ``phi(lam, n) = ((1 - lam) n, lam n)``.  A family has a strict
transversal iff the open halfspaces ``<phi_i, x> < 0`` share a point, and by
Gordan's alternative otherwise some convex combination of the ``phi_i``
vanishes.  Both outcomes are returned with a certificate that can be checked
without the solver.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .errors import GivesUp, ToleranceAmbiguous
from .geometry import TAU, LineChart, as_vector

log = logging.getLogger(__name__)

STRICT = "STRICT_TRANSVERSAL"
NO_STRICT = "NO_STRICT_TRANSVERSAL"

_HIGHS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True, eq=False)
class Screen:
    lam: float
    n: np.ndarray

    def __post_init__(self):
        n = as_vector(self.n, name="screen normal")
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise ValueError("screen normal must be nonzero")
        object.__setattr__(self, "n", n / norm)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def d(self) -> int:
        return len(self.n) + 1

    def to_json(self) -> dict:
        return {"lambda": self.lam, "n": self.n.tolist()}


@dataclass(frozen=True, eq=False)
class ScreenFamily:
    screens: tuple
    d: int

    def __post_init__(self):
        screens = tuple(self.screens)
        if self.d < 2:
            raise ValueError("dimension must be at least 2")
        for s in screens:
            if s.d != self.d:
                raise ValueError(f"screen of dimension {s.d} in a family of dimension {self.d}")
        object.__setattr__(self, "screens", screens)

    def __len__(self):
        return len(self.screens)

    def __iter__(self):
        return iter(self.screens)

    def subfamily(self, idx: Sequence[int]) -> "ScreenFamily":
        return ScreenFamily(tuple(self.screens[i] for i in idx), self.d)

    def phis(self) -> np.ndarray:
        return np.array([phi(s) for s in self.screens]).reshape(len(self), 2 * self.d - 2)

    def to_json(self) -> dict:
        return {"d": self.d, "screens": [s.to_json() for s in self.screens]}

    @classmethod
    def from_json(cls, doc: dict) -> "ScreenFamily":
        d = int(doc["d"])
        return cls(tuple(Screen(s["lambda"], s["n"]) for s in doc["screens"]), d)


def phi(s: Screen) -> np.ndarray:
    return np.concatenate([(1.0 - s.lam) * s.n, s.lam * s.n])


def line_meets_screen(g: LineChart, s: Screen, tol: float = TAU) -> str:
    """``"MISS"``, ``"BOUNDARY"`` or ``"INTERIOR"`` by the sign of ``<phi(s), g>``."""
    if g.d != s.d:
        raise ValueError("line and screen live in different dimensions")
    trace = (1.0 - s.lam) * g.u0 + s.lam * g.u1
    value = float(s.n @ trace)
    if abs(value) <= tol * max(1.0, float(np.abs(trace).max(initial=0.0))):
        return "BOUNDARY"
    return "MISS" if value > 0 else "INTERIOR"


@dataclass
class FeasibilityVerdict:
    status: str
    witness: Optional[np.ndarray] = None       # chart point, strict branch
    slack: Optional[float] = None              # -max <phi_i/|phi_i|, x>, |x|_inf <= 1
    certificate: Optional[np.ndarray] = None   # convex weights on the phi_i
    residual: Optional[float] = None           # |sum c_i phi_i|_2

    @property
    def strict(self) -> bool:
        return self.status == STRICT

    def line(self) -> LineChart:
        return LineChart.from_vector(self.witness)

    def to_json(self) -> dict:
        if self.strict:
            return {"status": STRICT, "witness": self.witness.tolist(), "slack": self.slack}
        return {"status": NO_STRICT, "certificate": self.certificate.tolist(),
                "residual": self.residual}

    @classmethod
    def from_json(cls, doc: dict) -> "FeasibilityVerdict":
        if doc["status"] == STRICT:
            return cls(STRICT, witness=np.asarray(doc["witness"], float), slack=doc.get("slack"))
        return cls(NO_STRICT, certificate=np.asarray(doc["certificate"], float),
                   residual=doc.get("residual"))


def _unit_rows(P: np.ndarray) -> np.ndarray:
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def witness_slack(phis: np.ndarray, x: np.ndarray) -> float:
    """Strictness of ``x`` as a common point of the open halfspaces."""
    x = np.asarray(x, float)
    scale = np.abs(x).max()
    if scale == 0.0:
        return 0.0
    return float(-(_unit_rows(phis) @ (x / scale)).max())


def combination_residual(phis: np.ndarray, weights: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(weights) @ phis))


def max_slack(phis: np.ndarray):
    """Maximise ``s`` subject to ``<phi_i, x> + s <= 0``, ``|x|_inf <= 1``."""
    A = _unit_rows(phis)
    m, k = A.shape
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m),
                  bounds=[(-1.0, 1.0)] * k + [(None, 1.0)],
                  method="highs", options=_HIGHS)
    if res.status != 0:
        raise RuntimeError(f"slack LP failed: {res.message}")
    x = res.x[:k]
    return witness_slack(phis, x), x


def min_combination(phis: np.ndarray):
    """Convex weights making ``sum w_i phi_i`` as small as possible.

    An LP picks the support, then a nonnegative least-squares solve on that
    support removes the LP's feasibility-tolerance noise.
    """
    A = _unit_rows(phis)
    m, k = A.shape
    # variables: weights (m), t; minimise t with -t <= (A^T w)_j <= t
    c = np.zeros(m + 1)
    c[-1] = 1.0
    A_ub = np.vstack([
        np.hstack([A.T, -np.ones((k, 1))]),
        np.hstack([-A.T, -np.ones((k, 1))]),
    ])
    A_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(2 * k), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0.0, None)] * m + [(0.0, None)],
                  method="highs", options=_HIGHS)
    if res.status != 0:
        raise RuntimeError(f"certificate LP failed: {res.message}")
    candidates = [np.clip(res.x[:m], 0.0, None)]
    support = np.flatnonzero(candidates[0] > 1e-12 * candidates[0].max())
    weight = np.linalg.norm(A, axis=1).max()
    M = np.vstack([A[support].T, weight * np.ones((1, len(support)))])
    rhs = np.append(np.zeros(k), weight)
    mu, _ = nnls(M, rhs)
    if mu.sum() > 0:
        polished = np.zeros(m)
        polished[support] = mu
        candidates.append(polished)
    best, best_res = None, np.inf
    for w in candidates:
        # back from unit rows to the raw phi vectors, then onto the simplex
        raw = w / np.linalg.norm(phis, axis=1)
        if raw.sum() <= 0:
            continue
        raw = raw / raw.sum()
        r = combination_residual(phis, raw)
        if r < best_res:
            best, best_res = raw, r
    return best, best_res


def strict_transversal(F: ScreenFamily, tol: float = TAU) -> FeasibilityVerdict:
    if len(F) == 0:
        raise ValueError("family must be nonempty")
    phis = F.phis()
    slack, x = max_slack(phis)
    if slack > tol:
        return FeasibilityVerdict(STRICT, witness=x, slack=slack)
    weights, residual = min_combination(phis)
    if weights is not None and residual <= tol:
        return FeasibilityVerdict(NO_STRICT, certificate=weights, residual=residual)
    raise ToleranceAmbiguous(
        f"slack {slack:.3e} and certificate residual {residual:.3e} both within "
        f"the ambiguous band for tolerance {tol:g}"
    )


def check_verdict(F: ScreenFamily, verdict: FeasibilityVerdict, tol: float = TAU) -> bool:
    """Re-validate a verdict from its certificate alone."""
    phis = F.phis()
    if verdict.strict:
        return witness_slack(phis, verdict.witness) > tol
    w = np.asarray(verdict.certificate, float)
    return (
        w.shape == (len(F),)
        and bool(np.all(w >= 0))
        and abs(w.sum() - 1.0) <= tol
        and combination_residual(phis, w) <= tol
    )


def numeric_rank(vectors: np.ndarray, tol: float = TAU) -> int:
    if len(vectors) == 0:
        return 0
    sv = np.linalg.svd(np.asarray(vectors, float), compute_uv=False)
    return int(np.sum(sv > tol * sv[0]))


def spanning_margin(phis: np.ndarray) -> float:
    """How robustly the rows positively span their ambient space.

    Product of the smallest weight of the most balanced positive dependency
    among the unit rows and their smallest singular value; positive exactly
    when the rows positively span.
    """
    A = _unit_rows(np.asarray(phis, float))
    m, k = A.shape
    if m <= k:
        return 0.0
    sigma = float(np.linalg.svd(A, compute_uv=False)[k - 1])
    # variables: weights (m), t; maximise t with weights >= t on the simplex
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.vstack([np.hstack([A.T, np.zeros((k, 1))]),
                      np.append(np.ones(m), 0.0)])
    b_eq = np.append(np.zeros(k), 1.0)
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * (m + 1), method="highs", options=_HIGHS)
    if res.status != 0:
        return -np.inf
    return float(res.x[-1]) * sigma


def simplex_margins(stack: np.ndarray) -> np.ndarray:
    """``spanning_margin`` for a batch of ``k + 1`` vectors in R^k each.

    With exactly one more vector than dimensions the dependency is unique,
    so it comes from the SVD and no LP is needed.
    """
    A = _unit_rows(np.asarray(stack, float).reshape(-1, stack.shape[-1])).reshape(stack.shape)
    k = A.shape[-1]
    _, sv, vt = np.linalg.svd(np.swapaxes(A, 1, 2))
    c = vt[:, -1, :]
    total = c.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lo = np.where(np.abs(total) > 0, (c / total[:, None]).min(axis=1), -np.inf)
    return lo * sv[:, k - 1]


def dependent_normals(F: ScreenFamily, tol: float = TAU):
    """``(dependent, rank)`` for the phi vectors of a family of <= 2d-2 screens."""
    if len(F) > 2 * F.d - 2:
        raise ValueError(f"at most 2d-2 = {2 * F.d - 2} screens allowed, got {len(F)}")
    rank = numeric_rank(F.phis(), tol)
    return rank < len(F), rank


def in_bad_set(F: ScreenFamily, tol: float = TAU) -> bool:
    """Does some subfamily of at most 2d-2 screens lack a strict transversal?

    Having no strict transversal is inherited by supersets, so only the
    subfamilies of the largest admissible size need solving.
    """
    size = min(len(F), 2 * F.d - 2)
    for idx in itertools.combinations(range(len(F)), size):
        if not strict_transversal(F.subfamily(idx), tol).strict:
            return True
    return False


def _perturb_screen(s: Screen, eps: float, rng: np.random.Generator) -> Screen:
    lam = s.lam + eps * rng.choice([-1.0, 1.0])
    if len(s.n) == 1:
        return Screen(lam, s.n)
    tangent = rng.standard_normal(len(s.n))
    tangent -= (tangent @ s.n) * s.n
    tangent /= np.linalg.norm(tangent)
    return Screen(lam, np.cos(eps) * s.n + np.sin(eps) * tangent)


def _conditioning(phis: list, cand: np.ndarray, cap: int) -> float:
    """Worst relative smallest singular value over ``cand`` joined with
    every largest admissible subset of ``phis``."""
    size = min(len(phis), cap - 1)
    if size == 0:
        return 1.0
    combos = np.array(list(itertools.combinations(range(len(phis)), size)))
    P = np.asarray(phis)
    blocks = np.concatenate(
        [P[combos], np.broadcast_to(cand, (len(combos), 1, len(cand)))], axis=1
    )
    sv = np.linalg.svd(blocks, compute_uv=False)
    return float((sv[:, -1] / sv[:, 0]).min())


def genericize(F: ScreenFamily, eps: float = 1e-6, seed: int = 0,
               tol: float = TAU, max_tries: int = 200, batch: int = 16) -> ScreenFamily:
    """Move screens by at most ``eps`` so every <= 2d-2 subset of phi vectors is independent.

    Screens are fixed one at a time.  A screen that already fits is kept as
    is, so a generic family comes back unchanged; otherwise the best
    conditioned of a batch of resamples on the ``eps``-sphere around it is
    taken, which leaves room for the screens that follow.  Moved screens aim
    for a relative smallest singular value of ``eps / 100``; when a screen's
    own moves are nearly tangent to the dependency it should break, the
    whole family is resampled jointly instead.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    rng = np.random.default_rng(seed)
    cap = 2 * F.d - 2
    target = max(tol, 1e-2 * eps)
    out, phis = [], []
    for i, s in enumerate(F.screens):
        chosen = s if _conditioning(phis, phi(s), cap) > tol else None
        tries = 0
        while chosen is None and tries < max_tries:
            cands = [_perturb_screen(s, eps, rng) for _ in range(batch)]
            scores = [_conditioning(phis, phi(c), cap) for c in cands]
            best = int(np.argmax(scores))
            if scores[best] > target:
                chosen = cands[best]
            tries += batch
        if chosen is None:
            log.info("screen %d stayed ill-conditioned; resampling the whole family", i)
            return _genericize_jointly(F, eps, rng, tol, target, max_tries)
        out.append(chosen)
        phis.append(phi(chosen))
    return ScreenFamily(tuple(out), F.d)


def _genericize_jointly(F: ScreenFamily, eps: float, rng: np.random.Generator,
                        tol: float, target: float, max_tries: int) -> ScreenFamily:
    cap = 2 * F.d - 2
    combos = np.array(list(itertools.combinations(range(len(F)), min(len(F), cap))))
    best, best_score = None, -1.0
    for _ in range(max_tries):
        cand = [_perturb_screen(s, eps, rng) for s in F.screens]
        P = np.array([phi(c) for c in cand])
        sv = np.linalg.svd(P[combos], compute_uv=False)
        score = float((sv[:, -1] / sv[:, 0]).min())
        if score > best_score:
            best, best_score = cand, score
        if score > target:
            break
    if best_score <= tol:
        raise GivesUp(f"no perturbation within {eps:g} made the family generic "
                      f"after {max_tries} joint resamples")
    return ScreenFamily(tuple(best), F.d)


def random_unit(k: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(k)
    return v / np.linalg.norm(v)


def random_family(d: int, k: int, rng: np.random.Generator, spread: float = 2.0) -> ScreenFamily:
    return ScreenFamily(
        tuple(Screen(rng.uniform(-spread, spread), random_unit(d - 1, rng)) for _ in range(k)), d
    )


def planted_family(heights: Sequence[float], d: int, rng: np.random.Generator) -> ScreenFamily:
    """Screens at the given distinct heights whose phi vectors have a
    strictly positive vanishing combination.

    The normals of all but the first two screens are random; the first two
    are solved for so that the planted combination cancels.
    """
    lam = np.asarray(heights, float)
    k = len(lam)
    if k < 3:
        raise ValueError("planting needs at least three screens")
    while True:
        normals = [random_unit(d - 1, rng) for _ in range(k)]
        c = rng.uniform(0.5, 2.0, size=k)
        A = sum(c[i] * (1 - lam[i]) * normals[i] for i in range(2, k))
        B = sum(c[i] * lam[i] * normals[i] for i in range(2, k))
        # (1-l0) m0 + (1-l1) m1 = -A ;  l0 m0 + l1 m1 = -B
        M = np.array([[1 - lam[0], 1 - lam[1]], [lam[0], lam[1]]])
        sol = np.linalg.solve(M, -np.vstack([A, B]))
        m0, m1 = sol[0], sol[1]
        if min(np.linalg.norm(m0), np.linalg.norm(m1)) > 1e-3:
            normals[0], normals[1] = m0, m1
            return ScreenFamily(tuple(Screen(l, n) for l, n in zip(lam, normals)), d)
