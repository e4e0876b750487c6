"""Pinning verification, transversal search, extraction and construction.

Verification returns a :class:`PinCertificate` whose level says how strong
the evidence is:

``PATTERN``      d = 3 and the projection is a pinning pattern (a proof).
``FIRST_ORDER``  the screens have no strict transversal (necessary only).
``EMPIRICAL``    no sampled line near the axis is a transversal (evidence).
``NOT_PINNED``   an explicit transversal other than the axis (a refutation).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtri
from scipy.stats import qmc

from .balls import (
    BallConfig,
    lift_pattern,
    project_to_pattern,
    realize_screens,
    require_valid,
    screens_of,
    shrink_radii,
    validate,
)
from .errors import (
    DisjointnessFailure,
    ExtractionFailed,
    GapTooSmall,
    GivesUp,
    InvalidConfig,
    PinningError,
    ToleranceAmbiguous,
)
from .geometry import TAU, Flat3, LineChart, exact_sq_distance
from .linespace import (
    NO_STRICT,
    FeasibilityVerdict,
    ScreenFamily,
    check_verdict,
    genericize,
    simplex_margins,
    spanning_margin,
    strict_transversal,
)
from .pattern2d import (
    HalfplanePattern,
    PatternVerdict,
    arcs_cover,
    is_pinning_pattern,
    lines_with_direction,
    order_violation,
    sigma5,
    triple_arc,
)

log = logging.getLogger(__name__)

PATTERN = "PATTERN"
FIRST_ORDER = "FIRST_ORDER"
EMPIRICAL = "EMPIRICAL"
NOT_PINNED = "NOT_PINNED"

DEFAULT_RHO = (1e-3, 1e-4, 1e-5)
DEFAULT_SAMPLES = 4096


# ---------------------------------------------------------------- deficits

def clearance_deficit(C: BallConfig, g: LineChart) -> float:
    """``max_i dist(g, c_i) - r_i``; at most zero exactly on transversals."""
    return float(deficits(C.centers(), C.radii(), g.vector()[None, :])[0])


def deficits(centers: np.ndarray, radii: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Clearance deficit of many chart points at once (rows of ``X``)."""
    X = np.atleast_2d(X)
    k = centers.shape[1] - 1
    u0, u1 = X[:, :k], X[:, k:]
    v = np.concatenate([u1 - u0, np.ones((len(X), 1))], axis=1)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    base = np.concatenate([u0, np.zeros((len(X), 1))], axis=1)
    w = centers[None, :, :] - base[:, None, :]
    along = np.einsum("nid,nd->ni", w, v)
    perp = w - along[:, :, None] * v[:, None, :]
    return (np.linalg.norm(perp, axis=2) - radii[None, :]).max(axis=1)


def is_transversal_exact(C: BallConfig, g: LineChart) -> bool:
    """Exact rational check that ``g`` meets every closed ball."""
    return all(exact_sq_distance(g, b.center) <= Fraction(b.radius) ** 2 for b in C)


# ------------------------------------------------------------ certificates

@dataclass
class PinCertificate:
    level: str
    first_order: Optional[FeasibilityVerdict] = None
    pattern: Optional[PatternVerdict] = None
    witness: Optional[LineChart] = None
    witness_deficit: Optional[float] = None
    rho_schedule: tuple = ()
    samples: int = 0
    seed: int = 0
    min_deficit: Optional[float] = None
    min_deficit_by_rho: dict = field(default_factory=dict)

    @property
    def pinned(self) -> bool:
        return self.level != NOT_PINNED

    @property
    def conclusive(self) -> bool:
        return self.level in (PATTERN, NOT_PINNED)

    def to_json(self) -> dict:
        doc = {"level": self.level, "conclusive": self.conclusive}
        if self.first_order is not None:
            doc["first_order"] = self.first_order.to_json()
        if self.pattern is not None:
            doc["pattern"] = self.pattern.to_json()
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
            doc["witness_deficit"] = self.witness_deficit
        if self.level == EMPIRICAL or self.samples:
            doc["sampling"] = {
                "rho_schedule": list(self.rho_schedule),
                "samples": self.samples,
                "seed": self.seed,
                "min_deficit": self.min_deficit,
                "min_deficit_by_rho": {repr(k): v for k, v in self.min_deficit_by_rho.items()},
            }
        if self.level == EMPIRICAL:
            doc["note"] = "sampling evidence, not a proof"
        return doc


def sphere_directions(dim: int, n: int, seed: int = 0) -> np.ndarray:
    """Low-discrepancy unit vectors: scrambled Sobol points pushed through the
    normal quantile function, then normalised."""
    sob = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = max(0, math.ceil(math.log2(max(n, 1))))
    pts = sob.random_base2(m)[:n]
    z = ndtri(np.clip(pts, 1e-12, 1 - 1e-12))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _validated(C: BallConfig, x: np.ndarray, tol: float) -> bool:
    return np.linalg.norm(x) > tol and is_transversal_exact(C, LineChart.from_vector(x))


def refine_witness(C: BallConfig, x0: np.ndarray, tol: float = TAU) -> Optional[np.ndarray]:
    """Push a chart point deeper into the transversal region by local descent."""
    centers, radii = C.centers(), C.radii()
    f = lambda x: float(deficits(centers, radii, x[None, :])[0])
    scale = max(np.linalg.norm(x0), 1e-12)
    simplex = np.vstack([x0] + [x0 + 0.5 * scale * e for e in np.eye(len(x0))])
    res = minimize(f, x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": 1e-15, "fatol": 1e-18,
                            "maxiter": 4000})
    best = res.x if res.fun < f(x0) else x0
    return best if f(best) <= 0 and _validated(C, best, tol) else None


def escape_line(C: BallConfig, direction: np.ndarray, tol: float = TAU) -> Optional[np.ndarray]:
    """A transversal other than the axis, found along a strict-transversal ray.

    Walks from a scene-sized step down by halving until the line enters every
    ball, then checks the result exactly.
    """
    centers, radii = C.centers(), C.radii()
    u = direction / np.linalg.norm(direction)
    t = float(radii.max())
    for _ in range(80):
        x = t * u
        if deficits(centers, radii, x[None, :])[0] < 0:
            if _validated(C, x, tol):
                return x
            refined = refine_witness(C, x, tol)
            if refined is not None:
                return refined
        t *= 0.5
        if t * 1.0 <= tol:
            break
    return None


def verify_pin(C: BallConfig, rho_schedule: Sequence[float] = DEFAULT_RHO,
               samples: int = DEFAULT_SAMPLES, seed: int = 0,
               tol: float = TAU) -> PinCertificate:
    require_valid(C, tol)
    F = screens_of(C, tol)
    try:
        fo = strict_transversal(F, tol)
    except ToleranceAmbiguous as exc:
        log.info("first-order test ambiguous: %s", exc)
        fo = None

    if fo is not None and fo.strict:
        x = escape_line(C, fo.witness, tol)
        if x is not None:
            g = LineChart.from_vector(x)
            return PinCertificate(NOT_PINNED, first_order=fo, witness=g,
                                  witness_deficit=clearance_deficit(C, g), seed=seed)
        log.warning("strict transversal found but no validated escape line")

    if C.d == 3:
        try:
            verdict = is_pinning_pattern(project_to_pattern(C, tol))
        except InvalidConfig:
            verdict = None
        if verdict is not None and verdict.is_pinning:
            return _pattern_certificate(C, fo, verdict, seed)

    if not samples or not rho_schedule:
        if fo is None:
            raise ToleranceAmbiguous("first-order test ambiguous and sampling disabled")
        return PinCertificate(FIRST_ORDER, first_order=fo, seed=seed)

    centers, radii = C.centers(), C.radii()
    dirs = sphere_directions(2 * C.d - 2, samples, seed)
    by_rho = {}
    for rho in rho_schedule:
        vals = deficits(centers, radii, rho * dirs)
        by_rho[float(rho)] = float(vals.min())
        for h in np.flatnonzero(vals <= 0):
            x = refine_witness(C, rho * dirs[h], tol)
            if x is not None:
                g = LineChart.from_vector(x)
                return PinCertificate(NOT_PINNED, first_order=fo, witness=g,
                                      witness_deficit=clearance_deficit(C, g),
                                      rho_schedule=tuple(rho_schedule), samples=samples,
                                      seed=seed, min_deficit_by_rho=by_rho)
        if vals.min() <= 0:
            raise ToleranceAmbiguous(f"sample at rho={rho} touches every ball but "
                                     "does not validate exactly")
    return PinCertificate(EMPIRICAL, first_order=fo, rho_schedule=tuple(rho_schedule),
                          samples=samples, seed=seed, min_deficit=min(by_rho.values()),
                          min_deficit_by_rho=by_rho)


def _pattern_certificate(C, fo, verdict, seed) -> PinCertificate:
    if fo is not None and fo.strict:
        # cannot happen for a genuine pinning; surfaced rather than hidden
        raise PinningError("pattern pins but the screens have a strict transversal")
    return PinCertificate(PATTERN, first_order=fo, pattern=verdict, seed=seed)


def recheck_certificate(C: BallConfig, doc: dict, tol: float = TAU) -> bool:
    """Re-validate a serialized certificate from the scene alone (no LP solver)."""
    level = doc["level"]
    if level == NOT_PINNED:
        g = LineChart.from_json(doc["witness"])
        return np.linalg.norm(g.vector()) > tol and is_transversal_exact(C, g)
    F = screens_of(C, tol)
    fo_ok = "first_order" in doc and check_verdict(
        F, FeasibilityVerdict.from_json(doc["first_order"]), tol
    ) and doc["first_order"]["status"] == NO_STRICT
    if level == FIRST_ORDER:
        return fo_ok
    if level == PATTERN:
        return fo_ok and recheck_pattern(project_to_pattern(C, tol), doc["pattern"])
    if level == EMPIRICAL:
        s = doc["sampling"]
        dirs = sphere_directions(2 * C.d - 2, s["samples"], s["seed"])
        centers, radii = C.centers(), C.radii()
        return fo_ok and all(
            deficits(centers, radii, rho * dirs).min() > 0 for rho in s["rho_schedule"]
        )
    return False


def recheck_pattern(P: HalfplanePattern, doc: dict) -> bool:
    """Check a pattern verdict using only its listed triples or counterexample."""
    from .pattern2d import PlanarLine

    if not doc["is_pinning"]:
        line = PlanarLine.from_json(doc["counterexample"])
        return order_violation(P, line) is None
    try:
        arcs = [triple_arc(P, *a["triple"]) for a in doc["arcs"]]
    except PinningError:
        return False
    for u, _ in arcs_cover(arcs, P.normals):
        if any(order_violation(P, line) is None for line in lines_with_direction(u)):
            return False
    return True


# --------------------------------------------------------- transversals

def _anchor_heights(C: BallConfig) -> tuple:
    h = C.centers()[:, -1]
    lo, hi = float(h.min()), float(h.max())
    if hi - lo < 1.0:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _anchors_to_chart(Y: np.ndarray, lo: float, hi: float, k: int) -> np.ndarray:
    a, b = Y[:, :k], Y[:, k:]
    slope = (b - a) / (hi - lo)
    u0 = a - lo * slope
    return np.concatenate([u0, u0 + slope], axis=1)


def _chart_to_anchors(x: np.ndarray, lo: float, hi: float, k: int) -> np.ndarray:
    u0, u1 = x[:k], x[k:]
    return np.concatenate([u0 + lo * (u1 - u0), u0 + hi * (u1 - u0)])


def _pattern_search(fun, Y: np.ndarray, step: np.ndarray, rng, iters: int,
                    min_step: float) -> tuple:
    """Batched randomised pattern search; every row is an independent start."""
    M, D = Y.shape
    vals = fun(Y)
    for _ in range(iters):
        active = step > min_step
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Q, _ = np.linalg.qr(rng.standard_normal((len(idx), D, D)))
        dirs = np.concatenate([Q, -Q], axis=2).transpose(0, 2, 1)  # (a, 2D, D)
        trial = Y[idx, None, :] + step[idx, None, None] * dirs
        tv = fun(trial.reshape(-1, D)).reshape(len(idx), 2 * D)
        best = tv.argmin(axis=1)
        bv = tv[np.arange(len(idx)), best]
        better = bv < vals[idx]
        moved = idx[better]
        Y[moved] = trial[better, best[better]]
        vals[moved] = bv[better]
        step[moved] *= 2.0
        step[idx[~better]] *= 0.5
    return Y, vals


def find_transversal(C: BallConfig, starts: int = 1000, seed: int = 0,
                     near: Optional[LineChart] = None, spread: Optional[float] = None,
                     iters: int = 300, hints: Sequence[LineChart] = (),
                     tol: float = TAU) -> Optional[LineChart]:
    """Multistart derivative-free minimisation of the clearance deficit.

    Lines are parametrised by where they cross the lowest and highest center
    heights, which keeps the search well scaled.  ``hints`` are extra starts
    placed after the random ones.  Returns the lowest-indexed start reaching
    ``f <= -tol/2`` (else ``f <= 0``), or None.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    rng = np.random.default_rng(seed)
    centers, radii = C.centers(), C.radii()
    k = C.d - 1
    lo, hi = _anchor_heights(C)
    R = float(np.linalg.norm(centers[:, :-1], axis=1).max() + radii.max())
    D = 2 * k
    # scales log-uniform over four decades so starts hug the axis as well as roam
    scales = R * 10.0 ** rng.uniform(-4.0, 0.0, size=starts)
    if near is not None:
        y0 = _chart_to_anchors(near.vector(), lo, hi, k)
        s = scales if spread is None else np.full(starts, spread)
        Y = y0 + s[:, None] * rng.standard_normal((starts, D)) / np.sqrt(D)
    else:
        half = starts // 2
        Y = np.empty((starts, D))
        Y[:half] = scales[:half, None] * rng.standard_normal((half, D)) / np.sqrt(D)
        g = rng.standard_normal((starts - half, D))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        Y[half:] = 2 * R * g * rng.uniform(0, 1, size=(starts - half, 1)) ** (1 / D)
        s = scales
    step = 0.5 * np.asarray(s, float).copy()
    if len(hints):
        H = np.array([_chart_to_anchors(h.vector(), lo, hi, k) for h in hints])
        Y = np.vstack([Y, H])
        step = np.append(step, 0.5 * np.maximum(np.abs(H).max(axis=1), 1e-12 * R))
    fun = lambda Z: deficits(centers, radii, _anchors_to_chart(Z, lo, hi, k))
    Y, vals = _pattern_search(fun, Y, step, rng, iters, min_step=1e-13 * R)
    for threshold in (-tol / 2, 0.0):
        for i in np.flatnonzero(vals <= threshold):
            g = LineChart.from_vector(_anchors_to_chart(Y[i:i + 1], lo, hi, k)[0])
            if is_transversal_exact(C, g):
                return g
    # polish the few most promising starts before giving up
    for i in np.argsort(vals)[:5]:
        res = minimize(lambda y: float(fun(y[None, :])[0]), Y[i], method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-16, "maxiter": 4000})
        if res.fun <= 0:
            g = LineChart.from_vector(_anchors_to_chart(res.x[None, :], lo, hi, k)[0])
            if is_transversal_exact(C, g):
                return g
    return None


# -------------------------------------------------------- constructions

@dataclass(frozen=True)
class GrassmannNet:
    flats: tuple
    resolution: int

    def __len__(self):
        return len(self.flats)


def _fibonacci_hemisphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1.0 - i / n
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    rho = np.sqrt(1.0 - z ** 2)
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def grassmann_net(d: int, resolution: int, seed: int = 0) -> GrassmannNet:
    """Finite set of 3-flats through the axis.

    d = 3: the single flat R^3.  d = 4: flats orthogonal to quasi-uniform
    points of the projective plane (one per ``resolution``).  d >= 5:
    seeded random orthonormal frames.
    """
    if d < 3:
        raise ValueError("3-flats through the axis need d >= 3")
    if resolution < 1:
        raise ValueError("resolution must give at least one flat")
    if d == 3:
        return GrassmannNet((Flat3.canonical(3),), resolution)
    flats = []
    if d == 4:
        for m in _fibonacci_hemisphere(resolution):
            # rows 1, 2 of V^T span the orthogonal complement of m
            _, _, vt = np.linalg.svd(m[None, :])
            flats.append(Flat3.from_vectors(vt[1], vt[2]))
    else:
        rng = np.random.default_rng(seed)
        for _ in range(resolution):
            q, _ = np.linalg.qr(rng.standard_normal((d - 1, 2)))
            flats.append(Flat3.from_vectors(q[:, 0], q[:, 1]))
    return GrassmannNet(tuple(flats), resolution)


def construct_stable(d: int, resolution: int = 2, r: float = 1.0, gap: float = 3.0,
                     seed: int = 0, pattern: Optional[HalfplanePattern] = None) -> BallConfig:
    """Union of sigma5 quintuples, one lifted into each flat of a net.

    Quintuple ``j`` starts at height ``j * 6 * gap``, so every pair of balls
    is separated by a hyperplane orthogonal to the axis.
    """
    net = grassmann_net(d, resolution, seed)
    P = sigma5() if pattern is None else pattern
    balls = []
    try:
        for j, T in enumerate(net.flats):
            balls.extend(lift_pattern(P, r, gap, T, offset=j * (len(P) * gap + gap)).balls)
    except GapTooSmall as exc:
        raise DisjointnessFailure(str(exc)) from exc
    C = BallConfig(tuple(balls), d)
    rep = validate(C)
    if not rep.disjoint_ok:
        raise DisjointnessFailure("; ".join(rep.failures()))
    return C


@dataclass
class Extraction:
    config: BallConfig
    indices: list            # positions in the perturbed input family
    certificate: PinCertificate
    perturbed: BallConfig
    audit: list              # (subset indices, PinCertificate) for each (2d-2)-subset
    margin: float = 0.0      # positive-spanning margin of the kept screens

    @property
    def minimal(self) -> bool:
        return all(c.level == NOT_PINNED for _, c in self.audit)


def extract_minimal(C: BallConfig, eps: float = 1e-6, seed: int = 0,
                    rho_schedule: Sequence[float] = DEFAULT_RHO,
                    samples: int = DEFAULT_SAMPLES, attempts: int = 5,
                    eps_escalations: int = 3, exhaustive_limit: int = 50_000,
                    tol: float = TAU) -> Extraction:
    """Perturb to generic screens, then delete balls while the pin survives.

    Each round tries the ``attempts`` deletions whose remaining screens
    positively span most robustly and keeps the first that still pins.  Once
    at most ``exhaustive_limit`` subfamilies of size 2d-1 remain, they are
    ranked directly by the same margin.
    When no generic perturbation of size ``eps`` clears the rank tolerance,
    ``eps`` is raised tenfold, at most ``eps_escalations`` times.
    """
    base = verify_pin(C, rho_schedule, samples, seed, tol)
    if not base.pinned:
        raise ExtractionFailed("input family does not pin the axis")
    target = 2 * C.d - 1
    F = screens_of(C, tol)
    for k in range(eps_escalations + 1):
        try:
            Fp = genericize(F, eps * 10 ** k, seed, tol)
            break
        except GivesUp as exc:
            log.info("genericize failed at eps=%g: %s", eps * 10 ** k, exc)
    else:
        raise ExtractionFailed(f"no generic perturbation up to eps={eps * 10 ** k:g}")
    Cp = realize_screens(Fp, C.radii())
    require_valid(Cp, tol)

    check = lambda idx: verify_pin(Cp.subfamily(idx), rho_schedule, samples, seed, tol)
    if not check(range(len(Cp))).pinned:
        raise ExtractionFailed("the perturbed family no longer pins: the pinning is not stable")
    phis = screens_of(Cp, tol).phis()
    keep = list(range(len(Cp)))
    rejected = []
    while math.comb(len(keep), target) > exhaustive_limit:
        # try the deletions that leave the most robust positive spanning first
        ranked = sorted(keep, key=lambda i: -spanning_margin(phis[[j for j in keep if j != i]]))
        for i in ranked[:attempts]:
            trial = [j for j in keep if j != i]
            cert = check(trial)
            if cert.pinned:
                keep = trial
                break
            rejected.append(f"without ball {i} of {len(keep)}: {cert.level}")
        else:
            raise ExtractionFailed(f"deletion stopped at {len(keep)} balls; "
                                   + "; ".join(rejected[-attempts:]))
    if len(keep) > target:
        combos = np.array(list(itertools.combinations(keep, target)))
        margins = simplex_margins(phis[combos])
        for r in np.argsort(-margins, kind="stable")[:attempts]:
            cert = check(list(combos[r]))
            if cert.pinned:
                keep = [int(i) for i in combos[r]]
                break
            rejected.append(f"subset {combos[r].tolist()}: {cert.level}")
        else:
            raise ExtractionFailed("no well-spanning subfamily of size "
                                   f"{target} pins; " + "; ".join(rejected[-attempts:]))
    cert = check(keep)
    sub = Cp.subfamily(keep)
    audit = [(list(s), verify_pin(sub.subfamily(s), rho_schedule, samples, seed, tol))
             for s in itertools.combinations(range(target), target - 1)]
    return Extraction(sub, keep, cert, Cp, audit, spanning_margin(phis[keep]))


# ----------------------------------------------------------------- demo

def demo_main_theorem(d: int = 3, delta: float = 1e-4, seed: int = 0,
                      resolutions: Sequence[int] = (2, 3, 5, 8, 13),
                      global_starts: int = 10_000, local_starts: int = 2000,
                      eps: float = 1e-6, r: float = 1.0, gap: float = 3.0,
                      rho_schedule: Sequence[float] = DEFAULT_RHO,
                      samples: int = DEFAULT_SAMPLES, tol: float = TAU) -> dict:
    """Build a family with no transversal whose (2d-2)-subfamilies all have one."""
    if d < 3:
        raise ValueError("the construction needs d >= 3")
    if not delta > 0:
        raise ValueError("delta must be positive: at delta = 0 the axis is a transversal")
    report = {"d": d, "delta": delta, "seed": seed, "tol": tol, "attempts": []}
    for res in (resolutions if d > 3 else resolutions[:1]):
        entry = {"resolution": res}
        report["attempts"].append(entry)
        C = construct_stable(d, res, r, gap, seed)
        cert = verify_pin(C, rho_schedule, samples, seed, tol)
        entry.update(balls=len(C), certificate=cert.level)
        if not cert.pinned:
            continue
        try:
            extraction = extract_minimal(C, eps, seed, rho_schedule, samples, tol=tol)
        except ExtractionFailed as exc:
            entry["extraction_error"] = str(exc)
            continue
        body = _demo_body(extraction, delta, seed, global_starts, local_starts, tol)
        entry["subfamilies_witnessed"] = body["all_subfamilies_witnessed"]
        entry["global_found"] = body["global_search"]["found"]
        if body["ok"] or res == resolutions[-1] or d == 3:
            report["construction"] = {"resolution": res, "balls": len(C),
                                      "certificate": cert.to_json()}
            report.update(body)
            return report
    raise ExtractionFailed("no resolution produced a minimal pinning")


def _demo_body(extraction: Extraction, delta: float, seed: int, global_starts: int,
               local_starts: int, tol: float) -> dict:
    M = extraction.config
    d = M.d
    out = {"minimal_pinning": {
        "config": M.to_json(),
        "margin": extraction.margin,
        "certificate": extraction.certificate.to_json(),
        "audit": [{"subset": s, "certificate": c.to_json()} for s, c in extraction.audit],
    }}
    shrunk = shrink_radii(M, delta)
    rep = validate(shrunk)
    out["family"] = shrunk.to_json()
    out["congruent"] = bool(np.ptp(shrunk.radii()) <= tol * shrunk.radii().max())
    out["disjoint"] = rep.disjoint_ok

    # smaller subfamilies inherit transversals, so the largest ones suffice
    subsets = []
    axis = LineChart.axis(d)
    scales = float(M.radii().max()) * np.logspace(-4, 0, 9)
    for j, idx in enumerate(itertools.combinations(range(len(shrunk)), len(shrunk) - 1)):
        sub = shrunk.subfamily(idx)
        hints = []
        try:
            fo = strict_transversal(screens_of(M.subfamily(idx), tol), tol)
            if fo.strict:
                u = fo.witness / np.linalg.norm(fo.witness)
                hints = [LineChart.from_vector(t * u) for t in scales]
        except ToleranceAmbiguous:
            pass
        g = find_transversal(sub, local_starts, seed + j, near=axis, hints=hints, tol=tol)
        subsets.append({
            "subset": list(idx),
            "transversal": None if g is None else g.to_json(),
            "deficit": None if g is None else clearance_deficit(sub, g),
            "verified": g is not None and is_transversal_exact(sub, g),
        })
    out["subfamilies"] = subsets
    out["all_subfamilies_witnessed"] = all(s["verified"] for s in subsets)
    if not out["all_subfamilies_witnessed"]:
        out["global_search"] = {"starts": 0, "found": False, "skipped": True}
        out["ok"] = False
        return out
    g = find_transversal(shrunk, global_starts, seed, tol=tol)
    out["global_search"] = {
        "starts": global_starts,
        "transversal": None if g is None else g.to_json(),
        "found": g is not None,
        "note": "absence of a found transversal is evidence, not proof",
    }
    out["ok"] = out["all_subfamilies_witnessed"] and g is None and rep.disjoint_ok
    return out
