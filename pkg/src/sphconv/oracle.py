"""Search-based ground truth: falsify convexity or corroborate it numerically.

Nothing here proves convexity; sampling cannot discharge a universally
quantified inequality.  The oracle either produces a concrete witness pair
with negative first-order slack (a constructive disproof that is re-checked
independently) or reports "numerically convex", meaning a large admissible
sample plus a derivative-free minimization of the pointwise gap function

    h(x) = min_{u unit, u orthogonal to x} <Au, u> - <Ax, x> - <b, x>/2

found nothing below tolerance.  Convexity on the cap is equivalent to
h >= 0 on the cap, which is why h doubles as a second, pair-free oracle.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import enum

import numpy as np

from .core import (
    Cone,
    ORTHANT,
    ORTHANT_MEMBERSHIP_TOL,
    QuadraticInstance,
    WitnessPair,
    foc_slack,
    foc_slack_batch,
    rotation_pair,
    rotation_slack_min,
    sample_orthogonal_partner,
    sample_orthogonal_partner_batch,
    sample_unit_in_cone,
    sample_unit_in_cone_batch,
)
from .linalg import restricted_lambda_min, restricted_smallest_pair

_BLOCK = 8192


def resolve_workers(workers: int) -> int:
    """0 means auto; honors the SPHCONV_THREADS environment variable."""
    env = os.environ.get("SPHCONV_THREADS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ValueError(f"SPHCONV_THREADS must be an integer, got {env!r}") from None
    if workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    return workers


@dataclass(frozen=True)
class OracleConfig:
    seed: int = 0
    pair_budget: int = 100_000
    multistart_count: int = 32
    tol: float = 1e-9  # scaled by 1 + ||A||_F + ||b|| per instance
    descent_max_iters: int = 500
    run_h_minimization: bool = True
    geodesic_count: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.pair_budget < 0:
            raise ValueError("pair_budget must be >= 0")
        if self.multistart_count < 1 or self.descent_max_iters < 1:
            raise ValueError("multistart_count and descent_max_iters must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")

    def effective_tol(self, inst: QuadraticInstance) -> float:
        return self.tol * inst.scale()


class OracleStatus(str, enum.Enum):
    FALSIFIED = "FalsifiedNonConvex"
    NUMERICALLY_CONVEX = "NumericallyConvex"
    EXHAUSTED = "Exhausted"


@dataclass(frozen=True)
class OracleVerdict:
    status: OracleStatus
    min_slack: float
    min_h: float  # nan when the gap minimization was skipped
    pairs_checked: int
    witness: WitnessPair | None = None
    h_argmin: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "min_slack": self.min_slack,
            "min_h": self.min_h,
            "pairs_checked": self.pairs_checked,
            "witness": self.witness.to_dict() if self.witness else None,
            "h_argmin": self.h_argmin.tolist() if self.h_argmin is not None else None,
        }


# ---------------------------------------------------------------------------
# structured pairs


def structured_pairs(inst: QuadraticInstance, cone: Cone):
    """Deterministic seed pairs: basis pairs, two-coordinate rotations at 45
    degrees, the rotation-scan minimizers, and (for generated cones) the
    generators themselves."""
    n = inst.n
    eye = np.eye(n)
    basis_in = [cone.contains(eye[i]) for i in range(n)]
    root = 1.0 / math.sqrt(2.0)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if basis_in[j]:
                yield eye[i], eye[j]
            if i < j:
                v = root * (eye[i] + eye[j])
                if basis_in[i] and basis_in[j]:
                    yield root * (eye[i] - eye[j]), v
                elif cone.contains(v):
                    yield root * (eye[i] - eye[j]), v
            theta, _ = rotation_slack_min(inst, i, j)
            u, v = rotation_pair(n, i, j, theta)
            if cone.contains(v):
                yield u, v
    if cone.kind != ORTHANT:
        from .linalg import householder_complement_basis

        for g in cone.generators:
            yield householder_complement_basis(g)[:, 0], g


def _falsified(inst, cone, u, v, min_slack, min_h, pairs, h_argmin=None):
    witness = WitnessPair.build(inst, cone, u, v)
    return OracleVerdict(
        status=OracleStatus.FALSIFIED,
        min_slack=min(min_slack, witness.slack),
        min_h=min_h,
        pairs_checked=pairs,
        witness=witness,
        h_argmin=h_argmin,
    )


def bx_slack(inst: QuadraticInstance, x: np.ndarray, v: np.ndarray) -> float:
    """Slack of the single-point bound over x on the cap and any unit v != +/-x.

    Returns
        [<Av,v> - 2<v,x><Av,x> + (2<v,x>^2 - 1)<Ax,x>] / (1 - <v,x>^2) - <b,x>/2.

    Convexity on the cap is equivalent to this being >= 0 for all admissible
    (x, v); at <v,x> = 0 it reduces exactly to ``foc_slack(v, x)``.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    s = float(v @ x)
    if abs(s) >= 1.0 - 1e-12:
        raise ValueError("v must not be parallel to x (denominator vanishes)")
    A = inst.A
    num = float(v @ A @ v) - 2.0 * s * float(v @ A @ x) + (2.0 * s * s - 1.0) * float(x @ A @ x)
    return num / (1.0 - s * s) - 0.5 * float(inst.b @ x)


def _bx_slack_batch(inst, X, V):
    A = inst.A
    s = np.einsum("bi,bi->b", V, X)
    qvv = np.einsum("bi,bi->b", V @ A, V)
    qvx = np.einsum("bi,bi->b", V @ A, X)
    qxx = np.einsum("bi,bi->b", X @ A, X)
    num = qvv - 2.0 * s * qvx + (2.0 * s * s - 1.0) * qxx
    return num / (1.0 - s * s) - 0.5 * (X @ inst.b), s


def falsify(inst: QuadraticInstance, cone: Cone, config: OracleConfig) -> OracleVerdict:
    """Hunt for an admissible pair with negative first-order slack.

    Seeds the search with the structured pairs used by the closed-form
    refutations, then draws ``pair_budget`` random orthogonal pairs plus a
    quarter of that many non-orthogonal pairs checked through the
    single-point bound.  The first slack below tolerance short-circuits.
    When nothing is found the pointwise gap function h is minimized; a
    negative minimum is converted back into a witness pair.
    """
    rng = np.random.default_rng(config.seed)
    tol = config.effective_tol(inst)
    min_slack = math.inf
    pairs = 0
    for u, v in structured_pairs(inst, cone):
        s = foc_slack(inst, u, v)
        pairs += 1
        min_slack = min(min_slack, s)
        if s < -tol:
            return _falsified(inst, cone, u, v, min_slack, math.nan, pairs)
    remaining = config.pair_budget
    while remaining > 0:
        m = min(_BLOCK, remaining)
        remaining -= m
        V = sample_unit_in_cone_batch(cone, rng, m)
        U = sample_orthogonal_partner_batch(V, rng)
        slacks = foc_slack_batch(inst, U, V)
        pairs += m
        k = int(np.argmin(slacks))
        min_slack = min(min_slack, float(slacks[k]))
        if slacks[k] < -tol:
            return _falsified(inst, cone, U[k], V[k], min_slack, math.nan, pairs)
    remaining = config.pair_budget // 4
    while remaining > 0:
        m = min(_BLOCK, remaining)
        remaining -= m
        X = sample_unit_in_cone_batch(cone, rng, m)
        W = rng.standard_normal((m, inst.n))
        W /= np.linalg.norm(W, axis=1)[:, None]
        dots = np.einsum("bi,bi->b", W, X)
        # near-parallel pairs amplify rounding through the 1/(1 - s^2) factor
        keep = np.abs(dots) < 0.99
        X, W = X[keep], W[keep]
        if X.shape[0] == 0:
            continue
        slacks, s = _bx_slack_batch(inst, X, W)
        pairs += X.shape[0]
        k = int(np.argmin(slacks))
        min_slack = min(min_slack, float(slacks[k]))
        if slacks[k] < -tol:
            # convert: the tangential part of v against x is the refuting u;
            # re-check through the unamplified pair slack before concluding
            u = W[k] - s[k] * X[k]
            u /= np.linalg.norm(u)
            if foc_slack(inst, u, X[k]) < -tol:
                return _falsified(inst, cone, u, X[k], min_slack, math.nan, pairs)
    min_h, h_argmin = math.nan, None
    if config.run_h_minimization:
        min_h, h_argmin = minimize_h(inst, cone, config)
        if min_h < -tol:
            _, u = restricted_smallest_pair(inst.A, h_argmin)
            verdict = _falsified(inst, cone, u, h_argmin, min_slack, min_h, pairs, h_argmin)
            if verdict.witness.slack < -tol:
                return verdict
        status = (
            OracleStatus.NUMERICALLY_CONVEX
            if min_slack >= -tol and min_h >= -tol
            else OracleStatus.EXHAUSTED
        )
    else:
        status = OracleStatus.EXHAUSTED
    return OracleVerdict(
        status=status,
        min_slack=min_slack,
        min_h=min_h,
        pairs_checked=pairs,
        h_argmin=h_argmin,
    )


# ---------------------------------------------------------------------------
# the pointwise gap function h


def pointwise_h(inst: QuadraticInstance, cone: Cone, x: np.ndarray) -> float:
    """h(x) = (min over unit u orthogonal to x of <Au,u>) - <Ax,x> - <b,x>/2.

    Convexity on the cap is equivalent to h >= 0 over the cap.  The
    restricted eigenvalue is computed through the complement-basis route,
    which is valid for every symmetric A.
    """
    x = np.asarray(x, dtype=float)
    if __debug__:
        assert abs(np.linalg.norm(x) - 1.0) < 1e-9
        assert cone.contains(x)
    lam = restricted_lambda_min(inst.A, x)
    return lam - float(x @ inst.A @ x) - 0.5 * float(inst.b @ x)


def _pattern_search(fun, w0: np.ndarray, budget: int, step0: float = 0.3) -> tuple[float, np.ndarray]:
    """Coordinate pattern search; returns the best value and point evaluated."""
    w = w0.copy()
    f = fun(w)
    evals = 1
    step = step0
    while evals < budget and step > 1e-7:
        improved = False
        for i in range(w.size):
            if evals >= budget:
                break
            for sgn in (1.0, -1.0):
                cand = w.copy()
                cand[i] += sgn * step
                fc = fun(cand)
                evals += 1
                if fc < f - 1e-15:
                    w, f = cand, fc
                    improved = True
                    break
                if evals >= budget:
                    break
        if not improved:
            step *= 0.5
    return f, w


def _h_starts(inst: QuadraticInstance, cone: Cone, config: OracleConfig, rng) -> list[np.ndarray]:
    starts = [sample_unit_in_cone(cone, rng) for _ in range(config.multistart_count)]
    starts += [np.eye(inst.n)[i] for i in range(inst.n)]
    starts.append(np.full(inst.n, 1.0 / math.sqrt(inst.n)))
    return starts


def minimize_h(inst: QuadraticInstance, cone: Cone, config: OracleConfig) -> tuple[float, np.ndarray]:
    """Multistart derivative-free minimization of h over the cap.

    On the orthant the point is parameterized as x = w^2 / ||w^2||
    (elementwise square), which covers the cap boundary included with no
    inequality constraints; pattern search is used because the eigenvalue
    term is only piecewise smooth at crossings.  Generated cones fall back
    to the sampled minimum of h.
    """
    rng = np.random.default_rng(config.seed)
    if cone.kind != ORTHANT:
        pts = [sample_unit_in_cone(cone, rng) for _ in range(config.multistart_count * 32)]
        pts += [g for g in cone.generators]
        vals = [pointwise_h(inst, cone, p) for p in pts]
        k = int(np.argmin(vals))
        return float(vals[k]), pts[k]

    def chart(w):
        p = w * w
        nrm = float(np.linalg.norm(p))
        if nrm < 1e-150:
            return math.inf
        return pointwise_h(inst, cone, p / nrm)

    starts = _h_starts(inst, cone, config, rng)

    def solve_one(x0):
        f, w = _pattern_search(chart, np.sqrt(x0), config.descent_max_iters)
        p = w * w
        return f, p / np.linalg.norm(p)

    workers = resolve_workers(config.workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_one, starts))
    else:
        results = [solve_one(x0) for x0 in starts]
    best_val, best_x = min(results, key=lambda r: r[0])
    return float(best_val), best_x


# ---------------------------------------------------------------------------
# geodesics


def geodesic_second_derivative(inst: QuadraticInstance, x: np.ndarray, v: np.ndarray, t) -> np.ndarray | float:
    """(f o gamma)''(t) for the arc gamma(t) = cos(t) x + sin(t) v, <x,v> = 0.

    Closed form:
        -2 cos(2t) (<Ax,x> - <Av,v>) - 4 sin(2t) <Ax,v> - cos(t) <b,x> - sin(t) <b,v>.
    At t = 0 this equals 2 * foc_slack(u=v, v=x).
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if __debug__:
        assert abs(float(x @ v)) < 1e-9
        assert abs(np.linalg.norm(x) - 1.0) < 1e-9 and abs(np.linalg.norm(v) - 1.0) < 1e-9
    t = np.asarray(t, dtype=float)
    A, b = inst.A, inst.b
    qxx, qvv, qxv = float(x @ A @ x), float(v @ A @ v), float(x @ A @ v)
    out = (
        -2.0 * np.cos(2 * t) * (qxx - qvv)
        - 4.0 * np.sin(2 * t) * qxv
        - np.cos(t) * float(b @ x)
        - np.sin(t) * float(b @ v)
    )
    return float(out) if out.ndim == 0 else out


def _clip_to_cone(x: np.ndarray, v: np.ndarray, grid: int = 65) -> float:
    """Largest t in [0, pi/2] with cos(s)x + sin(s)v in the orthant for s <= t."""
    ts = np.linspace(0.0, math.pi / 2.0, grid)
    pts = np.cos(ts)[:, None] * x + np.sin(ts)[:, None] * v
    inside = np.all(pts >= -ORTHANT_MEMBERSHIP_TOL, axis=1)
    if inside.all():
        return math.pi / 2.0
    k = int(np.argmin(inside))  # first exit index
    if k == 0:
        return 0.0
    lo, hi = ts[k - 1], ts[k]
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        p = math.cos(mid) * x + math.sin(mid) * v
        if np.all(p >= -ORTHANT_MEMBERSHIP_TOL):
            lo = mid
        else:
            hi = mid
    return lo


def geodesic_scan(inst: QuadraticInstance, cone: Cone, config: OracleConfig) -> OracleVerdict:
    """Check (f o gamma)'' >= -tol on a grid along random in-cone geodesics.

    Arcs start at a sampled cap point and run in a random tangent direction,
    with the parameter range clipped so the arc stays inside the cone.  A
    violation at parameter t yields the witness pair (gamma'(t), gamma(t)).
    """
    if cone.kind != ORTHANT:
        raise ValueError("geodesic scan is implemented for the orthant cone")
    rng = np.random.default_rng([config.seed, 2])
    tol = config.effective_tol(inst)
    min_slack = math.inf
    checked = 0
    for _ in range(config.geodesic_count):
        x = sample_unit_in_cone(cone, rng)
        v = sample_orthogonal_partner(x, rng)
        t_max = _clip_to_cone(x, v)
        ts = np.linspace(0.0, t_max, 64)
        gpp = geodesic_second_derivative(inst, x, v, ts)
        checked += ts.size
        k = int(np.argmin(gpp))
        min_slack = min(min_slack, float(gpp[k]) / 2.0)
        if gpp[k] / 2.0 < -tol:
            t = float(ts[k])
            p = math.cos(t) * x + math.sin(t) * v
            w = -math.sin(t) * x + math.cos(t) * v
            p = np.maximum(p, 0.0)  # grid points are in-cone up to rounding
            p /= np.linalg.norm(p)
            w -= (w @ p) * p
            w /= np.linalg.norm(w)
            return _falsified(inst, cone, w, p, min_slack, math.nan, checked)
    return OracleVerdict(
        status=OracleStatus.EXHAUSTED,
        min_slack=min_slack,
        min_h=math.nan,
        pairs_checked=checked,
    )


def liminf_estimate(inst: QuadraticInstance, cone: Cone, x: np.ndarray, config: OracleConfig) -> float:
    """Sampled lower envelope of <A(y-x), y-x> / ||y-x||^2 as y -> x on the cap.

    y is drawn as (x + t w)/||x + t w|| for t in {1e-2, 1e-3, 1e-4} and
    random unit w, keeping y in the cone.  The limit value equals the
    restricted smallest eigenvalue at x; the estimate approaches it from a
    first-order neighborhood, so expect agreement at the 1e-2..1e-3 level
    for moderately sized A.  x must be strictly interior (all coordinates
    >= 1e-6); at the boundary the feasible directions form a cone and the
    quotient is not characterized this way.
    """
    if cone.kind != ORTHANT:
        raise ValueError("liminf estimate is implemented for the orthant cone")
    x = np.asarray(x, dtype=float)
    if float(x.min()) < 1e-6:
        raise ValueError("x must be strictly interior to the orthant (coords >= 1e-6)")
    rng = np.random.default_rng([config.seed, 3])
    per_level = max(config.pair_budget // 3, 1)
    best = math.inf
    A = inst.A
    for t in (1e-2, 1e-3, 1e-4):
        W = rng.standard_normal((per_level, inst.n))
        W /= np.linalg.norm(W, axis=1)[:, None]
        Y = x + t * W
        Y /= np.linalg.norm(Y, axis=1)[:, None]
        keep = np.all(Y >= -ORTHANT_MEMBERSHIP_TOL, axis=1)
        D = Y[keep] - x
        nrm2 = np.einsum("bi,bi->b", D, D)
        ok = nrm2 > 1e-28
        D = D[ok]
        quot = np.einsum("bi,bi->b", D @ A, D) / nrm2[ok]
        if quot.size:
            best = min(best, float(quot.min()))
    return best


# ---------------------------------------------------------------------------
# descent demo on f itself


def minimize_f_demo(inst: QuadraticInstance, cone: Cone, config: OracleConfig) -> list[tuple[float, np.ndarray]]:
    """Multistart projected geodesic descent on f over the orthant cap.

    Steps move along sphere geodesics against the tangential gradient with
    Armijo backtracking; feasibility is restored by clamping negatives and
    renormalizing.  Starts include every basis vector (where the tangential
    gradient of a merely sphere-stationary point vanishes, making
    nonconvexity visible as value spread) plus the uniform direction and
    interior samples.  For a convex instance every stall point is a global
    minimizer, so all starts agree in value.
    """
    if cone.kind != ORTHANT:
        raise ValueError("descent demo is implemented for the orthant cone")
    rng = np.random.default_rng([config.seed, 4])
    n = inst.n
    starts = [np.eye(n)[i] for i in range(n)]
    starts.append(np.full(n, 1.0 / math.sqrt(n)))
    while len(starts) < config.multistart_count:
        w = np.abs(rng.standard_normal(n)) + 0.05
        starts.append(w / np.linalg.norm(w))
    starts = starts[: max(config.multistart_count, len(starts))]
    scale = inst.scale()
    results = []
    for x0 in starts:
        x = x0.copy()
        fx = inst.value(x)
        for _ in range(config.descent_max_iters):
            grad = 2.0 * (inst.A @ x) + inst.b
            g = grad - float(grad @ x) * x
            gn = float(np.linalg.norm(g))
            if gn < 1e-11 * scale:
                break
            d = -g / gn
            alpha = 0.5
            accepted = False
            for _ in range(45):
                cand = math.cos(alpha) * x + math.sin(alpha) * d
                cand = np.maximum(cand, 0.0)
                nrm = float(np.linalg.norm(cand))
                if nrm > 1e-12:
                    cand /= nrm
                    fc = inst.value(cand)
                    if fc <= fx - 1e-4 * alpha * gn:
                        x, fx = cand, fc
                        accepted = True
                        break
                alpha *= 0.5
            if not accepted:
                break
        results.append((fx, x))
    return results


# ---------------------------------------------------------------------------
# combined entry point


def run_oracle(inst: QuadraticInstance, cone: Cone, config: OracleConfig) -> OracleVerdict:
    """Pair falsifier plus geodesic scan, merged into one verdict."""
    verdict = falsify(inst, cone, config)
    if verdict.status is OracleStatus.FALSIFIED:
        return verdict
    if cone.kind == ORTHANT and config.geodesic_count > 0:
        scan = geodesic_scan(inst, cone, config)
        merged_pairs = verdict.pairs_checked + scan.pairs_checked
        min_slack = min(verdict.min_slack, scan.min_slack)
        if scan.status is OracleStatus.FALSIFIED:
            return replace(
                scan,
                pairs_checked=merged_pairs,
                min_slack=min_slack,
                min_h=verdict.min_h,
                h_argmin=verdict.h_argmin,
            )
        status = verdict.status
        if status is OracleStatus.NUMERICALLY_CONVEX and min_slack < -config.effective_tol(inst):
            status = OracleStatus.EXHAUSTED
        verdict = replace(verdict, pairs_checked=merged_pairs, min_slack=min_slack, status=status)
    return verdict
