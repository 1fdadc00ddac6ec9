"""Domain types and the fundamental slack evaluations.

Everything in this package studies a quadratic function

    f(x) = <Ax, x> + <b, x> + c,   A symmetric,

restricted to the cap cut out of the unit sphere by a pointed convex cone K.
Convexity of f along the minimal geodesic arcs of that cap is equivalent to
nonnegativity of the first-order pair slack

    foc_slack(u, v) = <Au, u> - <Av, v> - <b, v> / 2

over all unit vectors u orthogonal to a unit vector v in K.  A single
admissible pair with negative slack is therefore a machine-checkable
counterexample; the :class:`WitnessPair` type packages one.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import nnls

ORTHANT = "nonneg_orthant"
GENERATED = "generated"

# The pair condition quantifies over the *closed* cone, so boundary points
# must not be rejected for rounding noise.
ORTHANT_MEMBERSHIP_TOL = 1e-10
GENERATED_MEMBERSHIP_TOL = 1e-9

SAMPLING_MAX_RETRIES = 100

SYMMETRY_WARN_TOL = 1e-12


class SamplingError(RuntimeError):
    """Cone sampling repeatedly produced a degenerate (near-zero) vector."""


class InstanceFormatError(ValueError):
    """Malformed instance data; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"field '{field_name}': {message}")
        self.field = field_name


@dataclass(frozen=True)
class QuadraticInstance:
    """The triple (A, b, c) defining f(x) = <Ax,x> + <b,x> + c, n >= 3.

    The constructor symmetrizes A via (A + A^T)/2 instead of rejecting
    asymmetric input (JSON round-trips introduce noise) and records the
    largest observed asymmetry so reports can surface it.
    """

    A: np.ndarray
    b: np.ndarray
    c: float = 0.0
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    n: int = field(init=False)
    input_asymmetry: float = field(init=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InstanceFormatError("A", f"expected a square matrix, got shape {A.shape}")
        n = A.shape[0]
        if n < 3:
            raise InstanceFormatError("n", f"dimension must be >= 3, got {n}")
        if b.shape != (n,):
            raise InstanceFormatError("b", f"expected length {n}, got {b.shape}")
        if not (np.isfinite(A).all() and np.isfinite(b).all() and math.isfinite(self.c)):
            raise InstanceFormatError("A", "entries must be finite")
        asym = float(np.max(np.abs(A - A.T))) if n else 0.0
        A = 0.5 * (A + A.T)
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "input_asymmetry", asym)

    @property
    def asymmetry_warning(self) -> bool:
        return self.input_asymmetry > SYMMETRY_WARN_TOL

    def scale(self) -> float:
        """Magnitude 1 + ||A||_F + ||b||, used to scale inequality tolerances."""
        return 1.0 + float(np.linalg.norm(self.A)) + float(np.linalg.norm(self.b))

    def value(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.A @ x + self.b @ x + self.c)


@dataclass(frozen=True)
class Cone:
    """A pointed convex cone: the nonnegative orthant or a generated cone.

    Generated cones store unit-normalized generator rows; membership is a
    small nonnegative least-squares feasibility solve.  Pointedness (no
    generator's negation is a nonnegative combination of the generators) is
    validated at construction.
    """

    kind: str
    dim: int
    generators: np.ndarray | None = None

    @classmethod
    def orthant(cls, dim: int) -> "Cone":
        if dim < 1:
            raise ValueError("cone dimension must be positive")
        return cls(kind=ORTHANT, dim=int(dim))

    @classmethod
    def from_generators(cls, generators) -> "Cone":
        G = np.array(generators, dtype=float)
        if G.ndim != 2 or G.shape[0] == 0:
            raise InstanceFormatError("cone.generators", "expected a nonempty list of vectors")
        norms = np.linalg.norm(G, axis=1)
        if np.any(norms < 1e-14):
            raise InstanceFormatError("cone.generators", "generators must be nonzero")
        G = G / norms[:, None]
        for g in G:
            _, resid = nnls(G.T, -g)
            if resid <= GENERATED_MEMBERSHIP_TOL * 2.0:
                raise InstanceFormatError(
                    "cone.generators",
                    "cone is not pointed: a generator's negation lies in the cone",
                )
        G.setflags(write=False)
        return cls(kind=GENERATED, dim=G.shape[1], generators=G)

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            return False
        if self.kind == ORTHANT:
            return bool(np.all(x >= -ORTHANT_MEMBERSHIP_TOL))
        _, resid = nnls(self.generators.T, x)
        return resid <= GENERATED_MEMBERSHIP_TOL * (1.0 + float(np.linalg.norm(x)))

    def contains_standard_basis(self) -> bool:
        """True when every coordinate direction e^i lies in the cone."""
        if self.kind == ORTHANT:
            return True
        return all(self.contains(np.eye(self.dim)[i]) for i in range(self.dim))

    def subset_of_orthant(self) -> bool:
        if self.kind == ORTHANT:
            return True
        return bool(np.all(self.generators >= -1e-12))


# ---------------------------------------------------------------------------
# slack evaluations


def foc_slack(inst: QuadraticInstance, u: np.ndarray, v: np.ndarray) -> float:
    """First-order pair slack <Au,u> - <Av,v> - <b,v>/2.

    Callers supply unit u, v with <u,v> = 0 and v in the cone; nonnegativity
    over all such pairs is equivalent to convexity of f on the cap.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if __debug__:
        assert abs(np.linalg.norm(u) - 1.0) < 1e-9, "u must be a unit vector"
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9, "v must be a unit vector"
        assert abs(float(u @ v)) < 1e-9, "u and v must be orthogonal"
    A = inst.A
    return float(u @ A @ u - v @ A @ v - 0.5 * (inst.b @ v))


def foc_slack_batch(inst: QuadraticInstance, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Vectorized :func:`foc_slack` over rows of U and V."""
    A = inst.A
    qu = np.einsum("bi,bi->b", U @ A, U)
    qv = np.einsum("bi,bi->b", V @ A, V)
    return qu - qv - 0.5 * (V @ inst.b)


def soc_slack(inst: QuadraticInstance, x: np.ndarray, y: np.ndarray) -> float:
    """Slack of the two-point inequality over pairs x, y on the cap.

    Returns RHS - LHS of
        4<Ax,y> <= 2<x,y>(<Ax,x> + <Ay,y>) + (<x,y> - 1)<b, x+y>;
    convexity implies the result is >= 0 for all unit x, y in the cone.
    Collapses to 0 when x == y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if __debug__:
        assert abs(np.linalg.norm(x) - 1.0) < 1e-9
        assert abs(np.linalg.norm(y) - 1.0) < 1e-9
    A = inst.A
    s = float(x @ y)
    lhs = 4.0 * float(x @ A @ y)
    rhs = 2.0 * s * float(x @ A @ x + y @ A @ y) + (s - 1.0) * float(inst.b @ (x + y))
    return rhs - lhs


def shift(inst: QuadraticInstance, lam: float) -> QuadraticInstance:
    """Replace A by A - lam*I; convexity status on the cap is unchanged."""
    return QuadraticInstance(inst.A - lam * np.eye(inst.n), inst.b, inst.c, meta=dict(inst.meta))


def make_positive_definite(inst: QuadraticInstance) -> tuple[QuadraticInstance, float]:
    """Shift so the smallest eigenvalue becomes 1; returns (instance, lam used)."""
    lam = float(np.linalg.eigvalsh(inst.A)[0]) - 1.0
    return shift(inst, lam), lam


# ---------------------------------------------------------------------------
# sampling


def sample_unit_in_cone(cone: Cone, rng: np.random.Generator) -> np.ndarray:
    """Draw a unit vector in the cone.

    Orthant: absolute values of a standard normal draw, normalized; with
    probability 0.25 a random subset of coordinates is zeroed first so the
    boundary (including the basis vectors) is exercised.  Generated cone:
    a random nonnegative combination of the generators.
    """
    if cone.kind == ORTHANT:
        for _ in range(SAMPLING_MAX_RETRIES):
            x = np.abs(rng.standard_normal(cone.dim))
            if rng.random() < 0.25:
                keep = rng.random(cone.dim) >= 0.5
                if not keep.any():
                    keep[rng.integers(cone.dim)] = True
                x = np.where(keep, x, 0.0)
            nrm = float(np.linalg.norm(x))
            if nrm > 1e-12:
                return x / nrm
        raise SamplingError("orthant sampling produced only zero vectors")
    G = cone.generators
    for _ in range(SAMPLING_MAX_RETRIES):
        w = np.abs(rng.standard_normal(G.shape[0]))
        v = w @ G
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-10:
            return v / nrm
    raise SamplingError("generated-cone sampling produced only zero vectors")


def sample_unit_in_cone_batch(cone: Cone, rng: np.random.Generator, count: int) -> np.ndarray:
    """Vectorized equivalent of :func:`sample_unit_in_cone` (rows are draws)."""
    n = cone.dim
    if cone.kind == ORTHANT:
        X = np.abs(rng.standard_normal((count, n)))
        masked = rng.random(count) < 0.25
        keep = rng.random((count, n)) >= 0.5
        dead = ~keep.any(axis=1)
        if dead.any():
            keep[np.flatnonzero(dead), rng.integers(n, size=int(dead.sum()))] = True
        X[masked] *= keep[masked]
        nrm = np.linalg.norm(X, axis=1)
        bad = nrm <= 1e-12
        if bad.any():  # masked rows keep >= 1 coordinate, so this is near-impossible
            X[bad] = np.abs(rng.standard_normal((int(bad.sum()), n)))
            nrm = np.linalg.norm(X, axis=1)
        return X / nrm[:, None]
    G = cone.generators
    W = np.abs(rng.standard_normal((count, G.shape[0])))
    X = W @ G
    nrm = np.linalg.norm(X, axis=1)
    for _ in range(SAMPLING_MAX_RETRIES):
        bad = nrm <= 1e-10
        if not bad.any():
            break
        W = np.abs(rng.standard_normal((int(bad.sum()), G.shape[0])))
        X[bad] = W @ G
        nrm[bad] = np.linalg.norm(X[bad], axis=1)
    else:
        raise SamplingError("generated-cone sampling produced only zero vectors")
    return X / nrm[:, None]


def sample_orthogonal_partner(v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform unit vector in the orthogonal complement of unit v."""
    v = np.asarray(v, dtype=float)
    while True:
        w = rng.standard_normal(v.size)
        w = w - (w @ v) * v
        nrm = float(np.linalg.norm(w))
        if nrm > 1e-7:
            return w / nrm


def sample_orthogonal_partner_batch(V: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Row-wise orthogonal partners for unit rows of V."""
    U = rng.standard_normal(V.shape)
    U -= np.einsum("bi,bi->b", U, V)[:, None] * V
    nrm = np.linalg.norm(U, axis=1)
    while True:
        bad = nrm <= 1e-7
        if not bad.any():
            break
        W = rng.standard_normal((int(bad.sum()), V.shape[1]))
        W -= np.einsum("bi,bi->b", W, V[bad])[:, None] * V[bad]
        U[bad] = W
        nrm[bad] = np.linalg.norm(W, axis=1)
    return U / nrm[:, None]


# ---------------------------------------------------------------------------
# two-coordinate rotations


def rotation_pair(n: int, i: int, j: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """The orthonormal pair u = cos(t)e^i - sin(t)e^j, v = sin(t)e^i + cos(t)e^j."""
    u = np.zeros(n)
    v = np.zeros(n)
    u[i], u[j] = math.cos(theta), -math.sin(theta)
    v[i], v[j] = math.sin(theta), math.cos(theta)
    return u, v


def rotation_slack(inst: QuadraticInstance, i: int, j: int, theta) -> np.ndarray:
    """foc_slack along the rotation family of :func:`rotation_pair`, closed form."""
    theta = np.asarray(theta, dtype=float)
    A, b = inst.A, inst.b
    delta = A[i, i] - A[j, j]
    return (
        delta * np.cos(2 * theta)
        - 2.0 * A[i, j] * np.sin(2 * theta)
        - 0.5 * (b[i] * np.sin(theta) + b[j] * np.cos(theta))
    )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def rotation_slack_min(inst: QuadraticInstance, i: int, j: int, grid: int = 1024) -> tuple[float, float]:
    """Minimize the rotation-family slack over theta in [0, pi/2].

    Dense grid plus golden-section refinement of the best bracket; the
    objective is a trigonometric polynomial with at most a few extrema, so
    the grid over-resolves it.  Returns (theta_min, slack_min).
    """
    ts = np.linspace(0.0, math.pi / 2.0, grid)
    vals = rotation_slack(inst, i, j, ts)
    k = int(np.argmin(vals))
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 1, grid - 1)]
    a, bb = lo, hi
    x1 = bb - _GOLDEN * (bb - a)
    x2 = a + _GOLDEN * (bb - a)
    f1 = float(rotation_slack(inst, i, j, x1))
    f2 = float(rotation_slack(inst, i, j, x2))
    for _ in range(80):
        if f1 <= f2:
            bb, x2, f2 = x2, x1, f1
            x1 = bb - _GOLDEN * (bb - a)
            f1 = float(rotation_slack(inst, i, j, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (bb - a)
            f2 = float(rotation_slack(inst, i, j, x2))
    theta = 0.5 * (a + bb)
    best = float(rotation_slack(inst, i, j, theta))
    if vals[k] < best:
        theta, best = float(ts[k]), float(vals[k])
    return theta, best


# ---------------------------------------------------------------------------
# witnesses and certificate outcomes


@dataclass(frozen=True)
class WitnessPair:
    """An admissible pair (u, v) whose negative slack disproves convexity."""

    u: np.ndarray
    v: np.ndarray
    slack: float

    @classmethod
    def build(cls, inst: QuadraticInstance, cone: Cone, u, v) -> "WitnessPair":
        u = np.array(u, dtype=float)
        v = np.array(v, dtype=float)
        if abs(np.linalg.norm(u) - 1.0) > 1e-12 or abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("witness vectors must be unit within 1e-12")
        if abs(float(u @ v)) > 1e-12:
            raise ValueError("witness vectors must be orthogonal within 1e-12")
        if not cone.contains(v):
            raise ValueError("witness v must lie in the cone")
        u.setflags(write=False)
        v.setflags(write=False)
        return cls(u=u, v=v, slack=foc_slack(inst, u, v))

    def validate(self, inst: QuadraticInstance, cone: Cone) -> bool:
        """Independently recheck norms, orthogonality, membership and slack."""
        ok = (
            abs(np.linalg.norm(self.u) - 1.0) <= 1e-12
            and abs(np.linalg.norm(self.v) - 1.0) <= 1e-12
            and abs(float(self.u @ self.v)) <= 1e-12
            and cone.contains(self.v)
        )
        return ok and abs(foc_slack(inst, self.u, self.v) - self.slack) <= 1e-12

    def to_dict(self) -> dict:
        return {"u": self.u.tolist(), "v": self.v.tolist(), "slack": self.slack}


class Verdict(str, enum.Enum):
    PROVES_CONVEX = "ProvesConvex"
    PROVES_NONCONVEX = "ProvesNonConvex"
    NOT_APPLICABLE = "NotApplicable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CertificateOutcome:
    """Verdict of one certificate, with an explicit witness when negative."""

    name: str
    verdict: Verdict
    witness: WitnessPair | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        has_negative_witness = self.witness is not None and self.witness.slack < 0.0
        if (self.verdict is Verdict.PROVES_NONCONVEX) != has_negative_witness:
            raise ValueError(
                "ProvesNonConvex outcomes must carry a witness with negative slack"
            )


# ---------------------------------------------------------------------------
# instance JSON


def cone_to_json(cone: Cone):
    if cone.kind == ORTHANT:
        return ORTHANT
    return {"generators": cone.generators.tolist()}


def instance_to_dict(inst: QuadraticInstance, cone: Cone) -> dict:
    d = {
        "n": inst.n,
        "A": inst.A.tolist(),
        "b": inst.b.tolist(),
        "c": inst.c,
        "cone": cone_to_json(cone),
    }
    if inst.meta:
        d["meta"] = dict(inst.meta)
    return d


_ALLOWED_KEYS = {"n", "A", "b", "c", "cone", "meta"}


def instance_from_dict(d) -> tuple[QuadraticInstance, Cone]:
    if not isinstance(d, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    for key in ("n", "A", "b", "c", "cone"):
        if key not in d:
            raise InstanceFormatError(key, "missing")
    unknown = set(d) - _ALLOWED_KEYS
    if unknown:
        raise InstanceFormatError(sorted(unknown)[0], "unknown field")
    try:
        n = int(d["n"])
    except (TypeError, ValueError):
        raise InstanceFormatError("n", "must be an integer") from None
    try:
        A = np.array(d["A"], dtype=float)
    except (TypeError, ValueError):
        raise InstanceFormatError("A", "must be a numeric matrix") from None
    if A.shape != (n, n):
        raise InstanceFormatError("A", f"expected shape ({n}, {n}), got {A.shape}")
    try:
        b = np.array(d["b"], dtype=float)
    except (TypeError, ValueError):
        raise InstanceFormatError("b", "must be a numeric vector") from None
    if b.shape != (n,):
        raise InstanceFormatError("b", f"expected length {n}")
    if not isinstance(d["c"], (int, float)):
        raise InstanceFormatError("c", "must be a number")
    meta = d.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceFormatError("meta", "must be an object")
    spec = d["cone"]
    if spec == ORTHANT:
        cone = Cone.orthant(n)
    elif isinstance(spec, dict) and set(spec) == {"generators"}:
        cone = Cone.from_generators(spec["generators"])
        if cone.dim != n:
            raise InstanceFormatError("cone.generators", f"generators must have length {n}")
    else:
        raise InstanceFormatError("cone", "expected 'nonneg_orthant' or {'generators': [...]}")
    inst = QuadraticInstance(A, b, float(d["c"]), meta=meta)
    return inst, cone


def save_instance(path, inst: QuadraticInstance, cone: Cone) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst, cone), indent=2) + "\n")


def load_instance(path) -> tuple[QuadraticInstance, Cone]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<json>", f"invalid JSON: {exc}") from None
    return instance_from_dict(raw)
