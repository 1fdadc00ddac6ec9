"""Instance corpora: convex-by-certificate families and random baselines.

Each structured generator records the certificate it targets in the instance
metadata so tests can assert that the intended code path fired, not merely
that some verdict came out.
"""

from __future__ import annotations

import math

import numpy as np

from .certificates import BIPOS_BETA
from .core import QuadraticInstance


def _require_dim(n: int) -> None:
    if n < 3:
        raise ValueError(f"dimension must be >= 3, got {n}")


def _random_symmetric(n: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.uniform(-1.0, 1.0, size=(n, n))
    return 0.5 * (A + A.T)


def gen_gap(n: int, rng: np.random.Generator) -> QuadraticInstance:
    """Random symmetric A with b pushed below 2 sqrt(n)(lam_min - lam_max)."""
    _require_dim(n)
    A = _random_symmetric(n, rng)
    w = np.linalg.eigvalsh(A)
    bound = 2.0 * math.sqrt(n) * float(w[0] - w[-1])
    b = bound - np.abs(rng.standard_normal(n))
    return QuadraticInstance(A, b, float(rng.standard_normal()), meta={"family": "gap", "target_certificate": "thlt.vi.gap"})


def gen_diag_iff(n: int, rng: np.random.Generator, convex: bool) -> QuadraticInstance:
    """Diagonal A with duplicated minimum; b at the exact bound or violating it.

    convex=True places every component exactly at its bound (slack zero, the
    tight case); convex=False pushes exactly one component 0.05..0.5 above
    its bound, so a basis pair already refutes convexity.
    """
    _require_dim(n)
    d = rng.uniform(-1.0, 2.0, size=n)
    i, j = rng.choice(n, size=2, replace=False)
    dmin = float(d.min()) - rng.uniform(0.1, 1.0)
    d[i] = d[j] = dmin
    b = 2.0 * (dmin - d)
    meta = {"family": "diag-iff", "target_certificate": "iffdiag", "convex": bool(convex)}
    if not convex:
        others = [k for k in range(n) if k != i and k != j]
        k = int(rng.choice(others)) if others else int(j)
        delta = float(rng.uniform(0.05, 0.5))
        b[k] += delta
        meta["violated_index"] = k
        meta["violation"] = delta
    return QuadraticInstance(np.diag(d), b, 0.0, meta=meta)


def gen_bipos(n: int, rng: np.random.Generator) -> QuadraticInstance:
    """Diagonal A, unique minimum with constant tail, and one positive b entry.

    The minimum-position component of b is drawn strictly positive in
    (0, 2*gap]; all other components sit exactly at -2 * gap * beta.
    """
    _require_dim(n)
    dmin = float(rng.uniform(-1.0, 1.0))
    gap = float(rng.uniform(0.5, 2.0))
    pos = int(rng.integers(n))
    d = np.full(n, dmin + gap)
    d[pos] = dmin
    b = np.full(n, -2.0 * gap * BIPOS_BETA)
    b[pos] = float(rng.uniform(0.0, 2.0 * gap)) or 1e-3
    return QuadraticInstance(
        np.diag(d), b, 0.0, meta={"family": "bipos", "target_certificate": "bipos", "positive_index": pos}
    )


def gen_cd(n: int, rng: np.random.Generator) -> QuadraticInstance:
    """Random symmetric A with b at the decomposition bound minus noise."""
    _require_dim(n)
    A = _random_symmetric(n, rng)
    d = np.diag(A)
    off = A - np.diag(d)
    bound = (
        -2.0 * np.maximum(d, 0.0)
        - 2.0 * float(np.maximum(-d, 0.0).sum())
        - 4.0 * float(np.abs(off).sum())
    )
    b = bound - np.abs(rng.standard_normal(n))
    return QuadraticInstance(A, b, 0.0, meta={"family": "cd", "target_certificate": "cd.iii"})


def gen_random(n: int, rng: np.random.Generator) -> QuadraticInstance:
    """Unstructured baseline for disagreement hunting."""
    _require_dim(n)
    A = _random_symmetric(n, rng)
    b = rng.standard_normal(n)
    return QuadraticInstance(A, b, float(rng.standard_normal()), meta={"family": "random"})


FAMILIES = {
    "gap": gen_gap,
    "diag-iff": lambda n, rng: gen_diag_iff(n, rng, convex=bool(rng.integers(2))),
    "bipos": gen_bipos,
    "cd": gen_cd,
    "random": gen_random,
}
