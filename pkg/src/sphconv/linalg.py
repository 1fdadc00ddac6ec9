"""Symmetric eigenvalue kernels, complement restrictions, copositivity.

The restriction machinery answers one question: what is the smallest value of
<Au, u> over unit vectors u orthogonal to a given unit x?  Two independent
routes are provided: an explicit orthonormal basis of the complement
(Householder), and the full-size projected matrix P_x A P_x + lam * Q_x whose
spectrum contains exactly the restricted spectrum plus the value lam.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class NotApplicableError(ValueError):
    """A routine's hypothesis failed; the message says how to repair inputs."""


def _check_symmetric(M: np.ndarray, what: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{what} must be square, got shape {M.shape}")
    scale = 1.0 + float(np.abs(M).max(initial=0.0))
    if float(np.abs(M - M.T).max(initial=0.0)) > 1e-10 * scale:
        raise ValueError(f"{what} must be symmetric")
    return M


def smallest_eigenvalue(M: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of a symmetric matrix.

    Residual ||Mw - lam*w|| <= 1e-8 * (1 + ||M||_F) is guaranteed by the
    dense symmetric solver at these sizes.  Raises ValueError on
    non-symmetric input.
    """
    M = _check_symmetric(M)
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    return float(w[0]), V[:, 0].copy()


def householder_complement_basis(x: np.ndarray, flip: bool = False) -> np.ndarray:
    """Orthonormal basis of the complement of unit x, as columns of an n x (n-1) matrix.

    Built from the Householder reflection mapping x to (-/+)e^1; deterministic
    and stable (the pivot sign follows sign(x_1) so the reflector never
    degenerates).  ``flip`` selects the opposite pivot sign where valid,
    which is useful for checking basis independence.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    s = 1.0 if x[0] >= 0 else -1.0
    if flip:
        s = -s
    w = x.copy()
    w[0] += s
    denom = float(w @ w)
    if denom < 1e-24:
        raise ValueError("degenerate Householder pivot; use the default sign")
    H = np.eye(n) - (2.0 / denom) * np.outer(w, w)
    return H[:, 1:]


@dataclass(frozen=True)
class RestrictedOperator:
    """A restricted to the orthogonal complement of a base point x."""

    x: np.ndarray
    basis: np.ndarray  # n x (n-1), orthonormal columns spanning the complement of x
    matrix: np.ndarray  # basis^T A basis, symmetric (n-1) x (n-1)


def restricted_operator(A: np.ndarray, x: np.ndarray, flip: bool = False) -> RestrictedOperator:
    A = _check_symmetric(A)
    x = np.asarray(x, dtype=float)
    B = householder_complement_basis(x, flip=flip)
    M = B.T @ A @ B
    M = 0.5 * (M + M.T)
    return RestrictedOperator(x=x, basis=B, matrix=M)


def restricted_lambda_min(A: np.ndarray, x: np.ndarray, flip: bool = False) -> float:
    """min over unit u orthogonal to x of <Au, u>."""
    op = restricted_operator(A, x, flip=flip)
    return float(np.linalg.eigvalsh(op.matrix)[0])


def restricted_smallest_pair(A: np.ndarray, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Restricted smallest eigenvalue together with its minimizer embedded in R^n."""
    op = restricted_operator(A, x)
    lam, w = smallest_eigenvalue(op.matrix)
    u = op.basis @ w
    u /= np.linalg.norm(u)
    return lam, u


def projection_matrices(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The complementary projectors P_x = I - x x^T and Q_x = x x^T."""
    x = np.asarray(x, dtype=float)
    Q = np.outer(x, x)
    return np.eye(x.size) - Q, Q


def projection_formula_lambda_min(A: np.ndarray, x: np.ndarray, r: np.ndarray) -> float:
    """Restricted smallest eigenvalue via the full-size projected matrix.

    Computes lambda_min(P_x A P_x + <Ar,r> Q_x) for positive definite A and
    any unit r orthogonal to x; this equals :func:`restricted_lambda_min`.
    A must be positive definite (add a multiple of the identity first if it
    is not; the shift leaves convexity questions unchanged).
    """
    A = _check_symmetric(A)
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if __debug__:
        assert abs(np.linalg.norm(x) - 1.0) < 1e-9
        assert abs(float(r @ x)) < 1e-9, "r must be orthogonal to x"
    lam_min = float(np.linalg.eigvalsh(A)[0])
    if lam_min <= 1e-12 * (1.0 + float(np.abs(A).max())):
        raise NotApplicableError(
            "matrix must be positive definite; add a multiple of the identity "
            "(which does not change restricted minima up to the same shift) and retry"
        )
    P, Q = projection_matrices(x)
    lam = float(r @ A @ r)
    M = P @ A @ P + lam * Q
    return float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])


def perron_check(A: np.ndarray) -> bool:
    """True iff every entry of A is strictly positive."""
    A = np.asarray(A, dtype=float)
    return bool(np.all(A > 0.0))


# ---------------------------------------------------------------------------
# copositivity


class CopositivityStatus(str, enum.Enum):
    COPOSITIVE = "Copositive"
    NOT_COPOSITIVE = "NotCopositive"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CopositivityResult:
    status: CopositivityStatus
    witness: np.ndarray | None = None  # unit nonnegative vector with x^T M x < 0
    value: float | None = None

    def __post_init__(self):
        is_refuted = self.witness is not None and self.value is not None and self.value < -1e-12
        if (self.status is CopositivityStatus.NOT_COPOSITIVE) != is_refuted:
            raise ValueError("NotCopositive must carry a witness with negative value")


def _project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, y.size + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    tau = css[rho - 1] / rho
    return np.maximum(y - tau, 0.0)


def _quad(M: np.ndarray, x: np.ndarray) -> float:
    return float(x @ M @ x)


def _not_copositive(M: np.ndarray, x: np.ndarray) -> CopositivityResult:
    w = np.maximum(x, 0.0)
    w /= np.linalg.norm(w)
    return CopositivityResult(CopositivityStatus.NOT_COPOSITIVE, witness=w, value=_quad(M, w))


def copositivity_check(
    M: np.ndarray,
    budget: int = 32,
    rng: np.random.Generator | None = None,
    iters: int = 150,
) -> CopositivityResult:
    """Three-valued copositivity test.

    Decision ladder:
      (a) all entries >= 0                          -> Copositive
      (b) positive semidefinite (lam_min >= -1e-10) -> Copositive
      (c) size <= 2: the exact classical criterion  -> decided exactly
      (d) multistart projected gradient descent of x^T M x over the unit
          simplex (``budget`` starts); a point below -1e-10 refutes,
          otherwise Unknown.

    The general problem is hard, so Unknown is a deliberate outcome; callers
    needing soundness treat it as "no opinion".
    """
    M = _check_symmetric(M)
    k = M.shape[0]
    if k < 1:
        raise ValueError("matrix must have at least one row")
    if np.all(M >= 0.0):
        return CopositivityResult(CopositivityStatus.COPOSITIVE)
    lam_min = float(np.linalg.eigvalsh(M)[0])
    if lam_min >= -1e-10:
        return CopositivityResult(CopositivityStatus.COPOSITIVE)
    if k == 1:
        if M[0, 0] >= 0.0:
            return CopositivityResult(CopositivityStatus.COPOSITIVE)
        return _not_copositive(M, np.ones(1))
    if k == 2:
        m11, m22, m12 = M[0, 0], M[1, 1], M[0, 1]
        if m11 < 0.0:
            return _not_copositive(M, np.array([1.0, 0.0]))
        if m22 < 0.0:
            return _not_copositive(M, np.array([0.0, 1.0]))
        if m12 + np.sqrt(m11 * m22) >= 0.0:
            return CopositivityResult(CopositivityStatus.COPOSITIVE)
        # minimize the 1-d quadratic q(t) = x^T M x on x = (t, 1-t), t in [0,1]
        alpha = m11 - 2.0 * m12 + m22
        beta = 2.0 * (m12 - m22)
        cands = [0.0, 1.0]
        if alpha > 0.0:
            cands.append(min(1.0, max(0.0, -beta / (2.0 * alpha))))
        t = min(cands, key=lambda t: alpha * t * t + beta * t + m22)
        return _not_copositive(M, np.array([t, 1.0 - t]))
    rng = np.random.default_rng(0) if rng is None else rng
    step = 1.0 / (2.0 * float(np.linalg.norm(M, 2)) + 1e-30)
    best_x, best_val = None, np.inf
    for start in range(max(1, budget)):
        if start == 0:
            x = np.full(k, 1.0 / k)
        else:
            g = rng.exponential(size=k)
            x = g / g.sum()
        for _ in range(iters):
            x = _project_simplex(x - step * 2.0 * (M @ x))
        val = _quad(M, x)
        if val < best_val:
            best_x, best_val = x, val
        if best_val < -1e-6:
            break
    if best_val < -1e-10:
        return _not_copositive(M, best_x)
    return CopositivityResult(CopositivityStatus.UNKNOWN, value=best_val)
