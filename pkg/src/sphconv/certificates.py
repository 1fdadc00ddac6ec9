"""The certificate battery: necessary, sufficient, and exact conditions.

Every certificate has the signature ``cert(inst, cone, tol=None)`` and
returns a :class:`~sphconv.core.CertificateOutcome`:

* ``ProvesConvex``     -- a sufficient condition held;
* ``ProvesNonConvex``  -- a necessary condition failed, and a concrete
  orthonormal pair with negative first-order slack is attached as witness;
* ``NotApplicable``    -- the certificate's hypotheses do not match the
  instance (wrong cone, wrong matrix pattern); no opinion is expressed;
* ``Inconclusive``     -- hypotheses matched but the condition neither
  proved nor refuted anything.

An inequality of the form "value <= 0" counts as violated only when the
value exceeds ``1e-10 * (1 + ||A||_F + ||b||)``.  Negative verdicts are
machine-checked on construction: if the candidate witness does not
re-evaluate below -1e-12 the certificate downgrades itself to Inconclusive
instead of reporting an unsound refutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    CertificateOutcome,
    Cone,
    ORTHANT,
    QuadraticInstance,
    Verdict,
    WitnessPair,
    rotation_pair,
    rotation_slack_min,
)
from . import linalg
from .linalg import CopositivityStatus

PATTERN_TOL = 1e-14  # entry-level gate for "this matrix is exactly of shape X"
ARGMIN_TOL = 1e-10  # absolute tolerance for diagonal argmin membership
WITNESS_SLACK_TOL = -1e-12

SQRT2 = math.sqrt(2.0)


def inequality_tol(inst: QuadraticInstance) -> float:
    return 1e-10 * inst.scale()


def _na(name: str, reason: str) -> CertificateOutcome:
    return CertificateOutcome(name, Verdict.NOT_APPLICABLE, detail={"reason": reason})


def _inconclusive(name: str, **detail) -> CertificateOutcome:
    return CertificateOutcome(name, Verdict.INCONCLUSIVE, detail=detail)


def _convex(name: str, **detail) -> CertificateOutcome:
    return CertificateOutcome(name, Verdict.PROVES_CONVEX, detail=detail)


def _nonconvex(name, inst, cone, candidates, **detail) -> CertificateOutcome:
    """Build a refutation from candidate pairs, keeping the most negative.

    ``candidates`` is an iterable of (u, v) pairs; the slack of each is
    recomputed from the instance.  If none validates below -1e-12 the
    certificate downgrades to Inconclusive rather than risk an unsound
    verdict.
    """
    best = None
    for u, v in candidates:
        try:
            w = WitnessPair.build(inst, cone, u, v)
        except ValueError:
            continue
        if best is None or w.slack < best.slack:
            best = w
    if best is None or best.slack >= WITNESS_SLACK_TOL:
        detail["downgraded"] = "no candidate pair re-evaluated below -1e-12"
        return CertificateOutcome(name, Verdict.INCONCLUSIVE, detail=detail)
    detail["witness_slack"] = best.slack
    return CertificateOutcome(name, Verdict.PROVES_NONCONVEX, witness=best, detail=detail)


def _basis(n: int, i: int) -> np.ndarray:
    e = np.zeros(n)
    e[i] = 1.0
    return e


def _basis_pair_candidates(n: int, i: int, j: int):
    ei, ej = _basis(n, i), _basis(n, j)
    root = 1.0 / SQRT2
    return [
        (ei, ej),
        (ej, ei),
        (root * (ei - ej), root * (ei + ej)),
    ]


def _offdiag(A: np.ndarray) -> np.ndarray:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return off


def _is_diagonal(A: np.ndarray) -> bool:
    return float(np.abs(_offdiag(A)).max(initial=0.0)) <= PATTERN_TOL


def _diag_argmin_set(d: np.ndarray) -> np.ndarray:
    return np.flatnonzero(d <= d.min() + ARGMIN_TOL)


# ---------------------------------------------------------------------------
# exact certificates


def cert_affine(inst, cone, tol=None):
    """A == 0: convex iff the linear part lies in the polar of the cone."""
    name = "affine"
    tol = inequality_tol(inst) if tol is None else tol
    if float(np.linalg.norm(inst.A)) > PATTERN_TOL:
        return _na(name, "quadratic part is nonzero")
    n = inst.n
    if cone.kind == ORTHANT:
        worst = int(np.argmax(inst.b))
        if inst.b[worst] <= tol:
            return _convex(name, max_b=float(inst.b.max()))
        other = 0 if worst != 0 else 1
        return _nonconvex(
            name, inst, cone, [(_basis(n, other), _basis(n, worst))], violating_index=worst
        )
    vals = cone.generators @ inst.b
    worst = int(np.argmax(vals))
    if vals[worst] <= tol:
        return _convex(name, max_generator_product=float(vals[worst]))
    v = cone.generators[worst]
    u = linalg.householder_complement_basis(v)[:, 0]
    return _nonconvex(name, inst, cone, [(u, v)], violating_generator=worst)


def cert_diag_iff(inst, cone, tol=None):
    """Diagonal A with a duplicated minimum: exact componentwise bound on b."""
    name = "iffdiag"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if not _is_diagonal(inst.A):
        return _na(name, "matrix is not diagonal")
    d = np.diag(inst.A)
    argmin = _diag_argmin_set(d)
    if argmin.size < 2:
        return _na(name, "diagonal minimum is not duplicated")
    bounds = 2.0 * (d.min() - d)
    viol = inst.b - bounds
    worst = int(np.argmax(viol))
    if viol[worst] <= tol:
        return _convex(name, bounds=bounds.tolist())
    order = np.argsort(d, kind="stable")
    i0 = int(order[0]) if int(order[0]) != worst else int(order[1])
    return _nonconvex(
        name,
        inst,
        cone,
        [(_basis(inst.n, i0), _basis(inst.n, worst))],
        violating_index=worst,
        bound=float(bounds[worst]),
    )


def _rank_one_signature(A: np.ndarray):
    """Detect A == s * e^i (e^i)^T with s = +/-1; returns (i, s) or None."""
    nz = np.argwhere(np.abs(A) > PATTERN_TOL)
    if nz.shape[0] != 1:
        return None
    i, j = int(nz[0, 0]), int(nz[0, 1])
    if i != j:
        return None
    val = A[i, i]
    if abs(abs(val) - 1.0) > PATTERN_TOL:
        return None
    return i, (1.0 if val > 0 else -1.0)


def cert_rank_one_basis(inst, cone, tol=None):
    """A equal to +/- e^i (e^i)^T, matched on the raw matrix.

    Plus sign: exact; convex iff b_i <= -2 and every other component is <= 0.
    Minus sign: the analogous componentwise condition is flipped; the sharp
    necessary bounds are b_i <= 2 and b_k <= -2 for k != i (each refutable by
    a basis pair), while b_k <= -2 for all k is sufficient.  Between those the
    certificate stays silent (the diagonal-gap certificate covers part of the
    remaining region).
    """
    name = "rankone"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    sig = _rank_one_signature(inst.A)
    if sig is None:
        return _na(name, "matrix is not +/- a basis dyad")
    i, s = sig
    n, b = inst.n, inst.b
    others = [k for k in range(n) if k != i]
    if s > 0:
        cands = []
        if b[i] + 2.0 > tol:
            k = others[0]
            cands.append((_basis(n, k), _basis(n, i)))
        for j in others:
            if b[j] > tol:
                k = next(m for m in range(n) if m not in (i, j))
                cands.append((_basis(n, k), _basis(n, j)))
        if cands:
            return _nonconvex(name, inst, cone, cands, sign=1)
        return _convex(name, sign=1)
    cands = []
    if b[i] - 2.0 > tol:
        cands.append((_basis(n, others[0]), _basis(n, i)))
    for k in others:
        if b[k] + 2.0 > tol:
            cands.append((_basis(n, i), _basis(n, k)))
    if cands:
        return _nonconvex(name, inst, cone, cands, sign=-1)
    if np.all(b <= -2.0 + tol):
        return _convex(name, sign=-1)
    return _inconclusive(name, sign=-1, reason="between the refutable and provable regions")


# ---------------------------------------------------------------------------
# sufficient certificates


def _cross_pattern(A: np.ndarray):
    """Detect A == s * (e^i e^j^T + e^j e^i^T), i != j, s = +/-1."""
    if float(np.abs(np.diag(A)).max(initial=0.0)) > PATTERN_TOL:
        return None
    nz = np.argwhere(np.abs(A) > PATTERN_TOL)
    if nz.shape[0] != 2:
        return None
    (i, j), (j2, i2) = (int(nz[0, 0]), int(nz[0, 1])), (int(nz[1, 0]), int(nz[1, 1]))
    if (i, j) != (i2, j2) or i == j:
        return None
    val = A[i, j]
    if abs(abs(val) - 1.0) > PATTERN_TOL:
        return None
    return i, j, (1.0 if val > 0 else -1.0)


def cert_offdiag_pair(inst, cone, tol=None):
    """A equal to +/- (e^i e^j^T + e^j e^i^T): pattern-gated bounds on b.

    Necessary: b_k <= -2 for k outside {i, j} and b_k <= 0 inside; a
    violation yields a rotated or basis pair witness.  Sufficient: all
    b_k <= -4 (plus sign) or <= -2 (minus sign).
    """
    name = "crosspair"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    sig = _cross_pattern(inst.A)
    if sig is None:
        return _na(name, "matrix is not +/- a symmetric off-diagonal pair")
    i, j, s = sig
    n, b = inst.n, inst.b
    root = 1.0 / SQRT2
    u_rot = root * (_basis(n, i) - s * _basis(n, j))
    cands = []
    for k in range(n):
        if k in (i, j):
            if b[k] > tol:
                ell = j if k == i else i
                cands.append((_basis(n, ell), _basis(n, k)))
        elif b[k] + 2.0 > tol:
            cands.append((u_rot, _basis(n, k)))
    if cands:
        return _nonconvex(name, inst, cone, cands, sign=int(s))
    need = -4.0 if s > 0 else -2.0
    if np.all(b <= need + tol):
        return _convex(name, sign=int(s), bound=need)
    return _inconclusive(name, sign=int(s), bound=need)


def cert_zmatrix(inst, cone, tol=None):
    """Nonpositive off-diagonal entries: b_i <= 2[lam_min(A) - a_ii] suffices."""
    name = "zmatrix"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if float(_offdiag(inst.A).max(initial=0.0)) > PATTERN_TOL:
        return _na(name, "matrix has positive off-diagonal entries")
    lam_min = float(np.linalg.eigvalsh(inst.A)[0])
    bounds = 2.0 * (lam_min - np.diag(inst.A))
    if np.all(inst.b <= bounds + tol):
        return _convex(name, bounds=bounds.tolist(), lam_min=lam_min)
    return _inconclusive(name, bounds=bounds.tolist(), lam_min=lam_min)


def cert_gap_sufficient(inst, cone, tol=None):
    """b_i <= 2 sqrt(n) [lam_min(A) - lam_max(A)] for all i suffices."""
    name = "thlt.vi.gap"
    tol = inequality_tol(inst) if tol is None else tol
    if not cone.subset_of_orthant():
        return _na(name, "cone is not contained in the nonnegative orthant")
    w = np.linalg.eigvalsh(inst.A)
    bound = 2.0 * math.sqrt(inst.n) * float(w[0] - w[-1])
    if np.all(inst.b <= bound + tol):
        return _convex(name, bound=bound)
    return _inconclusive(name, bound=bound)


BIPOS_BETA = math.sqrt(6.0 * math.sqrt(3.0) - 9.0)


def cert_bipos(inst, cone, tol=None):
    """Diagonal A, unique minimum, constant tail: allows one positive b entry.

    With gap g between the tail value and the minimum, convexity holds when
    the minimum-position component satisfies b <= 2g and every other
    component is <= -2 g beta with beta = sqrt(6 sqrt(3) - 9) ~ 1.17996.
    """
    name = "bipos"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if not _is_diagonal(inst.A):
        return _na(name, "matrix is not diagonal")
    d = np.diag(inst.A)
    order = np.argsort(d, kind="stable")
    tail = d[order[1:]]
    if tail.min() - d[order[0]] <= ARGMIN_TOL:
        return _na(name, "diagonal minimum is not unique")
    if tail.max() - tail.min() > ARGMIN_TOL:
        return _na(name, "non-minimal diagonal entries are not constant")
    gap = float(tail.mean() - d[order[0]])
    i1 = int(order[0])
    head_ok = inst.b[i1] <= 2.0 * gap + tol
    tail_bound = -2.0 * gap * BIPOS_BETA
    tail_ok = all(inst.b[k] <= tail_bound + tol for k in range(inst.n) if k != i1)
    detail = {"gap": gap, "beta": BIPOS_BETA, "head_bound": 2.0 * gap, "tail_bound": tail_bound}
    if head_ok and tail_ok:
        return _convex(name, **detail)
    return _inconclusive(name, **detail)


def cert_decomposition(inst, cone, tol=None):
    """Closed-form sufficient bound from splitting A into signed dyads.

    Each coordinate must satisfy
        b_k <= -2 a_kk^+  - 2 sum_i a_ii^-  - 4 sum_{i != j} |a_ij|,
    where the off-diagonal sum runs over ordered pairs (each symmetric entry
    counted twice).  The detail carries the sharper variant that splits the
    off-diagonal sum by sign (factor 4 on positive, 2 on negative entries).
    """
    name = "cd.iii"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if float(np.linalg.norm(inst.A)) <= PATTERN_TOL:
        return _na(name, "zero matrix is handled by the affine certificate")
    d = np.diag(inst.A)
    off = _offdiag(inst.A)
    sum_abs_off = float(np.abs(off).sum())
    sum_pos_off = float(np.maximum(off, 0.0).sum())
    sum_neg_off = float(np.maximum(-off, 0.0).sum())
    sum_neg_diag = float(np.maximum(-d, 0.0).sum())
    base = -2.0 * np.maximum(d, 0.0) - 2.0 * sum_neg_diag
    bound_abs = base - 4.0 * sum_abs_off
    bound_signed = base - 4.0 * sum_pos_off - 2.0 * sum_neg_off
    detail = {
        "bound_abs": bound_abs.tolist(),
        "bound_signed": bound_signed.tolist(),
        "signed_variant_holds": bool(np.all(inst.b <= bound_signed + tol)),
        "offdiagonal_sum_convention": "ordered pairs (each symmetric entry counted twice)",
    }
    if np.all(inst.b <= bound_abs + tol):
        return _convex(name, **detail)
    return _inconclusive(name, **detail)


def cert_copositive_chain(inst, cone, tol=None):
    """Copositivity of C = 2[lam_min(A) I - A] - diag(b), with b <= 0, suffices.

    The detail also reports whether the stronger entry-level condition
    (diag(diag(A)) - A copositive plus b_i <= 2[lam_min - a_ii]) holds, and
    whether the componentwise bound holds on its own; these feed the
    implication-chain checks in the test suite.
    """
    name = "copos.chain"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    lam_min = float(np.linalg.eigvalsh(inst.A)[0])
    diag = np.diag(inst.A)
    bound_iii = 2.0 * (lam_min - diag)
    cond_iii = bool(np.all(inst.b <= bound_iii + tol))
    entry_matrix = np.diag(diag) - inst.A
    cond_i = (
        linalg.copositivity_check(entry_matrix, budget=16, rng=np.random.default_rng(99)).status
        is CopositivityStatus.COPOSITIVE
    ) and cond_iii
    if np.any(inst.b > tol):
        return _inconclusive(name, reason="b has a positive component", cond_i=cond_i, cond_iii=cond_iii)
    C = 2.0 * (lam_min * np.eye(inst.n) - inst.A) - np.diag(inst.b)
    res = linalg.copositivity_check(C, budget=48, rng=np.random.default_rng(1234))
    detail = {
        "cond_i": cond_i,
        "cond_ii": res.status.value,
        "cond_iii": cond_iii,
        "lam_min": lam_min,
    }
    if res.status is CopositivityStatus.COPOSITIVE:
        return _convex(name, **detail)
    if res.status is CopositivityStatus.UNKNOWN:
        detail["reason"] = "copositivity undecided within budget"
    else:
        detail["reason"] = "C is not copositive; the condition is only sufficient"
    return _inconclusive(name, **detail)


# ---------------------------------------------------------------------------
# necessary certificates


def cert_pair_sums(inst, cone, tol=None):
    """b_i + b_j <= 0 and 2(a_ii - a_jj) >= b_j are necessary over basis pairs."""
    name = "pairsum"
    tol = inequality_tol(inst) if tol is None else tol
    if not cone.contains_standard_basis():
        return _na(name, "cone does not contain all coordinate directions")
    n, b, A = inst.n, inst.b, inst.A
    cands = []
    worst = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if i < j and b[i] + b[j] > tol:
                worst = max(worst, b[i] + b[j])
                cands += [(_basis(n, i), _basis(n, j)), (_basis(n, j), _basis(n, i))]
            viol = b[j] - 2.0 * (A[i, i] - A[j, j])
            if viol > tol:
                worst = max(worst, viol)
                cands.append((_basis(n, i), _basis(n, j)))
    if cands:
        return _nonconvex(name, inst, cone, cands, worst_violation=worst)
    return _inconclusive(name)


def cert_offdiag_mix(inst, cone, tol=None):
    """a_ij <= -(sqrt(2)/8)(b_i + b_j) is necessary; refuted by a rotated pair."""
    name = "mix.offdiag"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires a cone containing its own dual (orthant)")
    n, b, A = inst.n, inst.b, inst.A
    best, pair = -np.inf, None
    for i in range(n):
        for j in range(i + 1, n):
            viol = A[i, j] + (SQRT2 / 8.0) * (b[i] + b[j])
            if viol > best:
                best, pair = viol, (i, j)
    if best <= tol:
        return _inconclusive(name, worst_violation=float(best))
    i, j = pair
    root = 1.0 / SQRT2
    u = root * (_basis(n, i) - _basis(n, j))
    v = root * (_basis(n, i) + _basis(n, j))
    return _nonconvex(name, inst, cone, [(u, v)], pair=pair, violation=float(best))


def cert_pair_vs_offdiag(inst, cone, tol=None):
    """b_i + b_j <= -4 sqrt(2) a_ij^+ is necessary for every pair."""
    name = "pairsum.offdiag"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    n, b, A = inst.n, inst.b, inst.A
    best, pair = -np.inf, None
    for i in range(n):
        for j in range(i + 1, n):
            viol = b[i] + b[j] + 4.0 * SQRT2 * max(A[i, j], 0.0)
            if viol > best:
                best, pair = viol, (i, j)
    if best <= tol:
        return _inconclusive(name, worst_violation=float(best))
    i, j = pair
    return _nonconvex(
        name, inst, cone, _basis_pair_candidates(n, i, j), pair=pair, violation=float(best)
    )


def cert_bminus_positive(inst, cone, tol=None):
    """For entrywise-positive A, ||b_-|| >= 2[lam_max - lam_min] is necessary."""
    name = "bminus.perron"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if not linalg.perron_check(inst.A):
        return _na(name, "matrix entries are not all strictly positive")
    w, V = np.linalg.eigh(inst.A)
    spread = float(w[-1] - w[0])
    b_minus = float(np.linalg.norm(np.maximum(-inst.b, 0.0)))
    detail = {"b_minus_norm": b_minus, "required": 2.0 * spread}
    if spread <= tol:
        return _inconclusive(name, reason="eigenvalue spread is numerically zero", **detail)
    if b_minus >= 2.0 * spread - tol:
        return _inconclusive(name, **detail)
    u = V[:, 0]
    v = V[:, -1]
    if v.sum() < 0:
        v = -v
    # Perron direction of a positive matrix: clamp rounding noise into the cone.
    v = np.maximum(v, 0.0)
    v /= np.linalg.norm(v)
    return _nonconvex(name, inst, cone, [(u, v)], **detail)


def cert_diag_argmin_bound(inst, cone, tol=None):
    """Components of b off the diagonal argmin must be <= 0; at the argmin,
    b_m <= -max_i (b_i + 4 a_mi^+)."""
    name = "b.argmin"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    if float(np.linalg.norm(inst.A)) <= PATTERN_TOL:
        return _na(name, "zero matrix is handled by the affine certificate")
    n, b, A = inst.n, inst.b, inst.A
    d = np.diag(A)
    argmin = set(_diag_argmin_set(d).tolist())
    m0 = int(np.argmin(d))
    cands = []
    for i in range(n):
        if i not in argmin and b[i] > tol:
            cands.append((_basis(n, m0), _basis(n, i)))
    for m in sorted(argmin):
        others = [i for i in range(n) if i != m]
        scores = [b[i] + 4.0 * max(A[m, i], 0.0) for i in others]
        k = int(np.argmax(scores))
        if b[m] + scores[k] > tol:
            cands += _basis_pair_candidates(n, m, others[k])
    if cands:
        return _nonconvex(name, inst, cone, cands, argmin=sorted(argmin))
    return _inconclusive(name, argmin=sorted(argmin))


def cert_deleted_submatrix(inst, cone, tol=None):
    """If deleting any argmin row/column leaves lam_min at most the deleted
    diagonal entry, then every component of b must be <= 0."""
    name = "submatrix.deleted"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    n, b, A = inst.n, inst.b, inst.A
    d = np.diag(A)
    argmin = _diag_argmin_set(d)
    keep = {}
    for m in argmin.tolist():
        idx = [i for i in range(n) if i != m]
        minor = A[np.ix_(idx, idx)]
        lam = float(np.linalg.eigvalsh(minor)[0])
        if lam > d[m] + 1e-12:
            return _na(name, "deleted-submatrix eigenvalue exceeds the diagonal minimum")
        keep[m] = (idx, minor, lam)
    worst = int(np.argmax(b))
    if b[worst] <= tol:
        return _inconclusive(name)
    if worst in keep:
        idx, minor, lam = keep[worst]
        _, w = linalg.smallest_eigenvalue(minor)
        u = np.zeros(n)
        u[idx] = w
        u /= np.linalg.norm(u)
        return _nonconvex(
            name, inst, cone, [(u, _basis(n, worst))], violating_index=worst, minor_lambda=lam
        )
    m0 = int(np.argmin(d))
    return _nonconvex(
        name, inst, cone, [(_basis(n, m0), _basis(n, worst))], violating_index=worst
    )


def cert_theta_scan(inst, cone, tol=None):
    """Scan every two-coordinate rotation family for a negative slack.

    For each ordered pair (i, j) the slack along
    u = cos(t) e^i - sin(t) e^j, v = sin(t) e^i + cos(t) e^j, t in [0, pi/2],
    is a trigonometric polynomial minimized by a dense grid plus
    golden-section refinement.
    """
    name = "theta.scan"
    tol = inequality_tol(inst) if tol is None else tol
    if cone.kind != ORTHANT:
        return _na(name, "requires the nonnegative orthant")
    n = inst.n
    best = (np.inf, None, None)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            theta, val = rotation_slack_min(inst, i, j)
            if val < best[0]:
                best = (val, theta, (i, j))
    val, theta, pair = best
    if val >= -tol:
        return _inconclusive(name, min_slack=float(val))
    i, j = pair
    u, v = rotation_pair(n, i, j, theta)
    return _nonconvex(name, inst, cone, [(u, v)], pair=pair, theta=float(theta), min_slack=float(val))


# ---------------------------------------------------------------------------
# battery

#: Registry order: exact conditions first, then sufficient, then necessary,
#: so the cheapest conclusive answer is found first.
REGISTRY: tuple[tuple[str, object], ...] = (
    ("affine", cert_affine),
    ("iffdiag", cert_diag_iff),
    ("rankone", cert_rank_one_basis),
    ("crosspair", cert_offdiag_pair),
    ("zmatrix", cert_zmatrix),
    ("thlt.vi.gap", cert_gap_sufficient),
    ("bipos", cert_bipos),
    ("cd.iii", cert_decomposition),
    ("copos.chain", cert_copositive_chain),
    ("pairsum", cert_pair_sums),
    ("mix.offdiag", cert_offdiag_mix),
    ("pairsum.offdiag", cert_pair_vs_offdiag),
    ("bminus.perron", cert_bminus_positive),
    ("b.argmin", cert_diag_argmin_bound),
    ("submatrix.deleted", cert_deleted_submatrix),
    ("theta.scan", cert_theta_scan),
)

CERTIFICATE_NAMES = tuple(name for name, _ in REGISTRY)

assert len(set(CERTIFICATE_NAMES)) == len(CERTIFICATE_NAMES)


class CertificateContradiction(RuntimeError):
    """Two certificates returned opposite conclusive verdicts.

    The underlying conditions are mutually consistent, so this always means
    an implementation bug rather than a property of the instance.
    """

    def __init__(self, outcomes):
        self.outcomes = outcomes
        names = ", ".join(f"{o.name}={o.verdict.value}" for o in outcomes)
        super().__init__(f"contradictory certificate verdicts: {names}")


@dataclass(frozen=True)
class BatteryConfig:
    exhaustive: bool = False
    only: tuple[str, ...] | None = None
    tol_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.only is not None:
            unknown = set(self.only) - set(CERTIFICATE_NAMES)
            if unknown:
                raise ValueError(f"unknown certificate names: {sorted(unknown)}")


@dataclass(frozen=True)
class BatteryResult:
    outcomes: tuple[CertificateOutcome, ...]
    verdict: Verdict | None  # conclusive verdict, if any
    fired_by: str | None

    def outcome(self, name: str) -> CertificateOutcome | None:
        for o in self.outcomes:
            if o.name == name:
                return o
        return None


def check_consistency(outcomes) -> None:
    """Raise :class:`CertificateContradiction` on opposite conclusive verdicts."""
    convex = [o for o in outcomes if o.verdict is Verdict.PROVES_CONVEX]
    nonconvex = [o for o in outcomes if o.verdict is Verdict.PROVES_NONCONVEX]
    if convex and nonconvex:
        raise CertificateContradiction(convex + nonconvex)


def run_battery(inst: QuadraticInstance, cone: Cone, config: BatteryConfig | None = None) -> BatteryResult:
    """Run the registry in order, stopping at the first conclusive verdict
    unless ``config.exhaustive`` asks for every outcome."""
    config = config or BatteryConfig()
    outcomes = []
    for name, func in REGISTRY:
        if config.only is not None and name not in config.only:
            continue
        tol = config.tol_overrides.get(name)
        outcomes.append(func(inst, cone, tol=tol))
        if not config.exhaustive and outcomes[-1].verdict in (
            Verdict.PROVES_CONVEX,
            Verdict.PROVES_NONCONVEX,
        ):
            break
    check_consistency(outcomes)
    verdict = None
    fired_by = None
    for o in outcomes:
        if o.verdict in (Verdict.PROVES_CONVEX, Verdict.PROVES_NONCONVEX):
            verdict, fired_by = o.verdict, o.name
            break
    return BatteryResult(outcomes=tuple(outcomes), verdict=verdict, fired_by=fired_by)
