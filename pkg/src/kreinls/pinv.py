"""Generalized inverses: {1,2}-inverses, the Krein Moore-Penrose inverse,
normal-projection inverse pairs, and the minimal-X#X solution of BX = C.

The central object is the factorization D = (I-P) Btilde Q: picking normal
projections Q onto R(B) and P onto N(B) yields a {1,2}-inverse with BD = Q
and DB = I-P, independent of the {1,2}-inverse Btilde used to build it.
Selfadjoint choices recover the Moore-Penrose inverse when it exists.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    Operator,
    classify,
    contains_columns,
    herm,
    hilbert_pinv,
    isotropic_part,
    nullspace_of,
    orthogonal_companion,
    range_of,
    subspace_equal,
    subspace_from_spanning,
    subspace_sum,
    subspace_within,
    zero_subspace,
)
from .errors import BadProjection
from .ils import SolutionManifold, SolveReport, _join_reasons, solve_ims
from .projections import (
    Projection,
    ProjectionKind,
    normal_projection,
    projection_from_matrix,
    selfadjoint_projection,
)


class GeneralizedInverseKind(str, Enum):
    MOORE_PENROSE = "MoorePenrose"
    NORMAL_PAIR = "NormalPair"
    ONE_TWO = "OneTwo"


@dataclass(frozen=True)
class GeneralizedInverse:
    d: Operator
    q: Projection
    p: Projection
    kind: GeneralizedInverseKind


def one_two_inverse(b):
    """The metric pseudoinverse, as the canonical {1,2}-inverse of B."""
    return Operator(b.space, hilbert_pinv(b.space, b.matrix))


def one_two_pair(b):
    """Wrap the canonical {1,2}-inverse with its projection pair.

    BD and I - DB are metric-orthogonal projections with the right ranges
    but in general fail normality in the indefinite product, hence the
    OneTwo kind.
    """
    sp = b.space
    d = one_two_inverse(b)
    q = projection_from_matrix(sp, (b @ d).matrix)
    p = projection_from_matrix(sp, (sp.eye() - d @ b).matrix)
    return GeneralizedInverse(d, q, p, GeneralizedInverseKind.ONE_TWO)


def _require_normal_onto(space, proj, target, label):
    """Q must be idempotent, commute with Q#, and have the given range."""
    op = proj.op if isinstance(proj, Projection) else proj
    if not isinstance(op, Operator):
        op = Operator(space, np.asarray(op, dtype=complex))
    sp = op.space
    scale = max(1.0, op.norm()) ** 2
    tol = sp.tol.num * scale
    if (op @ op - op).norm() > tol:
        raise BadProjection(f"{label} is not idempotent")
    sharp = op.adjoint()
    if (op @ sharp - sharp @ op).norm() > tol:
        raise BadProjection(f"{label} does not commute with its adjoint")
    # the trace pins the rank of an idempotent, so a formed product with
    # borderline trash singular values cannot sway the range comparison
    rank = min(max(int(round(op.matrix.trace().real)), 0), sp.dim)
    if not subspace_equal(range_of(op, rank=rank), target):
        raise BadProjection(f"{label} projects onto the wrong subspace")
    return op


def _pair_kind(b, d):
    sp = b.space
    bd = b @ d
    db = d @ b
    tol = sp.tol.num * max(1.0, b.norm() * d.norm())
    selfadj = (bd.adjoint() - bd).norm() <= tol and (db.adjoint() - db).norm() <= tol
    return GeneralizedInverseKind.MOORE_PENROSE if selfadj else GeneralizedInverseKind.NORMAL_PAIR


def generalized_inverse(b, q, p):
    """D = (I-P) Btilde Q for validated normal projections Q, P.

    Solves the four-identity system BDB = B, DBD = D with BD and DB both
    normal; the factorization does not depend on which {1,2}-inverse
    Btilde is used.
    """
    sp = b.space
    q_op = _require_normal_onto(sp, q, range_of(b), "Q")
    p_op = _require_normal_onto(sp, p, nullspace_of(b), "P")
    d = (sp.eye() - p_op) @ one_two_inverse(b) @ q_op
    q_proj = q if isinstance(q, Projection) else projection_from_matrix(sp, q_op.matrix)
    p_proj = p if isinstance(p, Projection) else projection_from_matrix(sp, p_op.matrix)
    return GeneralizedInverse(d, q_proj, p_proj, _pair_kind(b, d))


def rebuild_generalized_inverse(b, d):
    """Recover (Q, P) = (BD, I-DB) from a pair solution and rebuild D."""
    sp = b.space
    q = projection_from_matrix(sp, (b @ d).matrix)
    p = projection_from_matrix(sp, (sp.eye() - d @ b).matrix)
    return generalized_inverse(b, q, p)


def canonical_pair(b):
    """Generalized inverse from the canonical normal projections.

    Always defined in finite dimension; reduces to the Moore-Penrose
    inverse when R(B) and N(B) are regular.
    """
    return generalized_inverse(b, normal_projection(range_of(b)), normal_projection(nullspace_of(b)))


def krein_moore_penrose(b, seed=0):
    """B† = P' Btilde Q with selfadjoint Q onto R(B), P' onto N(B)^[⊥].

    Exists iff both R(B) and N(B) are regular. The report's certificates
    carry the four defining residuals, the projection matches, and a
    uniqueness check that rebuilds B† from a {1,2}-inverse taken in a
    randomly perturbed positive metric.
    """
    sp = b.space
    range_reg = classify(range_of(b)).regular
    null_sub = nullspace_of(b)
    null_reg = classify(null_sub).regular
    conditions = {"range_regular": range_reg, "nullspace_regular": null_reg}
    reason = _join_reasons(
        [(range_reg, "RangeNotRegular"), (null_reg, "NullspaceNotRegular")]
    )
    if reason is not None:
        return SolveReport(False, reason, conditions, None, None, 0.0, {}, seed)

    q = selfadjoint_projection(range_of(b)).op
    p_prime = selfadjoint_projection(orthogonal_companion(null_sub)).op
    bt = one_two_inverse(b)
    bdag = p_prime @ bt @ q

    bd = b @ bdag
    db = bdag @ b
    certs = {
        "identity_bdb": (bd @ b - b).norm(),
        "identity_dbd": (db @ bdag - bdag).norm(),
        "selfadjoint_bd": (bd.adjoint() - bd).norm(),
        "selfadjoint_db": (db.adjoint() - db).norm(),
        "projection_q": (bd - q).norm(),
        "projection_p": (db - p_prime).norm(),
    }

    rng = np.random.default_rng(seed)
    n = sp.dim
    w = np.eye(n) + 0.25 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    other_metric = herm(w.conj().T @ sp.metric @ w)
    bt2 = Operator(sp, hilbert_pinv(sp, b.matrix, metric=other_metric))
    bdag2 = p_prime @ bt2 @ q
    certs["uniqueness_rebuild_dev"] = (bdag2 - bdag).norm() / max(1.0, bdag.norm())

    manifold = SolutionManifold(bdag, zero_subspace(sp))
    residual = certs["identity_bdb"]
    return SolveReport(True, None, conditions, manifold, None, residual, certs, seed)


def reduced_generalized_inverse(b, q, p_prime):
    """D = (I-P') Btilde' Q#Q from the reduced operator B' = Q#B.

    Q must be normal onto R(B) and P' normal onto N(B#B); then B'DB' = B',
    DB'D = D and B'D = Q#Q.
    """
    sp = b.space
    q_op = _require_normal_onto(sp, q, range_of(b), "Q")
    null_bb = nullspace_of(b.adjoint() @ b)
    p_op = _require_normal_onto(sp, p_prime, null_bb, "P'")
    b_red = q_op.adjoint() @ b
    bt = Operator(sp, hilbert_pinv(sp, b_red.matrix))
    return (sp.eye() - p_op) @ bt @ (q_op.adjoint() @ q_op)


def solve_min_ims_norm(b, c, seed=0):
    """Minimize X#X over the indefinite-least-squares solutions of BX = C.

    Solvable iff R(B) and N(B#B) are nonnegative and R(C) lies inside
    B(N(B#B)^[⊥]) + R(B)^[⊥]. The minimizer is X1 = DC for the reduced
    generalized inverse D built from canonical normal projections;
    equivalently X1 = (I-P')X0 for any normal-equation solution X0.
    """
    sp = b.space
    range_sub = range_of(b)
    null_bb = nullspace_of(b.adjoint() @ b)
    range_ok = range_sub.classification.nonnegative
    null_ok = null_bb.classification.nonnegative
    reachable = subspace_sum(
        subspace_from_spanning(sp, b.matrix @ orthogonal_companion(null_bb).basis),
        orthogonal_companion(range_sub),
    )
    inclusion = contains_columns(reachable, c.matrix)
    conditions = {
        "range_nonnegative": range_ok,
        "nullspace_nonnegative": null_ok,
        "range_inclusion": inclusion,
    }
    reason = _join_reasons(
        [
            (range_ok, "RangeNotNonnegative"),
            (null_ok, "NullspaceNotNonnegative"),
            (inclusion, "RangeInclusionFails"),
        ]
    )
    if reason is not None:
        return SolveReport(False, reason, conditions, None, None, 0.0, {}, seed)

    q = normal_projection(range_sub)
    p_prime = normal_projection(null_bb)
    d = reduced_generalized_inverse(b, q, p_prime)
    x1 = d @ c
    value = x1.adjoint() @ x1

    residual = (b.adjoint() @ (b @ x1 - c)).norm()
    certs = {
        "range_constraint": subspace_within(range_of(x1), orthogonal_companion(null_bb)),
        "value_spectrum": np.linalg.eigvalsh(herm(sp.gram @ value.matrix)),
    }
    if b.norm() > 0.0:
        ims = solve_ims(b, c, seed=seed)
        if ims.feasible:
            projected = (sp.eye() - p_prime.op) @ ims.solution
            certs["ims_consistency"] = (projected - x1).norm() / max(1.0, x1.norm())
    manifold = SolutionManifold(x1, isotropic_part(null_bb))
    return SolveReport(True, None, conditions, manifold, value, residual, certs, seed)


def mp_variational_check(b, seed=0):
    """Audit the equivalence ladder behind the Moore-Penrose inverse.

    The three conditions (minimal-X#X problem solvable for C = I),
    (R(B) and N(B) uniformly positive), and (B† exists with R(B), N(B)
    nonnegative) must agree; when they all hold, the variational solution,
    B†, and B†C for random C are cross-checked for equality and uniqueness.
    """
    sp = b.space
    r_cls = classify(range_of(b))
    n_cls = classify(nullspace_of(b))
    mp = krein_moore_penrose(b, seed=seed)
    mn = solve_min_ims_norm(b, sp.eye(), seed=seed)

    cond_min = mn.feasible
    cond_unif = r_cls.uniformly_positive and n_cls.uniformly_positive
    cond_mp = mp.feasible and r_cls.nonnegative and n_cls.nonnegative
    conditions = {
        "min_problem_solvable": cond_min,
        "subspaces_uniformly_positive": cond_unif,
        "moore_penrose_nonnegative": cond_mp,
    }
    agree = cond_min == cond_unif == cond_mp
    certs = {"ladder_agrees": agree}
    residual = 0.0
    if cond_min and cond_mp:
        bdag = mp.solution
        dev = (mn.solution - bdag).norm() / max(1.0, bdag.norm())
        certs["variational_equals_moore_penrose"] = dev
        certs["minimizer_unique"] = mn.manifold.perturbation_space.dim == 0
        rng = np.random.default_rng(seed)
        n = sp.dim
        worst = 0.0
        for _ in range(10):
            c = Operator(sp, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
            got = solve_min_ims_norm(b, c, seed=seed)
            ref = bdag @ c
            worst = max(worst, (got.solution - ref).norm() / max(1.0, ref.norm()))
        certs["random_rhs_max_dev"] = worst
        residual = dev

    manifold = mp.manifold if mp.feasible else (mn.manifold if mn.feasible else None)
    reason = None if agree else "EquivalenceLadderBroken"
    return SolveReport(agree, reason, conditions, manifold, mn.value, residual, certs, seed)
