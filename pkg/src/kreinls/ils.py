"""Indefinite inverses and operator least squares in the Krein order.

Solvers report rather than raise: a SolveReport carries feasibility, the
violated condition names when infeasible, the particular solution plus the
admissible perturbation space when feasible, the attained value operator,
and residual certificates. The particular solution is always the minimum
Hilbert-Frobenius-norm solution of the normal equation B#B X = B#C, which
reduces to the classical least-squares choice when G = I.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (
    Operator,
    contains_columns,
    full_subspace,
    herm,
    hilbert_pinv,
    isotropic_part,
    nullspace_of,
    orthogonal_companion,
    range_of,
    spectral_norm,
    subspace_sum,
    subspace_within,
)
from .oracle import certify_min
from .projections import normal_projection, selfadjoint_projection

REASON_NOT_REGULAR = "RangeNotRegular"
REASON_NOT_NONNEGATIVE = "RangeNotNonnegative"
REASON_NOT_NONPOSITIVE = "RangeNotNonpositive"
REASON_INCLUSION = "RangeInclusionFails"
REASON_ZERO_OPERATOR = "ZeroOperator"


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionManifold:
    """Affine solution set: particular + {Y : R(Y) ⊆ perturbation_space}."""

    particular: Operator
    perturbation_space: object

    def member(self, coeff):
        """particular + basis @ coeff, coeff of shape (dim, n)."""
        basis = self.perturbation_space.basis
        coeff = np.asarray(coeff, dtype=complex).reshape(basis.shape[1], -1)
        return Operator(self.particular.space, self.particular.matrix + basis @ coeff)

    def sample(self, rng, scale=1.0):
        k = self.perturbation_space.dim
        n = self.particular.space.dim
        coeff = scale * (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
        return self.member(coeff)


@dataclass(frozen=True)
class SolveReport:
    feasible: bool
    reason: str | None
    conditions: dict
    manifold: SolutionManifold | None
    value: Operator | None
    residual_normal_eq: float
    certificates: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def solution(self):
        return self.manifold.particular if self.manifold is not None else None


def _join_reasons(checks):
    failed = [reason for ok, reason in checks if not ok]
    return "+".join(failed) if failed else None


# ---------------------------------------------------------------------------
# shared solver pieces
# ---------------------------------------------------------------------------

def normal_equation_solution(b, c, metric=None):
    """Minimum-norm solution of B#B X = B#C and its residual norm.

    The norm being minimized is the Hilbert-Frobenius norm of the metric
    (the space's cached one unless another positive-definite metric is
    supplied, e.g. from an alternative fundamental decomposition).
    """
    badj = b.adjoint()
    a = (badj @ b).matrix
    f = (badj @ c).matrix
    # B#B annihilates any neutral range direction exactly, but the float
    # product leaves residue of this size there; without the floor a pure
    # roundoff singular value can survive the relative cutoff and get
    # inverted.
    noise = b.space.dim * np.finfo(float).eps * max(1.0, badj.norm() * b.norm())
    x0 = hilbert_pinv(b.space, a, metric=metric, floor=noise) @ f
    return Operator(b.space, x0), spectral_norm(a @ x0 - f)


def _attained_value(b, c, x0):
    r = b @ x0 - c
    return r.adjoint() @ r


def _value_spectrum(value):
    return np.linalg.eigvalsh(herm(value.space.gram @ value.matrix))


def _inclusion_in_range_plus_companion(c, range_sub):
    return contains_columns(subspace_sum(range_sub, orthogonal_companion(range_sub)), c.matrix)


def _value_certificates(b, c, x0, value, range_sub):
    """Closed-form cross-checks attached to min/max reports."""
    certs = {"value_spectrum": _value_spectrum(value)}
    cls = range_sub.classification
    if cls.regular:
        q = selfadjoint_projection(range_sub).op
        closed = c.adjoint() @ (c.space.eye() - q) @ c
        certs["value_formula_residual"] = (value - closed).norm() / max(1.0, value.norm())
    elif cls.nonnegative or cls.nonpositive:
        iso = isotropic_part(range_sub)
        rhs_ok = contains_columns(orthogonal_companion(iso), c.matrix)
        certs["isotropic_companion_contains_rhs"] = rhs_ok
        q = normal_projection(range_sub).op
        if rhs_ok:
            closed = c.adjoint() @ (c.space.eye() - q) @ c
            certs["value_formula_residual"] = (value - closed).norm() / max(1.0, value.norm())
        certs["isotropic_containment"] = subspace_within(
            range_of(b @ x0 - q @ c), iso
        )
    return certs


def _solve_extremal(b, c, sign_condition, sign_reason, seed):
    """Common body of solve_ims / solve_imax."""
    sp = b.space
    if b.norm() == 0.0:
        # zero operator contract: solvable only against a zero right-hand side
        conditions = {"zero_operator": True, "rhs_zero": c.norm() == 0.0}
        if conditions["rhs_zero"]:
            manifold = SolutionManifold(sp.zero(), full_subspace(sp))
            return SolveReport(True, None, conditions, manifold, sp.zero(), 0.0, {}, seed)
        return SolveReport(False, REASON_ZERO_OPERATOR, conditions, None, None, 0.0, {}, seed)

    range_sub = range_of(b)
    cls = range_sub.classification
    inclusion = _inclusion_in_range_plus_companion(c, range_sub)
    sign_ok = sign_condition(cls)
    conditions = {"range_inclusion": inclusion, sign_reason[0]: sign_ok}
    reason = _join_reasons([(inclusion, REASON_INCLUSION), (sign_ok, sign_reason[1])])
    if reason is not None:
        return SolveReport(False, reason, conditions, None, None, 0.0, {}, seed)

    x0, residual = normal_equation_solution(b, c)
    value = _attained_value(b, c, x0)
    manifold = SolutionManifold(x0, nullspace_of(b.adjoint() @ b))
    certs = _value_certificates(b, c, x0, value, range_sub)
    return SolveReport(True, None, conditions, manifold, value, residual, certs, seed)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def has_indefinite_inverse(b):
    """B#(BX - I) = 0 is solvable exactly when R(B) is regular."""
    return range_of(b).classification.regular


def regular_range_rank_check(b):
    """Independent regularity test: R(B#) = R(B#B) as a rank statement."""
    sp = b.space
    bs = b.adjoint().matrix
    return sp.rank(bs) == sp.rank(bs @ b.matrix)


def indefinite_inverse(b, seed=0):
    """Solve B#(BX - I) = 0; solutions are X0 + {Y : R(Y) ⊆ N(B)}."""
    sp = b.space
    range_sub = range_of(b)
    regular = range_sub.classification.regular
    conditions = {"range_regular": regular}
    certs = {"regularity_rank_remark": regular_range_rank_check(b)}
    if not regular:
        return SolveReport(False, REASON_NOT_REGULAR, conditions, None, None, 0.0, certs, seed)

    q = selfadjoint_projection(range_sub).op
    x0 = Operator(sp, hilbert_pinv(sp, b.matrix) @ q.matrix)
    eye = sp.eye()
    bx = b @ x0
    residual = (b.adjoint() @ (bx - eye)).norm()
    certs["inner_inverse_residual"] = (bx @ b - b).norm()
    certs["projection_selfadjoint_residual"] = (bx.adjoint() - bx).norm()
    certs["projection_match_residual"] = (bx - q).norm()
    manifold = SolutionManifold(x0, nullspace_of(b))
    value = _attained_value(b, eye, x0)
    return SolveReport(True, None, conditions, manifold, value, residual, certs, seed)


def indefinite_inverse_in_range(b, c, seed=0):
    """Solve B#(BX - C) = 0; feasible iff R(C) ⊆ R(B) + R(B)^[⊥]."""
    range_sub = range_of(b)
    inclusion = _inclusion_in_range_plus_companion(c, range_sub)
    conditions = {"range_inclusion": inclusion}
    if not inclusion:
        return SolveReport(False, REASON_INCLUSION, conditions, None, None, 0.0, {}, seed)

    x0, residual = normal_equation_solution(b, c)
    certs = {}
    if range_sub.classification.regular:
        q = selfadjoint_projection(range_sub).op
        certs["projected_equation_residual"] = (b @ x0 - q @ c).norm()
    manifold = SolutionManifold(x0, nullspace_of(b.adjoint() @ b))
    return SolveReport(True, None, conditions, manifold, None, residual, certs, seed)


def solve_ims(b, c, seed=0):
    """Minimum of (BX-C)#(BX-C) in the Krein operator order.

    Feasible iff R(C) ⊆ R(B) + R(B)^[⊥] and R(B) is nonnegative; the
    minimizers are exactly the normal-equation solutions, and the attained
    value matches C#(I-Q)C whenever the closed form applies (selfadjoint Q
    for regular ranges, any normal Q for degenerate nonnegative ones).
    """
    return _solve_extremal(
        b, c, lambda cls: cls.nonnegative, ("range_nonnegative", REASON_NOT_NONNEGATIVE), seed
    )


def solve_imax(b, c, seed=0):
    """Maximum counterpart of solve_ims: R(B) must be nonpositive."""
    return _solve_extremal(
        b, c, lambda cls: cls.nonpositive, ("range_nonpositive", REASON_NOT_NONPOSITIVE), seed
    )


def verify_ims(x, b, c, trials=200, seed=0):
    """Accept X iff the normal equation holds and sampling finds no better competitor."""
    residual = (b.adjoint() @ (b @ x - c)).norm()
    scale = max(1.0, b.norm() * (b.norm() * x.norm() + c.norm()))
    if residual > b.space.tol.num * scale:
        return False
    return certify_min(b, c, x, trials=trials, seed=seed).verdict
