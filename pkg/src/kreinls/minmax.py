"""Min-max operator approximation via range splitting.

An operator with indefinite range splits as B = B+ + B-, where the parts
are the compressions of B to the positive and negative halves of a
fundamental decomposition of R(B). The mixed problem min-max over (X, Y)
of (B+X + B-Y - C)#(...) decouples because B+#B- = 0, and both orders of
optimization attain the same value.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    Operator,
    contains_columns,
    decompose_subspace,
    herm,
    neutral_range,
    nullspace_of,
    orthogonal_companion,
    range_of,
    subspace_sum,
)
from .errors import InfeasibleInstance, SpaceMismatch
from .ils import SolutionManifold, SolveReport, normal_equation_solution
from .projections import selfadjoint_projection


@dataclass(frozen=True)
class OperatorSplit:
    """B = b_plus + b_minus with R(b_plus) ⊆ s_plus, R(b_minus) ⊆ s_minus."""

    b_plus: Operator
    b_minus: Operator
    s_plus: object
    s_minus: object


def split_operator(b):
    """Split B along a fundamental decomposition of its range.

    The parts are P± B where P± is the metric-orthogonal projection onto
    the corresponding half; by construction b_plus#b_minus = 0 and the two
    ranges are both indefinitely and metrically orthogonal.
    """
    sp = b.space
    s_plus, s_minus = decompose_subspace(range_of(b))
    m = sp.metric

    def compress(sub):
        p = sub.basis @ sub.basis.conj().T @ m
        return Operator(sp, p @ b.matrix)

    return OperatorSplit(compress(s_plus), compress(s_minus), s_plus, s_minus)


def solve_immso(b, c, seed=0):
    """Stationary (min-max) problem: B#(BZ - C) = 0 with no sign condition.

    Feasible iff R(C) ⊆ R(B) + R(B)^[⊥]. The minimum-norm particular
    solution doubles as the Z1 component; the Z2 = Z0 - Z1 part ranges
    over N(B#B).
    """
    range_sub = range_of(b)
    inclusion = contains_columns(
        subspace_sum(range_sub, orthogonal_companion(range_sub)), c.matrix
    )
    conditions = {"range_inclusion": inclusion}
    if not inclusion:
        return SolveReport(False, "RangeInclusionFails", conditions, None, None, 0.0, {}, seed)

    z1, residual = normal_equation_solution(b, c)
    value = (b @ z1 - c).adjoint() @ (b @ z1 - c)
    manifold = SolutionManifold(z1, nullspace_of(b.adjoint() @ b))
    certs = {"value_spectrum": np.linalg.eigvalsh(herm(b.space.gram @ value.matrix))}
    if range_sub.classification.regular:
        q = selfadjoint_projection(range_sub).op
        closed = c.adjoint() @ (c.space.eye() - q) @ c
        certs["value_formula_residual"] = (value - closed).norm() / max(1.0, value.norm())
    return SolveReport(True, None, conditions, manifold, value, residual, certs, seed)


def verify_immso(z0, b, c, j=None, seed=0):
    """Check Z0 against the stationary problem: R(B(Z0 - Z1)) must be neutral.

    Z1 is the minimum-norm normal-equation solution; it depends on the
    fundamental symmetry only through the norm being minimized, so an
    alternative symmetry J' may be supplied (operator or matrix) to run
    the check in that decomposition's metric.
    """
    sp = b.space
    range_sub = range_of(b)
    if not contains_columns(
        subspace_sum(range_sub, orthogonal_companion(range_sub)), c.matrix
    ):
        raise InfeasibleInstance("stationary problem has no solution for this right-hand side")
    metric = None
    if j is not None:
        jm = j.matrix if isinstance(j, Operator) else np.asarray(j, dtype=complex)
        metric = herm(sp.gram @ jm)
    z1, _ = normal_equation_solution(b, c, metric=metric)
    gap = b @ (z0 - z1)
    # a gap that is roundoff relative to the problem data is a zero gap
    scale = b.norm() * max(z0.norm(), z1.norm(), 1.0)
    if gap.norm() <= sp.tol.num * max(scale, 1.0):
        return True
    return neutral_range(gap)


def random_fundamental_symmetry(space, rng, scale=0.3):
    """A random J' = U J U# with U = exp(W - W#) a Krein-space unitary."""
    n = space.dim
    w = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    w_op = Operator(space, w)
    a = (w_op - w_op.adjoint()).matrix
    u = scipy.linalg.expm(a)
    u_sharp = Operator(space, u).adjoint().matrix
    return Operator(space, u @ space.j @ u_sharp)


def _half_solution(bb, cc):
    if bb.norm() == 0.0:
        return bb.space.zero()
    return normal_equation_solution(bb, cc)[0]


def minmax_value_identity(b, c):
    """Attained values of both optimization orders over the split of B.

    Returns (value_minmax, value_maxmin): first minimize over the positive
    part then maximize over the negative one, and the reverse. A zero part
    makes its stage vacuous (the corresponding variable is fixed at 0).
    """
    if b.space is not c.space:
        raise SpaceMismatch("operators live on different spaces")
    range_sub = range_of(b)
    if not contains_columns(
        subspace_sum(range_sub, orthogonal_companion(range_sub)), c.matrix
    ):
        raise InfeasibleInstance("min-max problem has no solution for this right-hand side")

    split = split_operator(b)

    def attained(x, y):
        r = split.b_plus @ x + split.b_minus @ y - c
        return r.adjoint() @ r

    # max over Y of (min over X): the inner minimizer does not depend on Y
    x0 = _half_solution(split.b_plus, c)
    y0 = _half_solution(split.b_minus, c - split.b_plus @ x0)
    value_maxmin = attained(x0, y0)

    # min over X of (max over Y), mirrored
    y1 = _half_solution(split.b_minus, c)
    x1 = _half_solution(split.b_plus, c - split.b_minus @ y1)
    value_minmax = attained(x1, y1)

    return value_minmax, value_maxmin
