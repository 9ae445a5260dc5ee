"""Projections in an indefinite metric: selfadjoint, oblique, split, normal.

The normal-projection construction for a degenerate subspace S works inside
the regular complement of the regular part of S: the isotropic part S^o is
paired there with a neutral partner N = J_K S^o (J_K the local signature
operator), S^o [+] N is regular, and projecting onto S^o along N inside that
regular block extends the selfadjoint projection of the regular part to a
normal projection onto all of S. When S is regular the recipe collapses to
the selfadjoint projection.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    Operator,
    _subspace_direct,
    decompose_subspace,
    herm,
    ordered_eigh,
    orthogonal_companion,
    range_of,
    subspace_from_spanning,
)
from .errors import BadProjection, NotComplementary, NotRegular, NotSelfadjoint


class ProjectionKind(str, Enum):
    SELFADJOINT = "Selfadjoint"
    NORMAL = "Normal"
    OBLIQUE = "Oblique"


@dataclass(frozen=True)
class Projection:
    op: Operator
    range_sub: object
    kind: ProjectionKind

    @property
    def matrix(self):
        return self.op.matrix


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def selfadjoint_projection(s):
    """The selfadjoint projection onto a regular subspace.

    Q = basis (basis* G basis)^-1 basis* G; null space is S^[⊥].
    """
    if not s.classification.regular:
        raise NotRegular("selfadjoint projection needs a regular subspace")
    sp = s.space
    if s.dim == 0:
        q = np.zeros((sp.dim, sp.dim), dtype=complex)
    else:
        q = s.basis @ np.linalg.solve(s.gram_restricted, s.basis.conj().T @ sp.gram)
    return Projection(Operator(sp, q), s, ProjectionKind.SELFADJOINT)


def oblique_projection(m, n):
    """P with range M and null space N, for complementary M and N."""
    sp = m.space
    if m.dim + n.dim != sp.dim:
        raise NotComplementary("dimensions do not add up to the space")
    w = np.hstack([m.basis, n.basis])
    if sp.rank(w) != sp.dim:
        raise NotComplementary("M + N does not span the space")
    coeff = np.linalg.inv(w)[: m.dim]
    return Projection(Operator(sp, m.basis @ coeff), m, ProjectionKind.OBLIQUE)


def ando_split(q):
    """Split a selfadjoint projection into definite selfadjoint parts.

    Q = Q+ + Q- with R(Q+) uniformly positive, R(Q-) uniformly negative and
    Q+Q- = Q-Q+ = 0; the parts are pinned by the space's cached fundamental
    decomposition.
    """
    op = q.op
    tol = op.space.tol.num * max(1.0, op.norm())
    if (op.adjoint() - op).norm() > tol:
        raise NotSelfadjoint("ando_split needs a selfadjoint projection")
    s_plus, s_minus = decompose_subspace(q.range_sub)
    return selfadjoint_projection(s_plus), selfadjoint_projection(s_minus)


def normal_projection(s):
    """One normal projection (QQ# = Q#Q) onto an arbitrary subspace."""
    sp = s.space
    w, u = ordered_eigh(s.gram_restricted)
    thr = sp.neutral_cutoff()
    zero = np.abs(w) <= thr
    s_iso = _subspace_direct(sp, s.basis @ u[:, zero])
    s_reg = _subspace_direct(sp, s.basis @ u[:, ~zero])

    if s_reg.dim == s.dim:
        q1 = selfadjoint_projection(s_reg)
        return Projection(q1.op, s, ProjectionKind.NORMAL)

    if s_reg.dim:
        q1 = selfadjoint_projection(s_reg).matrix
    else:
        q1 = np.zeros((sp.dim, sp.dim), dtype=complex)

    # regular complement of the regular part; everything else happens inside it
    comp = orthogonal_companion(s_reg)
    bk = comp.basis
    gk = herm(bk.conj().T @ sp.gram @ bk)
    wk, vk = ordered_eigh(gk)
    jk = (vk * np.sign(wk)) @ vk.conj().T

    coeff_iso = bk.conj().T @ sp.metric @ s_iso.basis
    partner = _subspace_direct(sp, bk @ (jk @ coeff_iso))

    stacked = np.hstack([s_iso.basis, partner.basis])
    block = subspace_from_spanning(sp, stacked)
    p_block = selfadjoint_projection(block).matrix
    onto_iso = s_iso.basis @ np.linalg.pinv(stacked)[: s_iso.dim]

    eye = np.eye(sp.dim)
    q = q1 + onto_iso @ p_block @ (eye - q1)
    return Projection(Operator(sp, q), s, ProjectionKind.NORMAL)


def companion_identity_check(q, y):
    """Whether Q#(I - Q)y = 0; equivalent to y ∈ S + S^[⊥] for normal Q."""
    sp = q.op.space
    y = np.asarray(y, dtype=complex).reshape(sp.dim)
    residual = q.op.adjoint().matrix @ (y - q.matrix @ y)
    return bool(np.linalg.norm(residual) <= sp.tol.num * np.linalg.norm(y))


def projection_from_matrix(space, matrix):
    """Wrap a hand-built idempotent, inferring the strongest kind."""
    op = Operator(space, matrix)
    scale = max(1.0, op.norm())
    if (op @ op - op).norm() > space.tol.num * scale**2:
        raise BadProjection("matrix is not idempotent")
    adj = op.adjoint()
    if (adj - op).norm() <= space.tol.num * scale:
        kind = ProjectionKind.SELFADJOINT
    elif (op @ adj - adj @ op).norm() <= space.tol.num * scale**2:
        kind = ProjectionKind.NORMAL
    else:
        kind = ProjectionKind.OBLIQUE
    # rank of an idempotent is its trace; immune to borderline singular values
    rank = min(max(int(round(op.matrix.trace().real)), 0), space.dim)
    return Projection(op, range_of(op, rank=rank), kind)
