"""Finite-dimensional Krein spaces: Gram metrics, indefinite adjoints, subspaces.

A space is a pair (C^n, G) with G Hermitian and invertible; the indefinite
form is [x, y] = y* G x. Eigendecomposing G = V diag(w) V* yields the fixed
fundamental decomposition used everywhere: the signature operator
J = V sign(w) V*, and the positive-definite matrix M = G J of the associated
Hilbert inner product <x, y> = [Jx, y] = y* M x. Subspaces are stored with
<.,.>-orthonormal bases, which makes restricted Grams, principal angles and
the classification machinery directly assertable.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    NoFactorization,
    NotHermitian,
    SingularGram,
    SpaceMismatch,
)

_EPS = float(np.finfo(float).eps)


# ---------------------------------------------------------------------------
# tolerances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    """Numerical policy used by a space and everything built on it.

    sym      relative Hermitian-asymmetry tolerance
    num      relative tolerance for operator identities / residuals
    rank     relative singular-value cutoff for rank decisions;
             None means dim * machine_eps
    neutral  relative eigenvalue cutoff when classifying restricted Grams
    """

    sym: float = 1e-10
    num: float = 1e-10
    rank: float | None = None
    neutral: float = 1e-8

    def rank_factor(self, dim):
        return self.rank if self.rank is not None else dim * _EPS


# ---------------------------------------------------------------------------
# small linear-algebra helpers
# ---------------------------------------------------------------------------

def herm(a):
    """Hermitian part (a + a*)/2."""
    return (a + a.conj().T) / 2.0


def spectral_norm(a):
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def ordered_eigh(a):
    """eigh with eigenvalues sorted descending and deterministic phases.

    Each eigenvector is rotated so that its first component of magnitude
    above 1e-8 is real and positive; with the stable descending sort this
    pins the output bit-for-bit for a given input.
    """
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-8)
        if nz.size:
            pivot = col[nz[0]]
            v[:, k] = col * (abs(pivot) / pivot)
    return w, v


def _rank_from_singulars(s, factor):
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > factor * s[0]))


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------

class KreinSpace:
    """(C^n, G) together with its cached fundamental decomposition.

    Attributes of interest: gram, dim, signature (p, q), j (signature
    operator), metric (M = G J, positive definite), basis_plus / basis_minus
    (Hilbert-orthonormal frames of the definite halves; [b, b] = +1 resp. -1
    on their columns), tol.
    """

    def __init__(self, gram, tol=None):
        self.tol = tol if tol is not None else Tolerances()
        gram = np.asarray(gram, dtype=complex)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise DimensionMismatch("gram matrix must be square")
        n = gram.shape[0]
        scale = spectral_norm(gram)
        if scale == 0.0 or spectral_norm(gram - gram.conj().T) > self.tol.sym * scale:
            raise NotHermitian("gram matrix is not Hermitian within tolerance")
        gram = herm(gram)

        w, v = ordered_eigh(gram)
        if np.min(np.abs(w)) < self.tol.rank_factor(n) * np.max(np.abs(w)):
            raise SingularGram("gram matrix is numerically singular")

        pos = w > 0.0
        self.dim = n
        self.gram = gram
        self.gram_norm = float(np.max(np.abs(w)))
        self.signature = (int(np.count_nonzero(pos)), int(np.count_nonzero(~pos)))
        self.j = herm((v * np.sign(w)) @ v.conj().T)
        self.metric = herm((v * np.abs(w)) @ v.conj().T)
        self.basis_plus = v[:, pos] / np.sqrt(np.abs(w[pos]))
        self.basis_minus = v[:, ~pos] / np.sqrt(np.abs(w[~pos]))
        self._gram_inv = np.linalg.inv(gram)
        self._chol_r, self._chol_rinv = metric_factors(self.metric)
        for a in (self.gram, self.j, self.metric, self.basis_plus, self.basis_minus):
            a.setflags(write=False)

    def eye(self):
        return Operator(self, np.eye(self.dim, dtype=complex))

    def zero(self):
        return Operator(self, np.zeros((self.dim, self.dim), dtype=complex))

    def operator(self, matrix):
        return Operator(self, matrix)

    def neutral_cutoff(self):
        """Absolute eigenvalue cutoff for sign decisions on restricted Grams.

        Relative to the ambient Gram's norm, not to the restricted Gram's:
        a neutral subspace has restricted eigenvalues that are pure
        roundoff, so its own scale carries no information.
        """
        return self.tol.neutral * self.gram_norm

    def rank(self, a):
        """Numerical rank of a matrix at this space's cutoff."""
        a = np.asarray(a, dtype=complex)
        if a.size == 0:
            return 0
        s = np.linalg.svd(a, compute_uv=False)
        return _rank_from_singulars(s, self.tol.rank_factor(self.dim))

    def __repr__(self):
        return "KreinSpace(dim=%d, signature=%s)" % (self.dim, self.signature)


def make_space(gram, tol=None):
    """Validate a Hermitian invertible Gram matrix and build the space."""
    return KreinSpace(gram, tol)


def metric_factors(metric):
    """Upper-triangular R with metric = R* R, plus its inverse.

    R maps the metric's Hilbert geometry isometrically onto the standard one;
    every metric-aware computation funnels through this factor.
    """
    metric = herm(np.asarray(metric, dtype=complex))
    try:
        lower = np.linalg.cholesky(metric)
    except np.linalg.LinAlgError:
        raise SingularGram("metric is not positive definite")
    r = lower.conj().T
    return r, np.linalg.inv(r)


def hilbert_pinv(space, a, metric=None, floor=0.0):
    """Pseudoinverse with respect to a Hilbert metric (the space's by default).

    Conjugates with the Cholesky factor of the metric, applies the classical
    pseudoinverse, and maps back; the rank cutoff matches space.rank.

    `floor` is an absolute noise level in `a` below which singular values are
    treated as zero regardless of the relative cutoff.  Callers that form `a`
    as a product (e.g. B^#B) should pass the roundoff scale of that product:
    its largest singular value can be much smaller than the factors, and then
    a purely numerical singular value survives the relative test.
    """
    a = np.asarray(a, dtype=complex)
    if metric is None:
        r, rinv = space._chol_r, space._chol_rinv
    else:
        r, rinv = metric_factors(metric)
    m = r @ a @ rinv
    u, sing, vh = np.linalg.svd(m)
    cut = space.tol.rank_factor(space.dim) * (sing[0] if sing.size else 0.0)
    if floor:
        cut = max(cut, floor * spectral_norm(r) * spectral_norm(rinv))
    keep = sing > cut
    if not keep.any():
        return np.zeros_like(a.conj().T)
    inv = (vh[keep].conj().T / sing[keep]) @ u[:, keep].conj().T
    return rinv @ inv @ r


def indefinite_inner(space, x, y):
    """[x, y] = y* G x."""
    return complex(np.vdot(y, space.gram @ x))


def hilbert_inner(space, x, y):
    """<x, y> = y* M x (the cached positive-definite product)."""
    return complex(np.vdot(y, space.metric @ x))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Operator:
    """Dense complex matrix bound to a space."""

    space: KreinSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.space.dim
        if m.shape != (n, n):
            raise DimensionMismatch(
                "operator shape %s does not match space dim %d" % (m.shape, n)
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def _check(self, other):
        if self.space is not other.space:
            raise SpaceMismatch("operators bound to different spaces")

    def __matmul__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self):
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar):
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def adjoint(self):
        """Indefinite adjoint: the unique T# with [Tx, y] = [x, T#y]."""
        sp = self.space
        return Operator(sp, sp._gram_inv @ self.matrix.conj().T @ sp.gram)

    def norm(self):
        return spectral_norm(self.matrix)


def adjoint(t):
    """Indefinite adjoint of an operator (G^-1 T* G in coordinates)."""
    return t.adjoint()


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class SubspaceKind(str, Enum):
    ZERO = "Zero"
    UNIFORMLY_POSITIVE = "UniformlyPositive"
    UNIFORMLY_NEGATIVE = "UniformlyNegative"
    NONNEGATIVE_DEGENERATE = "NonnegativeDegenerate"
    NONPOSITIVE_DEGENERATE = "NonpositiveDegenerate"
    NEUTRAL = "Neutral"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class SubspaceClass:
    """Sign classification of a subspace via its restricted Gram's inertia."""

    kind: SubspaceKind
    regular: bool
    pseudo_regular: bool
    n_positive: int
    n_negative: int
    n_zero: int

    @property
    def isotropic_dim(self):
        return self.n_zero

    @property
    def nonnegative(self):
        return self.n_negative == 0

    @property
    def nonpositive(self):
        return self.n_positive == 0

    @property
    def uniformly_positive(self):
        return self.regular and self.nonnegative

    @property
    def uniformly_negative(self):
        return self.regular and self.nonpositive


def _classify_gram(gr, thr):
    k = gr.shape[0]
    if k == 0:
        return SubspaceClass(SubspaceKind.ZERO, True, True, 0, 0, 0)
    w = np.linalg.eigvalsh(gr)
    n_pos = int(np.count_nonzero(w > thr))
    n_neg = int(np.count_nonzero(w < -thr))
    n_zero = k - n_pos - n_neg
    if n_zero == k:
        kind = SubspaceKind.NEUTRAL
    elif n_pos == k:
        kind = SubspaceKind.UNIFORMLY_POSITIVE
    elif n_neg == k:
        kind = SubspaceKind.UNIFORMLY_NEGATIVE
    elif n_neg == 0:
        kind = SubspaceKind.NONNEGATIVE_DEGENERATE
    elif n_pos == 0:
        kind = SubspaceKind.NONPOSITIVE_DEGENERATE
    else:
        kind = SubspaceKind.INDEFINITE
    return SubspaceClass(kind, n_zero == 0, True, n_pos, n_neg, n_zero)


@dataclass(frozen=True)
class Subspace:
    """Column span with a canonical Hilbert-orthonormal basis.

    gram_restricted is basis* G basis exactly as stored; classification is
    derived from its eigenvalues at the space's neutral cutoff.
    """

    space: KreinSpace
    basis: np.ndarray
    gram_restricted: np.ndarray
    classification: SubspaceClass

    @property
    def dim(self):
        return self.basis.shape[1]


def _subspace_direct(space, basis):
    """Wrap columns that are already <.,.>-orthonormal (no re-spanning)."""
    basis = np.array(basis, dtype=complex).reshape(space.dim, -1)
    gr = herm(basis.conj().T @ space.gram @ basis)
    basis.setflags(write=False)
    gr.setflags(write=False)
    return Subspace(space, basis, gr, _classify_gram(gr, space.neutral_cutoff()))


def subspace_from_spanning(space, columns, rank=None):
    """Canonical subspace spanned by the given columns.

    The span is orthonormalized in the cached Hilbert product; the rank is
    decided at the space's singular-value cutoff unless the caller states
    it outright (useful when the rank is known exactly, e.g. the trace of
    an idempotent, and a formed product carries borderline roundoff).
    """
    a = np.asarray(columns, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    if a.shape[0] != space.dim:
        raise DimensionMismatch("spanning columns have wrong height")
    if a.shape[1] == 0:
        return _subspace_direct(space, np.zeros((space.dim, 0)))
    b = space._chol_r @ a
    u, s, _ = np.linalg.svd(b, full_matrices=False)
    if rank is None:
        rank = _rank_from_singulars(s, space.tol.rank_factor(space.dim))
    return _subspace_direct(space, space._chol_rinv @ u[:, :rank])


def zero_subspace(space):
    return _subspace_direct(space, np.zeros((space.dim, 0)))


def full_subspace(space):
    return subspace_from_spanning(space, np.eye(space.dim))


def classify(s):
    """Sign classification of a subspace (cached at construction)."""
    return s.classification


def isotropic_part(s):
    """S ∩ S^[⊥], read off the zero eigenvalues of the restricted Gram."""
    w, u = ordered_eigh(s.gram_restricted)
    thr = s.space.neutral_cutoff()
    return _subspace_direct(s.space, s.basis @ u[:, np.abs(w) <= thr])


def decompose_subspace(s):
    """Split S into a positive part and a nonpositive part.

    Eigenvectors of the restricted Gram with eigenvalue above the neutral
    cutoff span S+; the rest (including neutral directions) span S-. Both
    [S+, S-] = 0 and <S+, S-> = 0 hold by construction.
    """
    w, u = ordered_eigh(s.gram_restricted)
    thr = s.space.neutral_cutoff()
    pos = w > thr
    s_plus = _subspace_direct(s.space, s.basis @ u[:, pos])
    s_minus = _subspace_direct(s.space, s.basis @ u[:, ~pos])
    return s_plus, s_minus


def orthogonal_companion(s):
    """S^[⊥] = null(basis* G), canonicalized; dim = n - dim S."""
    if s.dim == 0:
        return full_subspace(s.space)
    a = s.basis.conj().T @ s.space.gram
    _, sv, vh = np.linalg.svd(a)
    r = _rank_from_singulars(sv, s.space.tol.rank_factor(s.space.dim))
    return subspace_from_spanning(s.space, vh[r:].conj().T)


def range_of(t, rank=None):
    """Range of an operator as a canonical subspace."""
    return subspace_from_spanning(t.space, t.matrix, rank=rank)


def nullspace_matrix(space, a):
    """Orthonormal (standard) basis of null(a); raw ndarray, n x k."""
    a = np.asarray(a, dtype=complex)
    if spectral_norm(a) == 0.0:
        return np.eye(space.dim, dtype=complex)
    _, sv, vh = np.linalg.svd(a)
    r = _rank_from_singulars(sv, space.tol.rank_factor(space.dim))
    return vh[r:].conj().T


def nullspace_of(t):
    """Null space of an operator as a canonical subspace."""
    return subspace_from_spanning(t.space, nullspace_matrix(t.space, t.matrix))


# ---------------------------------------------------------------------------
# subspace comparisons
# ---------------------------------------------------------------------------

def principal_angles(s1, s2):
    """Principal angles w.r.t. the cached Hilbert product, ascending.

    Cosines come from the cross Gram, sines from the projected residual
    (the arccos of a cosine loses half the digits near zero; the combined
    form stays accurate at both ends).
    """
    if s1.space is not s2.space:
        raise SpaceMismatch("subspaces live in different spaces")
    k = min(s1.dim, s2.dim)
    if k == 0:
        return np.zeros(0)
    r = s1.space._chol_r
    u1 = r @ s1.basis
    u2 = r @ s2.basis
    f = u1.conj().T @ u2
    cos = np.clip(np.linalg.svd(f, compute_uv=False)[:k], 0.0, 1.0)
    sin = np.linalg.svd(u2 - u1 @ f, compute_uv=False)
    sin = np.clip(np.sort(sin)[:k], 0.0, 1.0)
    return np.sort(np.arctan2(sin, cos))


def subspace_equal(s1, s2, angle_tol=1e-8):
    if s1.dim != s2.dim:
        return False
    if s1.dim == 0:
        return True
    return bool(np.max(principal_angles(s1, s2)) <= angle_tol)


def subspace_within(inner, outer, angle_tol=1e-8):
    """inner ⊆ outer decided by principal angles."""
    if inner.dim == 0:
        return True
    if inner.dim > outer.dim:
        return False
    return bool(np.max(principal_angles(inner, outer)) <= angle_tol)


def contains_columns(s, columns):
    """Columns lie in S, decided by the rank test rank([basis|cols]) = rank(basis)."""
    cols = np.asarray(columns, dtype=complex)
    if cols.ndim == 1:
        cols = cols[:, None]
    stacked = np.hstack([s.basis, cols])
    return s.space.rank(stacked) == s.dim


def subspace_sum(s1, s2):
    return subspace_from_spanning(s1.space, np.hstack([s1.basis, s2.basis]))


def subspace_intersection(s1, s2):
    if s1.dim == 0 or s2.dim == 0:
        return zero_subspace(s1.space)
    coeff = nullspace_matrix(s1.space, np.hstack([s1.basis, -s2.basis]))
    return subspace_from_spanning(s1.space, s1.basis @ coeff[: s1.dim])


# ---------------------------------------------------------------------------
# range inclusion / factorization / neutrality
# ---------------------------------------------------------------------------

def range_inclusion(z, y):
    """R(Z) ⊆ R(Y), decided by rank([Y|Z]) = rank(Y)."""
    if z.space is not y.space:
        raise SpaceMismatch("operators bound to different spaces")
    sp = y.space
    return sp.rank(np.hstack([y.matrix, z.matrix])) == sp.rank(y.matrix)


def solve_douglas(y, z):
    """Factor Z = Y D when R(Z) ⊆ R(Y); D is the minimum-Hilbert-norm factor."""
    if not range_inclusion(z, y):
        raise NoFactorization("R(Z) is not contained in R(Y)")
    return Operator(y.space, hilbert_pinv(y.space, y.matrix) @ z.matrix)


def neutral_range(t):
    """True iff R(T) consists of neutral vectors, i.e. T#T vanishes."""
    scale = t.norm()
    if scale == 0.0:
        return True
    return (t.adjoint() @ t).norm() <= t.space.tol.num * scale**2
