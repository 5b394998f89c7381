"""Dense complex matrices and subspaces of matrix spaces.

Every structural question in the package (is this an ideal, what is the
commutant, is this subspace inside that one) is reduced to a rank or nullspace
decision made here.  Rank decisions use two thresholds: values at or below
``rank_low`` (relative) are zero, values above ``rank_high`` are nonzero, and
anything in between raises :class:`ToleranceAmbiguity` instead of guessing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateSpectrum, InvalidInput, ShapeMismatch, ToleranceAmbiguity

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "MatrixSubspace",
    "Relation",
    "as_mat",
    "adjoint",
    "hs_inner",
    "orthonormal_span",
    "compare",
    "product_span",
    "intertwiners",
    "intersect",
    "kernel",
    "nullspace",
    "eig_hermitian",
    "is_unitary",
    "mat_to_json",
    "mat_from_json",
]


@dataclass(frozen=True)
class Tolerances:
    rank_low: float = 1e-9
    rank_high: float = 1e-6
    membership: float = 1e-8
    eig_gap: float = 1e-6

    def __post_init__(self):
        if not (0 < self.rank_low < self.rank_high < 1):
            raise ValueError("need 0 < rank_low < rank_high < 1")
        if not (0 < self.membership < 1):
            raise ValueError("need 0 < membership < 1")
        if not (0 < self.eig_gap < 1):
            raise ValueError("need 0 < eig_gap < 1")


DEFAULT_TOL = Tolerances()


def as_mat(x) -> np.ndarray:
    m = np.array(x, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got array of shape {m.shape}")
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(a* b)."""
    return complex(np.vdot(a, b))


def is_unitary(u: np.ndarray, atol: float = 1e-9) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def _nonzero_mask(values: np.ndarray, ref: float, tol: Tolerances, what: str) -> np.ndarray:
    hi = values > tol.rank_high * ref
    lo = values <= tol.rank_low * ref
    gray = ~(hi | lo)
    if np.any(gray):
        worst = float(values[gray].max() / ref)
        raise ToleranceAmbiguity(
            f"{what}: relative value {worst:.3e} lies between rank_low={tol.rank_low:g} "
            f"and rank_high={tol.rank_high:g}"
        )
    return hi


class MatrixSubspace:
    """Subspace of ``rows x cols`` complex matrices with a Hilbert-Schmidt orthonormal basis.

    The basis is stored as a read-only array of shape ``(dim, rows, cols)``.
    Construct through :func:`orthonormal_span` unless the basis is already
    known to be orthonormal.
    """

    __slots__ = ("shape", "basis")

    def __init__(self, shape: tuple[int, int], basis: np.ndarray | None = None):
        shape = (int(shape[0]), int(shape[1]))
        if basis is None:
            basis = np.zeros((0,) + shape, dtype=complex)
        basis = np.asarray(basis, dtype=complex).reshape((-1,) + shape)
        basis.setflags(write=False)
        self.shape = shape
        self.basis = basis

    @classmethod
    def zero(cls, shape) -> "MatrixSubspace":
        return cls(shape)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        return self.basis.reshape(self.dim, -1)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"MatrixSubspace(shape={self.shape}, dim={self.dim})"

    def coordinates(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=complex).reshape(-1, self.shape[0] * self.shape[1])
        return mats @ self.vectors.conj().T

    def project(self, m: np.ndarray) -> np.ndarray:
        c = self.coordinates(m)[0]
        return (c @ self.vectors).reshape(self.shape)

    def residual_norms(self, mats) -> np.ndarray:
        flat = np.asarray(mats, dtype=complex).reshape(-1, self.shape[0] * self.shape[1])
        if self.dim == 0:
            return np.linalg.norm(flat, axis=1)
        res = flat - (flat @ self.vectors.conj().T) @ self.vectors
        return np.linalg.norm(res, axis=1)

    def contains_all(self, mats, tol: Tolerances = DEFAULT_TOL, scale: float = 1.0) -> bool:
        """Membership of every matrix in ``mats``; residuals are measured against ``scale``."""
        mats = np.asarray(mats, dtype=complex)
        if mats.size == 0:
            return True
        if mats.shape[-2:] != self.shape:
            raise ShapeMismatch(f"matrices of shape {mats.shape[-2:]} vs subspace {self.shape}")
        r = self.residual_norms(mats)
        inside = r <= tol.membership * scale
        outside = r > tol.rank_high * scale
        if np.any(~(inside | outside)):
            worst = float(r[~(inside | outside)].max() / scale)
            raise ToleranceAmbiguity(f"membership residual {worst:.3e} in the gray zone")
        return bool(np.all(inside))

    def contains(self, m, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> bool:
        m = np.asarray(m, dtype=complex)
        if scale is None:
            scale = max(float(np.linalg.norm(m)), 1.0)
        return self.contains_all(m[None], tol, scale)

    def adjoint(self) -> "MatrixSubspace":
        return MatrixSubspace((self.shape[1], self.shape[0]), self.basis.conj().transpose(0, 2, 1))

    def map(self, fn: Callable[[np.ndarray], np.ndarray], tol: Tolerances = DEFAULT_TOL,
            scale: float | None = 1.0) -> "MatrixSubspace":
        """Span of the images of the basis under a linear map."""
        if self.dim == 0:
            probe = fn(np.zeros(self.shape, dtype=complex))
            return MatrixSubspace(probe.shape)
        return orthonormal_span([fn(b) for b in self.basis], tol, scale=scale)

    def to_json(self) -> list:
        return [mat_to_json(b) for b in self.basis]


def orthonormal_span(mats, tol: Tolerances = DEFAULT_TOL, scale: float | None = None,
                     shape: tuple[int, int] | None = None) -> MatrixSubspace:
    """Orthonormal basis of the linear span of ``mats``.

    Singular values of the stacked vectors are compared with ``scale``
    (default: the largest input norm).  Pass ``scale`` explicitly when the
    inputs come from unit-norm data and may all be numerically zero.
    """
    arr = np.asarray(mats, dtype=complex)
    if arr.size == 0:
        if shape is None:
            if arr.ndim == 3:
                shape = arr.shape[1:]
            else:
                raise ShapeMismatch("empty input needs an explicit shape")
        return MatrixSubspace(shape)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise ShapeMismatch("all matrices must share one shape")
    shape = arr.shape[1:]
    flat = arr.reshape(arr.shape[0], -1)
    ref = scale if scale is not None else float(np.linalg.norm(flat, axis=1).max())
    if ref == 0:
        return MatrixSubspace(shape)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    rank = int(np.count_nonzero(_nonzero_mask(s, ref, tol, "span rank")))
    return MatrixSubspace(shape, vh[:rank])


class Relation(enum.Enum):
    EQUAL = "equal"
    S_INSIDE_T = "S_inside_T"
    T_INSIDE_S = "T_inside_S"
    INCOMPARABLE = "incomparable"


def compare(S: MatrixSubspace, T: MatrixSubspace, tol: Tolerances = DEFAULT_TOL) -> Relation:
    if S.shape != T.shape:
        raise ShapeMismatch(f"{S.shape} vs {T.shape}")
    s_in_t = T.contains_all(S.basis, tol)
    t_in_s = S.contains_all(T.basis, tol)
    if s_in_t and t_in_s:
        return Relation.EQUAL
    if s_in_t:
        return Relation.S_INSIDE_T
    if t_in_s:
        return Relation.T_INSIDE_S
    return Relation.INCOMPARABLE


def product_span(S: MatrixSubspace, T: MatrixSubspace, tol: Tolerances = DEFAULT_TOL) -> MatrixSubspace:
    """lin{s t : s in S, t in T}."""
    if S.shape[1] != T.shape[0]:
        raise ShapeMismatch(f"cannot multiply {S.shape} by {T.shape}")
    out_shape = (S.shape[0], T.shape[1])
    if S.dim == 0 or T.dim == 0:
        return MatrixSubspace(out_shape)
    prods = (S.basis[:, None] @ T.basis[None]).reshape((-1,) + out_shape)
    # ||st||_HS <= ||s||_HS ||t||_HS = 1
    return orthonormal_span(prods, tol, scale=1.0)


def nullspace(m: np.ndarray, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal rows spanning {v : m v = 0}.

    Singular values are judged relative to ``max(s_max, scale)``; ``scale`` is
    the natural size of the operator and keeps a numerically zero operator
    from being mistaken for a full-rank one.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[1]
    if m.shape[0] == 0 or not np.any(m):
        return np.eye(n, dtype=complex)
    # a complete right basis only needs full_matrices when the matrix is wide
    _, s, vh = np.linalg.svd(m, full_matrices=m.shape[0] < n)
    ref = max(float(s[0]), scale)
    rank = int(np.count_nonzero(_nonzero_mask(s, ref, tol, "nullspace rank")))
    return vh[rank:].conj()


def kernel(domain: MatrixSubspace, op: Callable[[np.ndarray], np.ndarray | Sequence[np.ndarray]],
           tol: Tolerances = DEFAULT_TOL, scale: float = 1.0) -> MatrixSubspace:
    """{x in domain : op(x) = 0} for a linear ``op``.

    ``op`` is applied once to the whole stack of basis matrices, shape
    (k, rows, cols), and returns an array (or a list of arrays) whose leading
    axis is k.  ``scale`` bounds the natural size of ``op`` on unit vectors;
    the default suits operators assembled from unitaries and orthonormal bases.
    """
    if domain.dim == 0:
        return domain
    k = domain.dim
    parts = op(domain.basis)
    parts = [parts] if isinstance(parts, np.ndarray) else list(parts)
    cols = np.concatenate([np.reshape(y, (k, -1)) for y in parts], axis=1)
    coeffs = nullspace(cols.T, tol, scale)
    return MatrixSubspace(domain.shape, np.tensordot(coeffs, domain.basis, axes=1))


def intertwiners(lhs: Sequence, rhs: Sequence, tol: Tolerances = DEFAULT_TOL) -> MatrixSubspace:
    """{w : lhs[i] w = w rhs[i] for all i}."""
    if len(lhs) != len(rhs):
        raise ShapeMismatch("lhs and rhs must have equal length")
    lhs = [as_mat(a) for a in lhs]
    rhs = [as_mat(b) for b in rhs]
    if not lhs:
        raise ShapeMismatch("need at least one pair to fix the shape")
    m, n = lhs[0].shape[0], rhs[0].shape[0]
    blocks = []
    scale = max(np.linalg.norm(a, 2) + np.linalg.norm(b, 2) for a, b in zip(lhs, rhs))
    for a, b in zip(lhs, rhs):
        if a.shape != (m, m) or b.shape != (n, n):
            raise ShapeMismatch("lhs must be m x m and rhs n x n throughout")
        # row-major vec: vec(a w) = (a (x) I) vec w,  vec(w b) = (I (x) b^T) vec w
        blocks.append(np.kron(a, np.eye(n)) - np.kron(np.eye(m), b.T))
    null = nullspace(np.vstack(blocks), tol, scale)
    return MatrixSubspace((m, n), null.reshape(-1, m, n))


def intersect(S: MatrixSubspace, T: MatrixSubspace, tol: Tolerances = DEFAULT_TOL) -> MatrixSubspace:
    if S.shape != T.shape:
        raise ShapeMismatch(f"{S.shape} vs {T.shape}")
    if S.dim == 0 or T.dim == 0:
        return MatrixSubspace(S.shape)
    null = nullspace(np.concatenate([S.vectors.T, -T.vectors.T], axis=1), tol, 1.0)
    if null.shape[0] == 0:
        return MatrixSubspace(S.shape)
    elems = null[:, : S.dim] @ S.vectors
    return orthonormal_span(elems.reshape((-1,) + S.shape), tol)


def eig_hermitian(h, tol: Tolerances = DEFAULT_TOL) -> list[tuple[float, np.ndarray]]:
    """Eigenvalue clusters and spectral projections of a hermitian matrix, ascending.

    Neighbouring eigenvalues closer than ``rank_low`` (relative to the operator
    norm) are merged, those at least ``eig_gap`` apart are split; a gap in
    between raises :class:`DegenerateSpectrum`.
    """
    h = as_mat(h)
    norm = float(np.linalg.norm(h))
    if np.linalg.norm(h - h.conj().T) > tol.membership * max(norm, 1e-300):
        raise InvalidInput("eig_hermitian: matrix is not hermitian")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        gap = w[i] - w[i - 1]
        if gap <= tol.rank_low * scale:
            clusters[-1].append(i)
        elif gap >= tol.eig_gap * scale:
            clusters.append([i])
        else:
            raise DegenerateSpectrum(f"eigenvalue gap {gap / scale:.3e} (relative) is ambiguous")
    out = []
    for idx in clusters:
        vecs = v[:, idx]
        out.append((float(np.mean(w[idx])), vecs @ vecs.conj().T))
    return out


def mat_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def mat_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise ShapeMismatch("matrix must be a nested array of [re, im] pairs")
