"""Finite-dimensional C*-algebras realized as *-subalgebras of an ambient M_N.

A finite-dimensional C*-algebra is a direct sum of full matrix blocks.  Its
two-sided ideals are exactly the sums of central summands, so the ideal
lattice is the power set of the minimal central projections.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (BadUnit, DegenerateSpectrum, InternalInconsistency, NonIntegralBlock,
                     NotAProjection, NotAnAlgebra, NotInsideAlgebra, ShapeMismatch,
                     ToleranceAmbiguity)
from .numeric import (DEFAULT_TOL, MatrixSubspace, Relation, Tolerances, compare, eig_hermitian,
                      kernel, orthonormal_span, product_span)

__all__ = [
    "FdAlgebra",
    "Structure",
    "Ideal",
    "Classification",
    "block_algebra",
    "subalgebra_from_span",
    "central_structure",
    "ideal_lattice",
    "ideal_generated",
    "annihilator",
    "is_essential",
    "classify",
    "corner",
    "is_projection",
    "spectral_pieces",
]

MAX_DRAWS = 20


@dataclass(frozen=True, eq=False)
class Structure:
    center: MatrixSubspace
    projections: tuple[np.ndarray, ...]
    block_dims: tuple[int, ...]
    summands: tuple[MatrixSubspace, ...]  # z_i A, mutually HS-orthogonal


class FdAlgebra:
    """Unital *-subalgebra of M_N with its central decomposition.

    The unit need not be the ambient identity (corners pAp have unit p).
    """

    def __init__(self, ambient: int, unit: np.ndarray, span: MatrixSubspace,
                 tol: Tolerances = DEFAULT_TOL, structure: Structure | None = None, rng=None):
        self.ambient = int(ambient)
        self.unit = np.asarray(unit, dtype=complex)
        self.unit.setflags(write=False)
        self.span = span
        self.tol = tol
        self.structure = structure if structure is not None else central_structure(self, tol, rng)

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def basis(self) -> np.ndarray:
        return self.span.basis

    @property
    def block_dims(self) -> tuple[int, ...]:
        return self.structure.block_dims

    @property
    def center(self) -> MatrixSubspace:
        return self.structure.center

    @property
    def central_projections(self) -> tuple[np.ndarray, ...]:
        return self.structure.projections

    def __repr__(self):
        return f"FdAlgebra(N={self.ambient}, dim={self.dim}, blocks={list(self.block_dims)})"


@dataclass(frozen=True, eq=False)
class Ideal:
    parent: FdAlgebra
    span: MatrixSubspace
    support: np.ndarray
    selector: frozenset[int]

    @property
    def dim(self) -> int:
        return self.span.dim


@dataclass(frozen=True)
class Classification:
    simple: bool
    prime: bool
    center_dim: int
    block_dims: tuple[int, ...]


def is_projection(p: np.ndarray, atol: float = 1e-9) -> bool:
    p = np.asarray(p)
    return bool(np.max(np.abs(p - p.conj().T), initial=0) <= atol
                and np.max(np.abs(p @ p - p), initial=0) <= atol)


def _unit_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def block_algebra(sizes) -> FdAlgebra:
    """Canonical block-diagonal model of the direct sum of M_n over ``sizes``."""
    sizes = tuple(int(n) for n in sizes)
    if not sizes or min(sizes) < 1:
        raise ValueError("sizes must be a nonempty sequence of positive integers")
    N = sum(sizes)
    offsets = np.cumsum((0,) + sizes[:-1])
    basis, projections, center, summands = [], [], [], []
    for off, n in zip(offsets, sizes):
        block = []
        for i, j in itertools.product(range(n), repeat=2):
            e = np.zeros((N, N), dtype=complex)
            e[off + i, off + j] = 1
            block.append(e)
        basis += block
        z = np.zeros((N, N), dtype=complex)
        z[off:off + n, off:off + n] = np.eye(n)
        projections.append(z)
        center.append(z / np.sqrt(n))
        summands.append(MatrixSubspace((N, N), np.array(block)))
    structure = Structure(MatrixSubspace((N, N), np.array(center)), tuple(projections), sizes,
                          tuple(summands))
    return FdAlgebra(N, _unit_matrix(N), MatrixSubspace((N, N), np.array(basis)), structure=structure)


def _check_algebra(span: MatrixSubspace, unit: np.ndarray, tol: Tolerances):
    if not is_projection(unit):
        raise BadUnit("unit is not a hermitian idempotent")
    if not span.contains(unit, tol):
        raise BadUnit("unit does not lie in the span")
    b = span.basis
    if not span.contains_all(np.conj(np.transpose(b, (0, 2, 1))), tol):
        raise NotAnAlgebra("span is not closed under the adjoint")
    if (np.max(np.abs(unit @ b - b), initial=0) > 1e-8
            or np.max(np.abs(b @ unit - b), initial=0) > 1e-8):
        raise BadUnit("unit does not act as identity on the span")
    prods = (b[:, None] @ b[None]).reshape((-1,) + span.shape)
    if not span.contains_all(prods, tol):
        raise NotAnAlgebra("span is not closed under multiplication")


def subalgebra_from_span(N: int, mats, unit, tol: Tolerances = DEFAULT_TOL, rng=None) -> FdAlgebra:
    """Validate that lin(mats) is a *-algebra with the given unit and build it."""
    if isinstance(mats, MatrixSubspace):
        span = mats
    else:
        mats = np.asarray(mats, dtype=complex)
        if mats.ndim == 2:
            mats = mats[None]
        span = orthonormal_span(mats, tol, shape=(N, N))
    if span.shape != (N, N):
        raise ShapeMismatch(f"expected {N}x{N} matrices, got {span.shape}")
    unit = np.asarray(unit, dtype=complex)
    if unit.shape != (N, N):
        raise BadUnit(f"unit must be {N}x{N}")
    _check_algebra(span, unit, tol)
    return FdAlgebra(N, unit, span, tol, rng=rng)


def algebra_from_subspace(span: MatrixSubspace, unit, tol: Tolerances = DEFAULT_TOL, rng=None) -> FdAlgebra:
    unit = np.asarray(unit, dtype=complex)
    if span.shape[0] != span.shape[1] or unit.shape != span.shape:
        raise ShapeMismatch("algebra span and unit must be square of one size")
    _check_algebra(span, unit, tol)
    return FdAlgebra(span.shape[0], unit, span, tol, rng=rng)


def spectral_pieces(h: np.ndarray, unit: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Eigenvalue clusters of a hermitian ``h = unit h unit`` restricted to the range of ``unit``.

    The complement of ``unit`` is pushed to an eigenvalue far above the
    spectrum of ``h`` and dropped.
    """
    N = h.shape[0]
    comp = np.eye(N) - unit
    has_comp = np.linalg.norm(comp) > 0.5
    bound = float(np.linalg.norm(h, 2)) if h.size else 0.0
    shifted = h + (2 * bound + 1) * comp if has_comp else h
    pieces = eig_hermitian(shifted, tol)
    if has_comp:
        pieces = [(lam, p) for lam, p in pieces if lam < bound + 0.5]
    return pieces


def central_structure(A: FdAlgebra, tol: Tolerances = DEFAULT_TOL, rng=None) -> Structure:
    """Center, minimal central projections and block sizes of ``A``."""
    rng = np.random.default_rng(0) if rng is None else rng
    b = A.basis
    # commutant of the basis, solved inside the span
    center = kernel(A.span, lambda z: z[:, None] @ b - b @ z[:, None], tol)
    k = center.dim
    if k == 0:
        raise NotAnAlgebra("algebra has trivial center; it is zero")
    projections = None
    last_error = None
    for _ in range(MAX_DRAWS):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        h = np.tensordot(c, center.basis, axes=1)
        h = (h + h.conj().T) / 2
        try:
            pieces = spectral_pieces(h, A.unit, tol)
        except DegenerateSpectrum as exc:
            last_error = exc
            continue
        if len(pieces) == k:
            projections = tuple(p for _, p in pieces)
            break
    if projections is None:
        raise DegenerateSpectrum(f"could not separate {k} central summands after {MAX_DRAWS} draws"
                                 + (f" ({last_error})" if last_error else ""))
    summands, dims = [], []
    for z in projections:
        piece = orthonormal_span(z @ A.basis, tol, scale=1.0)
        n = int(round(np.sqrt(piece.dim)))
        if n * n != piece.dim or n == 0:
            raise NonIntegralBlock(f"central summand of dimension {piece.dim} is not a full matrix block")
        summands.append(piece)
        dims.append(n)
    if sum(d * d for d in dims) != A.dim:
        raise NonIntegralBlock("block dimensions do not account for the whole algebra")
    return Structure(center, projections, tuple(dims), tuple(summands))


def _ideal(A: FdAlgebra, selector) -> Ideal:
    selector = frozenset(selector)
    s = A.structure
    basis = np.concatenate([s.summands[i].basis for i in sorted(selector)])
    support = sum((s.projections[i] for i in selector), np.zeros_like(A.unit))
    return Ideal(A, MatrixSubspace(A.span.shape, basis), support, selector)


def ideal_lattice(A: FdAlgebra) -> list[Ideal]:
    """All 2^k - 1 nonzero two-sided ideals, smallest selectors first."""
    k = len(A.structure.projections)
    return [_ideal(A, sel) for r in range(1, k + 1) for sel in itertools.combinations(range(k), r)]


def _selector_of(A: FdAlgebra, span: MatrixSubspace, tol: Tolerances) -> frozenset[int]:
    sel = set()
    for i, z in enumerate(A.structure.projections):
        norms = np.linalg.norm((z @ span.basis).reshape(span.dim, -1), axis=1)
        big = float(norms.max(initial=0.0))
        if big > tol.rank_high:
            sel.add(i)
        elif big > tol.rank_low:
            raise ToleranceAmbiguity(f"summand {i} meets the span at relative size {big:.3e}")
    return frozenset(sel)


def ideal_generated(A: FdAlgebra, S: MatrixSubspace, tol: Tolerances = DEFAULT_TOL) -> Ideal:
    """Smallest two-sided ideal of ``A`` containing ``S`` (fixed point of S -> A S A)."""
    if S.shape != A.span.shape:
        raise ShapeMismatch("subspace and algebra live in different ambients")
    if not A.span.contains_all(S.basis, tol):
        raise NotInsideAlgebra("generating subspace is not inside the algebra")
    cur = S
    for _ in range(A.dim + 1):
        # unit in A, so A.cur.A already contains cur
        nxt = product_span(product_span(A.span, cur, tol), A.span, tol)
        if nxt.dim == cur.dim:
            break
        cur = nxt
    if cur.dim == 0:
        raise NotInsideAlgebra("the zero subspace generates the zero ideal, which is not tracked")
    ideal = _ideal(A, _selector_of(A, cur, tol))
    if compare(ideal.span, cur, tol) is not Relation.EQUAL:
        raise InternalInconsistency("generated ideal is not a sum of central summands")
    return ideal


def annihilator(A: FdAlgebra, I: Ideal | MatrixSubspace, side: str = "both",
                tol: Tolerances = DEFAULT_TOL) -> MatrixSubspace:
    """{a in A : a y = 0 and/or y a = 0 for all y in I}; ``side`` is 'left', 'right' or 'both'."""
    ys = (I.span if isinstance(I, Ideal) else I).basis

    def op(a):
        out = []
        if side in ("left", "both"):
            out.append(a[:, None] @ ys)
        if side in ("right", "both"):
            out.append(ys @ a[:, None])
        return out

    return kernel(A.span, op, tol)


def is_essential(A: FdAlgebra, I: Ideal, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Essential iff the two-sided annihilator vanishes; cross-checked against full selector."""
    ann = annihilator(A, I, "both", tol).dim
    essential = ann == 0
    if essential != (I.selector == frozenset(range(len(A.structure.projections)))):
        raise InternalInconsistency("annihilator test disagrees with selector completeness")
    return essential


def classify(A: FdAlgebra, tol: Tolerances = DEFAULT_TOL) -> Classification:
    lattice = ideal_lattice(A)
    simple = len(lattice) == 1
    prime = all(is_essential(A, I, tol) for I in lattice)
    k = len(A.structure.projections)
    if simple != (k == 1) or prime != (k == 1):
        raise InternalInconsistency(f"simple={simple}, prime={prime} but {k} central summands")
    return Classification(simple, prime, A.center.dim, A.block_dims)


def corner(A: FdAlgebra, p, tol: Tolerances = DEFAULT_TOL, rng=None) -> FdAlgebra:
    """The corner p A p with unit p."""
    p = np.asarray(p, dtype=complex)
    if p.shape != A.unit.shape or not is_projection(p):
        raise NotAProjection("corner needs a hermitian idempotent of the ambient size")
    if not A.span.contains(p, tol):
        raise NotInsideAlgebra("projection is not an element of the algebra")
    span = orthonormal_span(p @ A.basis @ p, tol, scale=1.0, shape=A.span.shape)
    return FdAlgebra(A.ambient, p, span, tol, rng=rng)
