"""Finite group actions on finite-dimensional C*-algebras and their spectral subspaces.

Elements of X (x) B(H_pi) are realized as (N d) x (N d) matrices whose (i, j)
block of size N is the entry a_ij; in this layout ``1 (x) pi_g`` is
``kron(pi_g, I_N)`` and an entrywise left multiplication by j in X is
``kron(I_d, j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import (GroupLawViolation, NotInsideAlgebra, NotInvariantProjection, NotPreserving,
                     NotUnitary, ShapeMismatch)
from .fdcstar import FdAlgebra, Ideal, algebra_from_subspace, corner, ideal_generated, is_projection
from .groups import FiniteGroup, Irrep, IrrepTable, Verdict
from .numeric import (DEFAULT_TOL, MatrixSubspace, Relation, Tolerances, compare, intersect,
                      intertwiners, kernel, orthonormal_span, product_span)

__all__ = [
    "Action",
    "DynamicalSystem",
    "Tensor2Element",
    "inner_action",
    "compress",
    "restrict",
    "spectral_projection",
    "projection_operator",
    "x1",
    "x2",
    "partial_trace",
    "reconstruction_check",
    "fixed_point_algebra",
    "ideal_pair_check",
    "tensor_domain",
    "trace_ideal_span",
    "fixed_part",
    "trace_ideal_identity",
]

LAW_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Action:
    """alpha_g = Ad(u_g) restricted to X; u may be projective."""

    group: FiniteGroup
    implementers: np.ndarray  # (|G|, N, N)

    def __call__(self, g: int, x: np.ndarray) -> np.ndarray:
        u = self.implementers[g]
        return u @ x @ u.conj().T

    def orbit(self, x: np.ndarray) -> np.ndarray:
        """alpha_g(x) for every g, stacked along the first axis."""
        u = self.implementers
        return u @ x @ u.conj().transpose(0, 2, 1)

    def generators(self) -> tuple[int, ...]:
        return self.group.generators or (self.group.identity,)


@dataclass(eq=False)
class DynamicalSystem:
    table: IrrepTable
    algebra: FdAlgebra
    action: Action
    fixed: FdAlgebra
    tol: Tolerances = DEFAULT_TOL
    name: str = ""

    @property
    def group(self) -> FiniteGroup:
        return self.table.group

    @property
    def ambient(self) -> int:
        return self.algebra.ambient

    @cached_property
    def basis_orbit(self) -> np.ndarray:
        """alpha_g(b) for every group element g and basis element b, shape (|G|, dim X, N, N)."""
        U = self.action.implementers
        return U[:, None] @ self.algebra.basis[None] @ U.conj().transpose(0, 2, 1)[:, None]

    def irrep(self, pi: Irrep | str) -> Irrep:
        return self.table[pi] if isinstance(pi, str) else pi

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return (f"DynamicalSystem({label}G={self.group.name or self.group.order}, X={self.algebra}, "
                f"X^alpha={self.fixed})")


class Tensor2Element:
    """An element of X (x) B(H_pi) as a d x d grid of N x N blocks."""

    def __init__(self, realized: np.ndarray, d: int):
        realized = np.asarray(realized, dtype=complex)
        if realized.shape[0] % d or realized.shape[0] != realized.shape[1]:
            raise ShapeMismatch(f"cannot split {realized.shape} into a {d} x {d} grid")
        self.d = d
        self.N = realized.shape[0] // d
        self.realized = realized

    @classmethod
    def from_grid(cls, grid) -> "Tensor2Element":
        return cls(np.block([[np.asarray(b, dtype=complex) for b in row] for row in grid]), len(grid))

    def block(self, i: int, j: int) -> np.ndarray:
        N = self.N
        return self.realized[i * N:(i + 1) * N, j * N:(j + 1) * N]

    def grid(self) -> list[list[np.ndarray]]:
        return [[self.block(i, j) for j in range(self.d)] for i in range(self.d)]


def _complete_implementers(group: FiniteGroup, u, N: int) -> np.ndarray:
    if not isinstance(u, Mapping):
        arr = np.asarray(u, dtype=complex)
        if arr.shape != (group.order, N, N):
            raise ShapeMismatch(f"need {group.order} implementers of size {N}x{N}")
        return arr
    given = {int(g): np.asarray(m, dtype=complex) for g, m in u.items()}
    for g, m in given.items():
        if m.shape != (N, N):
            raise ShapeMismatch(f"implementer for {group.element_name(g)} must be {N}x{N}")
    missing = [s for s in group.generators if s not in given]
    if missing and len(given) < group.order:
        raise ShapeMismatch("implementers must cover all elements or all generators; missing "
                            + ", ".join(group.element_name(s) for s in missing))
    out = np.empty((group.order, N, N), dtype=complex)
    for g, word in group.words().items():
        if g in given:
            out[g] = given[g]
            continue
        m = np.eye(N, dtype=complex)
        for s in word:
            m = m @ given[s]
        out[g] = m
    return out


def inner_action(table: IrrepTable, X: FdAlgebra, u, tol: Tolerances = DEFAULT_TOL,
                 name: str = "", rng=None) -> DynamicalSystem:
    """System whose automorphisms are Ad(u_g); ``u`` maps elements (or generators) to unitaries."""
    G = table.group
    N = X.ambient
    U = _complete_implementers(G, u, N)
    for g in range(G.order):
        if np.max(np.abs(U[g].conj().T @ U[g] - np.eye(N))) > LAW_ATOL:
            raise NotUnitary(f"implementer for {G.element_name(g)} is not unitary")
    action = Action(G, U)
    b = X.basis
    Uh = U.conj().transpose(0, 2, 1)
    images = U[:, None] @ b[None] @ Uh[:, None]  # alpha_g(b) for all g, b
    if not X.span.contains_all(images.reshape((-1, N, N)), tol):
        raise NotPreserving("some alpha_g does not map the algebra into itself")
    # alpha_g(alpha_h(b)) = alpha_{gh}(b)
    twice = U[:, None, None] @ images[None] @ Uh[:, None, None]
    law = float(np.max(np.abs(twice - images[G.mult]), initial=0.0))
    if law > LAW_ATOL:
        raise GroupLawViolation(f"Ad-level group law fails by {law:.2e}")
    star = float(np.max(np.abs((U[:, None] @ b.conj().transpose(0, 2, 1)[None] @ Uh[:, None])
                               - images.conj().transpose(0, 1, 3, 2)), initial=0.0))
    if star > LAW_ATOL:
        raise GroupLawViolation(f"alpha does not commute with the adjoint ({star:.2e})")
    # commuting with the generators' implementers means commuting with all of them
    gens = action.generators()
    comm = intertwiners(list(U[list(gens)]), list(U[list(gens)]), tol)
    fixed = algebra_from_subspace(intersect(comm, X.span, tol), X.unit, tol, rng=rng)
    return DynamicalSystem(table, X, action, fixed, tol, name)


def _range_isometry(p: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(p)
    return v[:, w > 0.5]


def compress(sys: DynamicalSystem, rng=None) -> DynamicalSystem:
    """Isomorphic copy of ``sys`` living on the range of its unit (ambient = rank of unit)."""
    V = _range_isometry(sys.algebra.unit)
    if V.shape[1] == sys.ambient:
        return sys
    return _compressed(sys, V, sys.algebra.basis, rng)


def _compressed(sys: DynamicalSystem, V: np.ndarray, mats: np.ndarray, rng) -> DynamicalSystem:
    r = V.shape[1]
    Vh = V.conj().T
    span = orthonormal_span(Vh @ mats @ V, sys.tol, scale=1.0, shape=(r, r))
    X = algebra_from_subspace(span, np.eye(r, dtype=complex), sys.tol, rng=rng)
    U = Vh @ sys.action.implementers @ V
    return inner_action(sys.table, X, U, sys.tol, sys.name, rng=rng)


def restrict(sys: DynamicalSystem, p, rng=None, compressed: bool = False) -> DynamicalSystem:
    """The action restricted to the invariant corner p X p (p a projection in X^alpha).

    With ``compressed`` the corner is re-embedded in the range of p, which is
    isomorphic and much cheaper to work with.
    """
    p = np.asarray(p, dtype=complex)
    if p.shape != sys.algebra.unit.shape or not is_projection(p):
        raise NotInvariantProjection("restriction needs a hermitian idempotent")
    if not sys.fixed.span.contains(p, sys.tol):
        raise NotInvariantProjection("projection is not fixed by the action")
    drift = float(np.max(np.abs(sys.action.orbit(p) - p)))
    if drift > LAW_ATOL:
        raise NotInvariantProjection(f"alpha_g(p) != p (deviation {drift:.2e})")
    if compressed:
        V = _range_isometry(p)
        if V.shape[1] == sys.ambient:
            return sys
        # p commutes with every u_g, so V* u_g V is unitary
        return _compressed(sys, V, p @ sys.algebra.basis @ p, rng)
    if np.allclose(p, sys.algebra.unit, atol=1e-12):
        return sys
    Y = corner(sys.algebra, p, sys.tol, rng=rng)
    return inner_action(sys.table, Y, sys.action.implementers, sys.tol, sys.name, rng=rng)


# -- spectral subspaces ------------------------------------------------------

def _check_in_algebra(sys: DynamicalSystem, x: np.ndarray):
    if x.shape != sys.algebra.unit.shape or not sys.algebra.span.contains(x, sys.tol):
        raise NotInsideAlgebra("element does not lie in the algebra")


def spectral_projection(sys: DynamicalSystem, pi, x, coeff: tuple[int, int] | None = None) -> np.ndarray:
    """Isotypic projection of x, or its (i, j) matrix-coefficient component (0-based indices).

    The coefficient form carries a factor d_pi so that a_ij is recovered
    exactly from the partial trace of a in X_2(pi).
    """
    pi = sys.irrep(pi)
    x = np.asarray(x, dtype=complex)
    _check_in_algebra(sys, x)
    orbit = sys.action.orbit(x)
    if coeff is None:
        weights = pi.dim * np.conj(pi.character())
    else:
        i, j = coeff
        weights = pi.dim * np.conj(pi.matrices[:, j, i])
    return np.tensordot(weights, orbit, axes=1) / sys.group.order


def projection_operator(sys: DynamicalSystem, pi) -> np.ndarray:
    """Matrix of P(pi) acting on the coordinates of X in its orthonormal basis."""
    pi = sys.irrep(pi)
    X = sys.algebra.span
    weights = pi.dim * np.conj(pi.character()) / sys.group.order
    images = np.tensordot(weights, sys.basis_orbit, axes=1)
    return X.coordinates(images).T


def x1(sys: DynamicalSystem, pi) -> MatrixSubspace:
    pi = sys.irrep(pi)
    P = projection_operator(sys, pi)
    # P is an HS-orthogonal projection, so columns of unit-norm inputs have norm <= 1
    return orthonormal_span((P.T @ sys.algebra.span.vectors).reshape((-1,) + sys.algebra.span.shape),
                            sys.tol, scale=1.0)


def tensor_domain(X: FdAlgebra | MatrixSubspace, d: int) -> MatrixSubspace:
    """Grids with every block in X: the span of e_ij (x) b over an orthonormal basis of X."""
    span = X.span if isinstance(X, FdAlgebra) else X
    N = span.shape[0]
    units = np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    basis = np.einsum("uij,bkl->ubikjl", units, span.basis).reshape(-1, d * N, d * N)
    return MatrixSubspace((d * N, d * N), basis)


def x2(sys: DynamicalSystem, pi) -> MatrixSubspace:
    """{a : (alpha_g (x) id)(a) = a (1 (x) pi_g)} inside X (x) B(H_pi)."""
    pi = sys.irrep(pi)
    d, N = pi.dim, sys.ambient
    gens = sys.action.generators()
    lifted = [np.kron(np.eye(d), sys.action.implementers[s]) for s in gens]
    right = [np.kron(pi.matrices[s], np.eye(N)) for s in gens]

    def op(a):
        return [w @ a @ w.conj().T - a @ r for w, r in zip(lifted, right)]

    return kernel(tensor_domain(sys.algebra, d), op, sys.tol)


def fixed_point_algebra(sys: DynamicalSystem, pi, rng=None) -> FdAlgebra:
    """(X (x) B(H_pi)) fixed by g -> (1 (x) pi_g) [alpha_g(a_ij)] (1 (x) pi_g)*."""
    pi = sys.irrep(pi)
    d = pi.dim
    if d == 1:
        # ad pi is trivial, so the twisted action is alpha itself
        return sys.fixed
    gens = sys.action.generators()
    W = [np.kron(pi.matrices[s], sys.action.implementers[s]) for s in gens]

    def op(a):
        return [w @ a @ w.conj().T - a for w in W]

    span = kernel(tensor_domain(sys.algebra, d), op, sys.tol)
    return algebra_from_subspace(span, np.kron(np.eye(d), sys.algebra.unit), sys.tol, rng=rng)


def partial_trace(a, d: int | None = None) -> np.ndarray:
    if not isinstance(a, Tensor2Element):
        if d is None:
            raise ValueError("partial_trace of a plain matrix needs d")
        a = Tensor2Element(a, d)
    return sum(a.block(i, i) for i in range(a.d))


def reconstruction_check(sys: DynamicalSystem, pi, a, atol: float = 1e-8) -> Verdict:
    """Recover each block a_ij from x = tr(a) through the coefficient projections."""
    pi = sys.irrep(pi)
    t = a if isinstance(a, Tensor2Element) else Tensor2Element(a, pi.dim)
    x = partial_trace(t)
    scale = max(1.0, float(np.linalg.norm(t.realized)))
    worst = 0.0
    for i in range(pi.dim):
        for j in range(pi.dim):
            rebuilt = spectral_projection(sys, pi, x, (i, j))
            worst = max(worst, float(np.max(np.abs(rebuilt - t.block(i, j)))))
    ok = worst <= atol * scale
    failures = [] if ok else [f"block reconstruction deviates by {worst:.2e}"]
    return Verdict(ok, failures, {"reconstruction": worst})


def _two_sided(ideal: MatrixSubspace, algebra: MatrixSubspace, tol: Tolerances) -> bool:
    if ideal.dim == 0:
        return True
    left = (algebra.basis[:, None] @ ideal.basis[None]).reshape((-1,) + ideal.shape)
    right = (ideal.basis[:, None] @ algebra.basis[None]).reshape((-1,) + ideal.shape)
    return (algebra.contains_all(ideal.basis, tol) and ideal.contains_all(left, tol)
            and ideal.contains_all(right, tol))


def ideal_pair_check(sys: DynamicalSystem, pi, X2: MatrixSubspace | None = None,
                     B: FdAlgebra | None = None) -> Verdict:
    """X_2 X_2^* is an ideal of X^alpha (x) B(H_pi); X_2^* X_2 is an ideal of the twisted fixed algebra."""
    pi = sys.irrep(pi)
    X2 = x2(sys, pi) if X2 is None else X2
    B = fixed_point_algebra(sys, pi) if B is None else B
    tol = sys.tol
    outer = product_span(X2, X2.adjoint(), tol)
    inner = product_span(X2.adjoint(), X2, tol)
    failures = []
    if not _two_sided(outer, tensor_domain(sys.fixed, pi.dim), tol):
        failures.append("X2 X2* is not a two-sided ideal of X^alpha (x) B(H_pi)")
    if not _two_sided(inner, B.span, tol):
        failures.append("X2* X2 is not a two-sided ideal of the twisted fixed-point algebra")
    return Verdict(not failures, failures, {"outer_dim": outer.dim, "inner_dim": inner.dim})


def fixed_part(sys: DynamicalSystem, S: MatrixSubspace) -> MatrixSubspace:
    """S^alpha for an invariant subspace S of X (the trivial isotypic image)."""
    weights = np.full(sys.group.order, 1.0 / sys.group.order)
    U = sys.action.implementers
    images = np.tensordot(weights, U[:, None] @ S.basis[None] @ U.conj().transpose(0, 2, 1)[:, None],
                          axes=1)
    return orthonormal_span(images, sys.tol, scale=1.0, shape=S.shape)


def trace_ideal_span(sys: DynamicalSystem, J: Ideal | MatrixSubspace,
                     x2_cache: Mapping[str, MatrixSubspace] | None = None) -> MatrixSubspace:
    """lin{ tr(a j b*) : a, b in X_2(pi), j in J, pi in G^ }."""
    Jspan = J.span if isinstance(J, Ideal) else J
    tol = sys.tol
    N = sys.ambient
    pieces = []
    for pi in sys.table:
        X2 = x2_cache[pi.label] if x2_cache is not None else x2(sys, pi)
        if X2.dim == 0:
            continue
        d = pi.dim
        lifted = MatrixSubspace((d * N, d * N), np.kron(np.eye(d), Jspan.basis))
        XJ = product_span(X2, lifted, tol)
        prods = product_span(XJ, X2.adjoint(), tol)
        if prods.dim:
            pieces.append(np.array([partial_trace(m, d) for m in prods.basis]))
    if not pieces:
        return MatrixSubspace((N, N))
    # ||tr(m)||_HS <= sqrt(d) ||m||_HS
    return orthonormal_span(np.concatenate(pieces), tol, scale=1.0)


def trace_ideal_identity(sys: DynamicalSystem, J: Ideal, x2_cache=None) -> Relation:
    """Compare lin{tr(X_2 J X_2*)} over all irreps with the fixed part of the ideal X J X."""
    lhs = trace_ideal_span(sys, J, x2_cache)
    rhs = fixed_part(sys, ideal_generated(sys.algebra, J.span, sys.tol).span)
    return compare(lhs, rhs, sys.tol)
