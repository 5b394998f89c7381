"""Arveson-type and Connes-type spectra of a finite group action.

Spectra are sets of irrep labels.  The Connes-type spectra are computed two
ways: by intersecting over corners cut down by the ideals of X^alpha, and by
brute force over every conjugacy class of invariant projection (rank tuples
in the blocks of X^alpha).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DynamicalSystem, fixed_point_algebra, restrict, x1, x2
from .errors import DegenerateSpectrum, EnumerationBudgetExceeded, InternalInconsistency
from .fdcstar import (FdAlgebra, MAX_DRAWS, ideal_generated, ideal_lattice, is_essential,
                      spectral_pieces)
from .numeric import MatrixSubspace, Relation, compare, product_span

__all__ = [
    "PiEvidence",
    "SpectrumSet",
    "ArvesonSpectra",
    "ConnesSpectra",
    "OracleResult",
    "InvariantIdealProperties",
    "arveson_spectra",
    "connes_spectra",
    "connes_oracle",
    "corner_system",
    "alpha_invariant_ideal_properties",
    "ORACLE_BUDGET",
]

ORACLE_BUDGET = 4096


@dataclass(frozen=True)
class PiEvidence:
    label: str
    dim: int
    x1_dim: int
    x2_dim: int
    fixed_dim: int
    fixed_blocks: tuple[int, ...]
    ideal_dim: int          # dim of X_2* X_2 inside the twisted fixed-point algebra
    essential: bool
    full: bool

    def to_json(self) -> dict:
        return {"dim": self.dim, "x1_dim": self.x1_dim, "x2_dim": self.x2_dim,
                "fixed_dim": self.fixed_dim, "fixed_blocks": list(self.fixed_blocks),
                "ideal_dim": self.ideal_dim, "essential": self.essential, "full": self.full}


@dataclass(frozen=True)
class SpectrumSet:
    labels: frozenset[str]
    evidence: dict = field(default_factory=dict, compare=False)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __le__(self, other: "SpectrumSet") -> bool:
        return self.labels <= other.labels

    def __iter__(self):
        return iter(sorted(self.labels))

    def __len__(self):
        return len(self.labels)

    def ordered(self, order) -> list[str]:
        return [label for label in order if label in self.labels]


@dataclass(eq=False)
class ArvesonSpectra:
    sp: SpectrumSet
    sp_F: SpectrumSet
    strong_sp_F: SpectrumSet
    evidence: dict[str, PiEvidence]
    x2_spaces: dict[str, MatrixSubspace] = field(repr=False)
    fixed_algebras: dict[str, FdAlgebra] = field(repr=False)


@dataclass(eq=False)
class ConnesSpectra:
    gamma_F: SpectrumSet
    strong_gamma_F: SpectrumSet
    per_ideal: list[tuple[frozenset[int], frozenset[str], frozenset[str]]]


@dataclass(eq=False)
class OracleResult:
    gamma_F: SpectrumSet
    strong_gamma_F: SpectrumSet
    plain_gamma: SpectrumSet      # intersection of sp over the same corners
    tuples: list[tuple[int, ...]]
    mode: str


@dataclass(frozen=True)
class InvariantIdealProperties:
    alpha_simple: bool
    alpha_prime: bool
    invariant_selectors: tuple[frozenset[int], ...]


def _spectrum(labels, evidence=None) -> SpectrumSet:
    return SpectrumSet(frozenset(labels), evidence or {})


def arveson_spectra(sys: DynamicalSystem, rng=None) -> ArvesonSpectra:
    tol = sys.tol
    sp, sp_F, strong = set(), set(), set()
    evidence, x2s, fixed = {}, {}, {}
    for pi in sys.table:
        X1 = x1(sys, pi)
        X2 = x2(sys, pi)
        B = fixed_point_algebra(sys, pi, rng=rng)
        x2s[pi.label], fixed[pi.label] = X2, B
        inner = product_span(X2.adjoint(), X2, tol)
        essential = full = False
        if inner.dim:
            ideal = ideal_generated(B, inner, tol)
            if compare(ideal.span, inner, tol) is not Relation.EQUAL:
                raise InternalInconsistency(f"X2* X2 at {pi.label} is not an ideal")
            essential = is_essential(B, ideal, tol)
            full = compare(inner, B.span, tol) is Relation.EQUAL
        if X1.dim:
            sp.add(pi.label)
        if essential:
            sp_F.add(pi.label)
        if full:
            strong.add(pi.label)
        evidence[pi.label] = PiEvidence(pi.label, pi.dim, X1.dim, X2.dim, B.dim, B.block_dims,
                                        inner.dim, essential, full)
    if not strong <= sp_F <= sp:
        raise InternalInconsistency(f"spectra out of order: {sorted(strong)}, {sorted(sp_F)}, {sorted(sp)}")
    return ArvesonSpectra(_spectrum(sp, evidence), _spectrum(sp_F, evidence),
                          _spectrum(strong, evidence), evidence, x2s, fixed)


def corner_system(sys: DynamicalSystem, p, rng=None) -> DynamicalSystem:
    """The action on p X p, re-embedded in the range of p."""
    return restrict(sys, p, rng=rng, compressed=True)


def connes_spectra(sys: DynamicalSystem, rng=None) -> ConnesSpectra:
    """Intersections of sp_F and strong sp_F over corners e_J X e_J, J a nonzero ideal of X^alpha."""
    gamma = set(sys.table.labels)
    strong = set(sys.table.labels)
    per_ideal = []
    for J in ideal_lattice(sys.fixed):
        local = arveson_spectra(corner_system(sys, J.support, rng=rng), rng=rng)
        gamma &= local.sp_F.labels
        strong &= local.strong_sp_F.labels
        per_ideal.append((J.selector, local.sp_F.labels, local.strong_sp_F.labels))
    if not strong <= gamma:
        raise InternalInconsistency("strong Connes spectrum is not inside the Connes spectrum")
    return ConnesSpectra(_spectrum(gamma), _spectrum(strong), per_ideal)


def _minimal_projections(A: FdAlgebra, i: int, rng) -> list[np.ndarray]:
    """n_i pairwise orthogonal minimal projections of A summing to the i-th central projection."""
    z = A.central_projections[i]
    n = A.block_dims[i]
    summand = A.structure.summands[i]
    if n == 1:
        return [z]
    last = None
    for _ in range(MAX_DRAWS):
        c = rng.standard_normal(summand.dim) + 1j * rng.standard_normal(summand.dim)
        h = np.tensordot(c, summand.basis, axes=1)
        h = (h + h.conj().T) / 2
        try:
            pieces = spectral_pieces(h, z, A.tol)
        except DegenerateSpectrum as exc:
            last = exc
            continue
        if len(pieces) == n:
            return [p for _, p in pieces]
    raise DegenerateSpectrum(f"no generic element found in block {i} after {MAX_DRAWS} draws"
                             + (f" ({last})" if last else ""))


def connes_oracle(sys: DynamicalSystem, mode: str = "full", samples: int = 16,
                  budget: int = ORACLE_BUDGET, rng=None) -> OracleResult:
    """Intersections over invariant corners p X p, one p per rank tuple of the blocks of X^alpha.

    ``mode='sampled'`` draws ``samples`` random tuples (always including the
    full tuple) instead of enumerating all of them.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    A = sys.fixed
    dims = A.block_dims
    if mode == "full":
        count = math.prod(n + 1 for n in dims)
        if count > budget:
            raise EnumerationBudgetExceeded(f"{count} rank tuples exceed the budget of {budget}")
        tuples = [t for t in itertools.product(*(range(n + 1) for n in dims)) if any(t)]
    elif mode == "sampled":
        drawn = {tuple(dims)}
        for _ in range(samples):
            t = tuple(int(rng.integers(0, n + 1)) for n in dims)
            if any(t):
                drawn.add(t)
        tuples = sorted(drawn)
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    minimal = [_minimal_projections(A, i, rng) for i in range(len(dims))]
    labels = set(sys.table.labels)
    gamma, strong, plain = set(labels), set(labels), set(labels)
    for t in tuples:
        p = sum((q for i, r in enumerate(t) for q in minimal[i][:r]), np.zeros_like(A.unit))
        local = arveson_spectra(corner_system(sys, p, rng=rng), rng=rng)
        gamma &= local.sp_F.labels
        strong &= local.strong_sp_F.labels
        plain &= local.sp.labels
    return OracleResult(_spectrum(gamma), _spectrum(strong), _spectrum(plain), tuples, mode)


def alpha_invariant_ideal_properties(sys: DynamicalSystem) -> InvariantIdealProperties:
    X = sys.algebra
    tol = sys.tol
    k = len(X.central_projections)
    invariant = []
    for I in ideal_lattice(X):
        images = np.concatenate([sys.action.orbit(b)[list(sys.action.generators())] for b in I.span.basis])
        if I.span.contains_all(images, tol):
            invariant.append(I)
    full = frozenset(range(k))
    alpha_simple = all(I.selector == full for I in invariant)
    alpha_prime = all(is_essential(X, I, tol) for I in invariant)
    if alpha_simple != alpha_prime:
        raise InternalInconsistency("alpha-simple and alpha-prime disagree in finite dimension")
    return InvariantIdealProperties(alpha_simple, alpha_prime, tuple(I.selector for I in invariant))
