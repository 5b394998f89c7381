"""Finite groups with hand-coded tables of unitary irreducible representations."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalAmbiguity, UnknownGroup
from .numeric import DEFAULT_TOL, Tolerances, intertwiners

__all__ = [
    "FiniteGroup",
    "Irrep",
    "IrrepTable",
    "Verdict",
    "PRESET_NAMES",
    "preset_group",
    "validate_group",
    "validate_irrep_table",
]


@dataclass
class Verdict:
    ok: bool
    failures: list[str] = field(default_factory=list)
    deviations: dict[str, float] = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)


@dataclass(eq=False)
class FiniteGroup:
    """Finite group given by its multiplication table on indices ``0..order-1``."""

    mult: np.ndarray
    identity: int
    inverse: tuple[int, ...]
    generators: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.mult)

    def product(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def element_name(self, g: int) -> str:
        return f"g{g}"

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def words(self) -> dict[int, tuple[int, ...]]:
        """A shortest word in the generators for every reachable element (BFS)."""
        words = {self.identity: ()}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = self.product(g, s)
                    if h not in words:
                        words[h] = words[g] + (s,)
                        nxt.append(h)
            frontier = nxt
        return words

    @classmethod
    def from_table(cls, mult, generators=None, name: str = "") -> "FiniteGroup":
        mult = np.asarray(mult, dtype=int)
        n = len(mult)
        identity = next((e for e in range(n)
                         if np.array_equal(mult[e], np.arange(n)) and np.array_equal(mult[:, e], np.arange(n))), None)
        if identity is None:
            raise ValueError("multiplication table has no identity element")
        inverse = []
        for g in range(n):
            hits = np.flatnonzero(mult[g] == identity)
            if len(hits) != 1:
                raise ValueError(f"element {g} has no unique inverse")
            inverse.append(int(hits[0]))
        if generators is None:
            generators = tuple(range(n))
        return cls(mult, identity, tuple(inverse), tuple(int(s) for s in generators), name)


@dataclass(eq=False)
class Irrep:
    label: str
    matrices: np.ndarray  # shape (|G|, d, d)

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=complex)
        if self.matrices.ndim != 3 or self.matrices.shape[1] != self.matrices.shape[2]:
            raise ValueError(f"irrep {self.label}: matrices must have shape (|G|, d, d)")

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


@dataclass(eq=False)
class IrrepTable:
    group: FiniteGroup
    irreps: tuple[Irrep, ...]

    def __post_init__(self):
        self.irreps = tuple(self.irreps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.irreps)

    def __getitem__(self, label: str) -> Irrep:
        for p in self.irreps:
            if p.label == label:
                return p
        raise KeyError(label)

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self):
        return len(self.irreps)

    @property
    def trivial(self) -> Irrep:
        for p in self.irreps:
            if p.dim == 1 and np.allclose(p.matrices, 1):
                return p
        raise ValueError("table has no trivial representation")


# -- presets ----------------------------------------------------------------

def _cyclic(n: int) -> IrrepTable:
    k = np.arange(n)
    mult = (k[:, None] + k[None, :]) % n
    group = FiniteGroup.from_table(mult, generators=(1 % n,) if n > 1 else (), name=f"Z{n}")
    irreps = [Irrep(f"chi{j}", np.exp(2j * np.pi * j * k / n).reshape(n, 1, 1)) for j in range(n)]
    return IrrepTable(group, irreps)


def _table_from_matrices(mats: list[np.ndarray]) -> np.ndarray:
    n = len(mats)
    mult = np.empty((n, n), dtype=int)
    for a, b in itertools.product(range(n), repeat=2):
        prod = mats[a] @ mats[b]
        mult[a, b] = next(c for c in range(n) if np.allclose(mats[c], prod))
    return mult


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _dihedral(n: int, name: str) -> IrrepTable:
    # element r^k s^e has index k + n e
    refl = np.diag([1.0, -1.0]).astype(complex)
    rot = _rotation(2 * np.pi / n)
    elems = [(k, e) for e in range(2) for k in range(n)]
    faithful = [np.linalg.matrix_power(rot, k) @ np.linalg.matrix_power(refl, e) for k, e in elems]
    group = FiniteGroup.from_table(_table_from_matrices(faithful), generators=(1, n), name=name)

    def linear(a: int, b: int) -> np.ndarray:
        return np.array([a**k * b**e for k, e in elems], dtype=complex).reshape(-1, 1, 1)

    irreps = [Irrep("triv", linear(1, 1)), Irrep("sgn", linear(1, -1))]
    if n % 2 == 0:
        irreps += [Irrep("rsgn", linear(-1, 1)), Irrep("rssgn", linear(-1, -1))]
    for j in range(1, (n - 1) // 2 + 1):
        rj = _rotation(2 * np.pi * j / n)
        mats = [np.linalg.matrix_power(rj, k) @ np.linalg.matrix_power(refl, e) for k, e in elems]
        irreps.append(Irrep("std" if j == 1 else f"std{j}", np.array(mats)))
    return IrrepTable(group, irreps)


def _quaternion() -> IrrepTable:
    one = np.eye(2, dtype=complex)
    qi = np.diag([1j, -1j])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    mats = [one, -one, qi, -qi, qj, -qj, qk, -qk]
    group = FiniteGroup.from_table(_table_from_matrices(mats), generators=(2, 4), name="Q8")

    def linear(a: int, b: int) -> np.ndarray:
        vals = [1, 1, a, a, b, b, a * b, a * b]
        return np.array(vals, dtype=complex).reshape(-1, 1, 1)

    irreps = [Irrep("triv", linear(1, 1)), Irrep("i", linear(1, -1)),
              Irrep("j", linear(-1, 1)), Irrep("k", linear(-1, -1)),
              Irrep("std", np.array(mats))]
    return IrrepTable(group, irreps)


def _klein() -> IrrepTable:
    elems = [(a, b) for a in range(2) for b in range(2)]
    mult = np.array([[2 * ((a1 + a2) % 2) + (b1 + b2) % 2 for a2, b2 in elems] for a1, b1 in elems])
    group = FiniteGroup.from_table(mult, generators=(2, 1), name="Z2xZ2")
    irreps = [Irrep(f"chi{s}{t}", np.array([(-1) ** (s * a + t * b) for a, b in elems],
                                           dtype=complex).reshape(-1, 1, 1))
              for s in range(2) for t in range(2)]
    return IrrepTable(group, irreps)


PRESET_NAMES = tuple(f"Z{n}" for n in range(1, 9)) + ("S3", "D4", "Q8", "Z2xZ2")


def preset_group(name: str) -> IrrepTable:
    """Validated irrep table for one of :data:`PRESET_NAMES`."""
    if name in PRESET_NAMES[:8]:
        return _cyclic(int(name[1:]))
    builders = {"S3": lambda: _dihedral(3, "S3"), "D4": lambda: _dihedral(4, "D4"),
                "Q8": _quaternion, "Z2xZ2": _klein}
    if name not in builders:
        raise UnknownGroup(f"unknown preset group {name!r}; choose from {', '.join(PRESET_NAMES)}")
    return builders[name]()


# -- validation --------------------------------------------------------------

def validate_group(G: FiniteGroup) -> Verdict:
    failures = []
    mult = np.asarray(G.mult)
    n = len(mult)
    if mult.shape != (n, n) or mult.min(initial=0) < 0 or mult.max(initial=0) >= n:
        return Verdict(False, ["table: not an n x n table of indices 0..n-1"])
    idx = np.arange(n)
    lhs = mult[mult[:, :, None], idx[None, None, :]]   # (ab)c
    rhs = mult[idx[:, None, None], mult[None, :, :]]   # a(bc)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = bad[0]
        failures.append(f"associativity: ({a}*{b})*{c} != {a}*({b}*{c}) ({len(bad)} triples)")
    e = G.identity
    if not (0 <= e < n) or not (np.array_equal(mult[e], idx) and np.array_equal(mult[:, e], idx)):
        failures.append(f"identity: element {e} is not a two-sided identity")
    elif len(G.inverse) != n or any(
            not (0 <= G.inverse[g] < n) or mult[g, G.inverse[g]] != e or mult[G.inverse[g], g] != e
            for g in range(n)):
        failures.append("inverse: inverse table is wrong")
    if any(not (0 <= s < n) for s in G.generators):
        failures.append("generators: index out of range")
    elif not failures and len(G.words()) != n:
        failures.append(f"generators: generate only {len(G.words())} of {n} elements")
    return Verdict(not failures, failures)


def validate_irrep_table(T: IrrepTable, tol: Tolerances = DEFAULT_TOL, atol: float = 1e-9) -> Verdict:
    """Check homomorphism, unitarity, irreducibility, completeness, inequivalence and Schur orthogonality."""
    G = T.group
    n = G.order
    failures: list[str] = []
    dev: dict[str, float] = {}
    if any(p.matrices.shape[0] != n for p in T.irreps):
        return Verdict(False, [f"irrep {p.label}: has {p.matrices.shape[0]} matrices for {n} elements"
                               for p in T.irreps if p.matrices.shape[0] != n], dev)
    for p in T.irreps:
        where = f"irrep {p.label}"
        m = p.matrices
        hom = float(np.max(np.abs(np.einsum("aij,bjk->abik", m, m) - m[G.mult])))
        uni = float(np.max(np.abs(np.einsum("aji,ajk->aik", m.conj(), m) - np.eye(p.dim))))
        dev[f"{where} homomorphism"] = hom
        dev[f"{where} unitarity"] = uni
        if hom > atol:
            failures.append(f"{where}: homomorphism deviation {hom:.2e}")
        if uni > atol:
            failures.append(f"{where}: unitarity deviation {uni:.2e}")
        try:
            k = intertwiners(list(m), list(m), tol).dim
        except NumericalAmbiguity as exc:
            failures.append(f"{where}: irreducibility undecidable ({exc})")
        else:
            if k != 1:
                failures.append(f"{where}: irreducibility fails, self-intertwiner space has dim {k}")
    total = sum(p.dim ** 2 for p in T.irreps)
    if total != n:
        failures.append(f"completeness: sum of d^2 = {total} != |G| = {n}")
    for p, q in itertools.combinations(T.irreps, 2):
        try:
            k = intertwiners(list(p.matrices), list(q.matrices), tol).dim
        except NumericalAmbiguity as exc:
            failures.append(f"inequivalence {p.label}/{q.label}: undecidable ({exc})")
            continue
        if k:
            failures.append(f"inequivalence: {p.label} and {q.label} are equivalent")

    # Schur orthogonality: (1/|G|) sum_g conj(pi_ij(g)) rho_kl(g) = delta / d_pi
    coeffs = np.concatenate([p.matrices.reshape(n, -1) for p in T.irreps], axis=1)
    expected = np.concatenate([np.full(p.dim ** 2, 1.0 / p.dim) for p in T.irreps])
    gram = coeffs.conj().T @ coeffs / n
    schur = float(np.max(np.abs(gram - np.diag(expected))))
    dev["schur orthogonality"] = schur
    if schur > atol:
        failures.append(f"schur orthogonality: deviation {schur:.2e}")
    return Verdict(not failures, failures, dev)
