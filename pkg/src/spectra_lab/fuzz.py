"""Deterministic random systems for property suites.

Each system is drawn from ``default_rng([seed, index, attempt])``, so the
stream for a seed never depends on how many systems were requested.  The
action on each block is Ad of a random direct sum of irreps conjugated by a
Haar-random unitary.  Pairs of equal blocks may additionally be swapped by
the elements on which a real +-1 character takes the value -1.
"""
from __future__ import annotations

import numpy as np

from .document import parse_system
from .dynamics import DynamicalSystem
from .errors import InvalidInput, NumericalAmbiguity, SpectraLabError
from .groups import PRESET_NAMES, IrrepTable, preset_group
from .numeric import mat_to_json

__all__ = ["fuzz", "fuzz_documents", "random_document", "haar_unitary", "MAX_ATTEMPTS"]

MAX_ATTEMPTS = 10


def haar_unitary(n: int, rng) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _random_rep(table: IrrepTable, n: int, rng) -> np.ndarray:
    """(|G|, n, n) unitary representation: random irreps summing to dimension n, then conjugated."""
    irreps = list(table)
    parts, left = [], n
    while left:
        fits = [p for p in irreps if p.dim <= left]
        p = fits[rng.integers(len(fits))]
        parts.append(p)
        left -= p.dim
    G = table.group.order
    rep = np.zeros((G, n, n), dtype=complex)
    off = 0
    for p in parts:
        rep[:, off:off + p.dim, off:off + p.dim] = p.matrices
        off += p.dim
    w = haar_unitary(n, rng)
    return w @ rep @ w.conj().T


def _sign_characters(table: IrrepTable) -> list[np.ndarray]:
    """Nontrivial characters with values +-1 (each gives a homomorphism onto Z2)."""
    out = []
    for p in table:
        if p.dim != 1:
            continue
        chi = p.matrices[:, 0, 0]
        if np.allclose(chi.imag, 0) and np.allclose(np.abs(chi.real), 1) and np.any(chi.real < 0):
            out.append(np.round(chi.real))
    return out


def _random_sizes(max_ambient: int, rng) -> list[int]:
    total = int(rng.integers(1, max_ambient + 1))
    sizes = []
    while total:
        n = int(rng.integers(1, total + 1))
        sizes.append(n)
        total -= n
    return sizes


def random_document(seed: int, index: int, attempt: int = 0, max_group: int = 8,
                    max_ambient: int = 6) -> dict:
    rng = np.random.default_rng([seed, index, attempt])
    names = [n for n in PRESET_NAMES if preset_group(n).group.order <= max_group]
    if not names:
        raise InvalidInput(f"no preset group has order <= {max_group}")
    name = names[rng.integers(len(names))]
    table = preset_group(name)
    G = table.group
    sizes = _random_sizes(max_ambient, rng)
    signs = _sign_characters(table)
    blocks, reps = [], []
    used = sum(sizes)
    for n in sizes:
        if signs and used + n <= max_ambient and rng.random() < 0.3:
            used += n
            # swap a pair of equal blocks along a +-1 character
            chi = signs[rng.integers(len(signs))]
            rho = _random_rep(table, n, rng)
            swap = np.array([[np.eye(2), np.array([[0, 1], [1, 0]])][int(c < 0)] for c in chi])
            reps.append(np.einsum("gab,gij->gaibj", swap, rho).reshape(G.order, 2 * n, 2 * n))
            blocks += [n, n]
        else:
            reps.append(_random_rep(table, n, rng))
            blocks.append(n)
    N = sum(blocks)
    U = np.zeros((G.order, N, N), dtype=complex)
    off = 0
    for r in reps:
        k = r.shape[1]
        U[:, off:off + k, off:off + k] = r
        off += k
    gens = G.generators or (G.identity,)
    return {"name": f"fuzz-{seed}-{index}", "group": {"preset": name}, "algebra": {"blocks": blocks},
            "action": {"type": "inner",
                       "unitaries": {G.element_name(g): mat_to_json(U[g]) for g in gens}}}


def _generate(seed: int, index: int, max_group: int, max_ambient: int, rng=None):
    last = None
    for attempt in range(MAX_ATTEMPTS):
        doc = random_document(seed, index, attempt, max_group, max_ambient)
        try:
            return doc, parse_system(doc, rng=rng)
        except (NumericalAmbiguity, SpectraLabError) as exc:
            last = exc
    raise SpectraLabError(f"system {index} of seed {seed}: {MAX_ATTEMPTS} draws failed ({last})")


def fuzz_documents(seed: int, count: int, max_group: int = 8, max_ambient: int = 6) -> list[dict]:
    return [_generate(seed, i, max_group, max_ambient)[0] for i in range(count)]


def fuzz(seed: int, count: int, max_group: int = 8, max_ambient: int = 6) -> list[DynamicalSystem]:
    """``count`` validated systems, reproducible per seed."""
    return [_generate(seed, i, max_group, max_ambient)[1] for i in range(count)]
