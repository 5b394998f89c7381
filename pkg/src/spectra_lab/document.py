"""JSON system documents: parsing with located errors, serialization, built-ins.

A document looks like::

    {"name": "...",
     "group": {"preset": "S3"}
              | {"mult": [[...]], "generators": [...], "irreps": [{"label": ..., "matrices": [...]}]},
     "algebra": {"blocks": [2]} | {"basis": [mat, ...], "unit": mat},
     "action": {"type": "inner", "unitaries": {"g1": mat, ...}},
     "tolerances": {"rank_low": 1e-9, ...}}

Matrices are row-major nested arrays whose entries are [re, im] pairs (plain
real numbers are accepted too).  Action keys name group elements ``g<index>``;
a missing action means every implementer is the identity.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import DynamicalSystem, inner_action
from .errors import DocumentError, InvalidInput, NumericalAmbiguity, ShapeMismatch
from .fdcstar import FdAlgebra, block_algebra, subalgebra_from_span
from .groups import (PRESET_NAMES, FiniteGroup, Irrep, IrrepTable, preset_group, validate_group,
                     validate_irrep_table)
from .numeric import DEFAULT_TOL, Tolerances, is_unitary, mat_from_json, mat_to_json

__all__ = ["parse_system", "load_document", "load_system", "system_document", "dump_document",
           "BUILTINS", "builtin_document", "builtin_system"]

UNITARY_ATOL = 1e-9


def _matrix(data, path: str) -> np.ndarray:
    try:
        m = mat_from_json(data)
    except (ValueError, TypeError) as exc:
        raise DocumentError(path, f"not a matrix ({exc})") from None
    if m.ndim != 2:
        raise DocumentError(path, "not a matrix")
    if not np.all(np.isfinite(m)):
        raise DocumentError(path, "matrix has non-finite entries")
    return m


def _tolerances(doc: dict) -> Tolerances:
    raw = doc.get("tolerances") or {}
    if not isinstance(raw, dict):
        raise DocumentError("tolerances", "must be an object")
    try:
        return Tolerances(**{k: float(v) for k, v in raw.items()})
    except (TypeError, ValueError) as exc:
        raise DocumentError("tolerances", str(exc)) from None


def _group(spec) -> IrrepTable:
    if isinstance(spec, str):
        spec = {"preset": spec}
    if not isinstance(spec, dict):
        raise DocumentError("group", "must be a preset name or an object")
    if "preset" in spec:
        try:
            return preset_group(spec["preset"])
        except InvalidInput as exc:
            raise DocumentError("group.preset", str(exc)) from None
    for key in ("mult", "irreps"):
        if key not in spec:
            raise DocumentError(f"group.{key}", "missing")
    try:
        G = FiniteGroup.from_table(spec["mult"], spec.get("generators"), str(spec.get("name", "")))
    except (ValueError, TypeError, IndexError) as exc:
        raise DocumentError("group.mult", str(exc)) from None
    verdict = validate_group(G)
    if not verdict:
        raise DocumentError("group.mult", "; ".join(verdict.failures))
    irreps = []
    for i, item in enumerate(spec["irreps"]):
        path = f"group.irreps[{i}]"
        if not isinstance(item, dict) or "matrices" not in item:
            raise DocumentError(path, "needs 'label' and 'matrices'")
        mats = [_matrix(m, f"{path}.matrices[{g}]") for g, m in enumerate(item["matrices"])]
        if len({m.shape for m in mats}) > 1 or (mats and mats[0].shape[0] != mats[0].shape[1]):
            raise DocumentError(f"{path}.matrices", "matrices must be square of one size")
        irreps.append(Irrep(str(item.get("label", f"rho{i}")), np.array(mats)))
    table = IrrepTable(G, irreps)
    verdict = validate_irrep_table(table)
    if not verdict:
        raise DocumentError("group.irreps", "; ".join(verdict.failures))
    return table


def _algebra(spec, tol: Tolerances) -> FdAlgebra:
    if not isinstance(spec, dict):
        raise DocumentError("algebra", "must be an object")
    if "blocks" in spec:
        blocks = spec["blocks"]
        if (not isinstance(blocks, list) or not blocks
                or not all(isinstance(n, int) and n > 0 for n in blocks)):
            raise DocumentError("algebra.blocks", "must be a nonempty list of positive integers")
        return block_algebra(blocks)
    if "basis" not in spec or "unit" not in spec:
        raise DocumentError("algebra", "needs either 'blocks' or both 'basis' and 'unit'")
    basis = [_matrix(m, f"algebra.basis[{i}]") for i, m in enumerate(spec["basis"])]
    if not basis:
        raise DocumentError("algebra.basis", "is empty")
    unit = _matrix(spec["unit"], "algebra.unit")
    N = unit.shape[0]
    for i, m in enumerate(basis):
        if m.shape != (N, N):
            raise DocumentError(f"algebra.basis[{i}]", f"must be {N}x{N} like the unit")
    try:
        return subalgebra_from_span(N, np.array(basis), unit, tol)
    except (InvalidInput, ShapeMismatch) as exc:
        raise DocumentError("algebra", f"{type(exc).__name__}: {exc}") from None


def _element(G: FiniteGroup, key: str, path: str) -> int:
    text = key[1:] if key.startswith("g") else key
    try:
        g = int(text)
    except ValueError:
        raise DocumentError(path, f"unknown group element {key!r}") from None
    if not 0 <= g < G.order:
        raise DocumentError(path, f"group element index {g} out of range")
    return g


def parse_system(doc: dict, rng=None) -> DynamicalSystem:
    """Build and validate the system described by ``doc``; errors carry the offending field."""
    if not isinstance(doc, dict):
        raise DocumentError("", "document must be a JSON object")
    for key in ("group", "algebra"):
        if key not in doc:
            raise DocumentError(key, "missing")
    tol = _tolerances(doc)
    table = _group(doc["group"])
    X = _algebra(doc["algebra"], tol)
    N = X.ambient
    action = doc.get("action") or {"type": "inner", "unitaries": {}}
    if not isinstance(action, dict):
        raise DocumentError("action", "must be an object")
    if action.get("type", "inner") != "inner":
        raise DocumentError("action.type", f"unsupported action type {action.get('type')!r}")
    raw = action.get("unitaries") or {}
    if not isinstance(raw, dict):
        raise DocumentError("action.unitaries", "must map group elements to matrices")
    G = table.group
    given = {}
    for key, value in raw.items():
        path = f"action.unitaries.{key}"
        g = _element(G, str(key), path)
        u = _matrix(value, path)
        if u.shape != (N, N):
            raise DocumentError(path, f"must be {N}x{N}")
        if not is_unitary(u, UNITARY_ATOL):
            raise DocumentError(path, "NotUnitary: matrix is not unitary")
        given[g] = u
    if not given:
        given = {g: np.eye(N, dtype=complex) for g in range(G.order)}
    try:
        return inner_action(table, X, given, tol, name=str(doc.get("name", "")), rng=rng)
    except NumericalAmbiguity:
        raise
    except (InvalidInput, ShapeMismatch) as exc:
        raise DocumentError("action.unitaries", f"{type(exc).__name__}: {exc}") from None


def load_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_system(path, rng=None) -> DynamicalSystem:
    return parse_system(load_document(path), rng=rng)


def _blocks_of(X: FdAlgebra):
    """Block sizes if X is literally the canonical block-diagonal algebra, else None."""
    sizes = X.block_dims
    if X.ambient != sum(sizes) or not np.allclose(X.unit, np.eye(X.ambient)):
        return None
    canonical = block_algebra(sizes)
    if canonical.dim == X.dim and X.span.contains_all(canonical.basis):
        return list(sizes)
    return None


def system_document(sys: DynamicalSystem, preset: str | None = None) -> dict:
    """A document that parses back to ``sys`` (implementers given on the generators)."""
    G = sys.group
    if preset is None and G.name in PRESET_NAMES:
        preset = G.name
    if preset is not None:
        group = {"preset": preset}
    else:
        group = {"mult": G.mult.tolist(), "generators": list(G.generators),
                 "irreps": [{"label": p.label, "matrices": [mat_to_json(m) for m in p.matrices]}
                            for p in sys.table]}
    blocks = _blocks_of(sys.algebra)
    algebra = ({"blocks": blocks} if blocks is not None else
               {"basis": [mat_to_json(b) for b in sys.algebra.basis],
                "unit": mat_to_json(sys.algebra.unit)})
    gens = sys.action.generators()
    doc = {"group": group, "algebra": algebra,
           "action": {"type": "inner",
                      "unitaries": {G.element_name(g): mat_to_json(sys.action.implementers[g])
                                    for g in gens}}}
    if sys.name:
        doc = {"name": sys.name, **doc}
    if sys.tol != DEFAULT_TOL:
        doc["tolerances"] = {"rank_low": sys.tol.rank_low, "rank_high": sys.tol.rank_high,
                             "membership": sys.tol.membership, "eig_gap": sys.tol.eig_gap}
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=False)


# -- built-in systems ------------------------------------------------------------

_SX = [[0, 1], [1, 0]]
_SY = [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
_SZ = [[1, 0], [0, -1]]


def _s3_m2() -> dict:
    std = preset_group("S3")["std"].matrices
    # generators of S3 are the rotation (index 1) and the reflection (index 3)
    return {"name": "s3-m2", "group": {"preset": "S3"}, "algebra": {"blocks": [2]},
            "action": {"type": "inner", "unitaries": {"g1": mat_to_json(std[1]),
                                                      "g3": mat_to_json(std[3])}}}


BUILTINS = {
    "s3-m2": _s3_m2,
    "z2-diag-m2": lambda: {"name": "z2-diag-m2", "group": {"preset": "Z2"}, "algebra": {"blocks": [2]},
                           "action": {"type": "inner", "unitaries": {"g1": _SZ}}},
    "pauli-m2": lambda: {"name": "pauli-m2", "group": {"preset": "Z2xZ2"}, "algebra": {"blocks": [2]},
                         "action": {"type": "inner",
                                    "unitaries": {"g1": _SZ, "g2": _SX, "g3": _SY}}},
    "c2-trivial-z2": lambda: {"name": "c2-trivial-z2", "group": {"preset": "Z2"},
                              "algebra": {"blocks": [1, 1]}},
    "c2-swap-z2": lambda: {"name": "c2-swap-z2", "group": {"preset": "Z2"}, "algebra": {"blocks": [1, 1]},
                           "action": {"type": "inner", "unitaries": {"g1": _SX}}},
}


def builtin_document(name: str) -> dict:
    if name not in BUILTINS:
        raise DocumentError("", f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}")
    return BUILTINS[name]()


def builtin_system(name: str, rng=None) -> DynamicalSystem:
    return parse_system(builtin_document(name), rng=rng)
