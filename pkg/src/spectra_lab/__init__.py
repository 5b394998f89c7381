"""Spectral invariants of finite group actions on finite-dimensional C*-algebras."""
from .document import builtin_system, load_system, parse_system, system_document
from .dynamics import (DynamicalSystem, fixed_point_algebra, inner_action, restrict,
                       spectral_projection, x1, x2)
from .fdcstar import FdAlgebra, block_algebra, classify, ideal_lattice, subalgebra_from_span
from .fuzz import fuzz
from .groups import PRESET_NAMES, IrrepTable, preset_group
from .numeric import DEFAULT_TOL, MatrixSubspace, Tolerances
from .spectra import (alpha_invariant_ideal_properties, arveson_spectra, connes_oracle,
                      connes_spectra)
from .verify import VerificationReport, verify

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "DynamicalSystem", "FdAlgebra", "IrrepTable", "MatrixSubspace", "PRESET_NAMES",
    "Tolerances", "VerificationReport", "alpha_invariant_ideal_properties", "arveson_spectra",
    "block_algebra", "builtin_system", "classify", "connes_oracle", "connes_spectra",
    "fixed_point_algebra", "fuzz", "ideal_lattice", "inner_action", "load_system",
    "parse_system", "preset_group", "restrict", "spectral_projection", "subalgebra_from_span",
    "system_document", "verify", "x1", "x2",
]
