import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectra_lab.document import parse_system
from spectra_lab.errors import InvalidInput
from spectra_lab.fuzz import MAX_ATTEMPTS, fuzz, fuzz_documents, haar_unitary, random_document


def test_haar_unitary_is_unitary():
    u = haar_unitary(5, np.random.default_rng(0))
    assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)


def test_documents_are_bit_identical_per_seed():
    a = json.dumps(fuzz_documents(7, 12))
    b = json.dumps(fuzz_documents(7, 12))
    assert a == b
    assert a != json.dumps(fuzz_documents(8, 12))


def test_prefix_stability():
    assert fuzz_documents(3, 5) == fuzz_documents(3, 9)[:5]


@given(st.integers(0, 2**20), st.integers(1, 8), st.integers(1, 6))
def test_bounds_and_validity(seed, max_group, max_ambient):
    (s,) = fuzz(seed, 1, max_group, max_ambient)
    assert s.group.order <= max_group
    assert s.ambient <= max_ambient
    assert s.name == f"fuzz-{seed}-0"


def test_every_document_parses():
    for doc in fuzz_documents(11, 20):
        assert parse_system(doc).fixed.dim >= 1


def swaps_blocks(doc):
    s = parse_system(doc)
    zs = s.algebra.central_projections
    return any(np.linalg.norm(zs[j] @ u @ zs[i]) > 1e-6
               for u in s.action.implementers for i in range(len(zs)) for j in range(len(zs)) if i != j)


def test_some_systems_permute_blocks():
    docs = fuzz_documents(42, 40)
    assert any(swaps_blocks(d) for d in docs)
    assert not all(swaps_blocks(d) for d in docs)


def test_random_document_rejects_impossible_bounds():
    with pytest.raises(InvalidInput):
        random_document(0, 0, max_group=0)
    assert MAX_ATTEMPTS >= 1
