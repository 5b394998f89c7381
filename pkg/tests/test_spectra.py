import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectra_lab.dynamics import inner_action
from spectra_lab.errors import EnumerationBudgetExceeded
from spectra_lab.fdcstar import block_algebra
from spectra_lab.fuzz import fuzz
from spectra_lab.groups import preset_group
from spectra_lab.spectra import (alpha_invariant_ideal_properties, arveson_spectra, connes_oracle,
                                 connes_spectra, corner_system)

# (sp, sp_F, strong sp_F, Gamma_F, strong Gamma_F), worked out by hand
EXPECTED = {
    "s3-m2": ({"triv", "sgn", "std"}, {"triv", "sgn"}, {"triv", "sgn"}, {"triv", "sgn"}, {"triv", "sgn"}),
    "z2-diag-m2": ({"chi0", "chi1"},) * 3 + ({"chi0"}, {"chi0"}),
    "pauli-m2": ({"chi00", "chi01", "chi10", "chi11"},) * 5,
    "c2-trivial-z2": ({"chi0"},) * 5,
    "c2-swap-z2": ({"chi0", "chi1"},) * 5,
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_builtin_spectra(builtins, name):
    s = builtins[name]
    a, c = arveson_spectra(s), connes_spectra(s)
    got = tuple(set(x.labels) for x in (a.sp, a.sp_F, a.strong_sp_F, c.gamma_F, c.strong_gamma_F))
    assert got == EXPECTED[name]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_oracle_agrees_on_builtins(builtins, name):
    s = builtins[name]
    o = connes_oracle(s)
    assert set(o.gamma_F.labels) == EXPECTED[name][3]
    assert set(o.strong_gamma_F.labels) == EXPECTED[name][4]


def test_s3_evidence(s3):
    ev = arveson_spectra(s3).evidence["std"]
    assert (ev.x1_dim, ev.x2_dim, ev.fixed_dim, ev.ideal_dim) == (2, 2, 3, 1)
    assert ev.fixed_blocks == (1, 1, 1)
    assert not ev.essential and not ev.full


def test_trivial_group_has_only_the_trivial_spectrum():
    s = inner_action(preset_group("Z1"), block_algebra([2]), {})
    a, c = arveson_spectra(s), connes_spectra(s)
    assert a.sp.labels == a.strong_sp_F.labels == c.gamma_F.labels == c.strong_gamma_F.labels == {"chi0"}


def test_corner_system_is_compressed(builtins):
    s = builtins["z2-diag-m2"]
    c = corner_system(s, np.diag([1, 0]).astype(complex))
    assert c.ambient == 1 and arveson_spectra(c).sp.labels == {"chi0"}


def test_oracle_budget(builtins):
    s = builtins["z2-diag-m2"]
    with pytest.raises(EnumerationBudgetExceeded):
        connes_oracle(s, budget=3)
    # the budget counts prod(n_i + 1) tuples; the zero tuple is then dropped
    assert len(connes_oracle(s, budget=4).tuples) == 3


def test_sampled_oracle_bounds_the_reduction(builtins):
    s = builtins["z2-diag-m2"]
    o = connes_oracle(s, mode="sampled", samples=4, rng=np.random.default_rng(3))
    assert o.mode == "sampled" and (1, 1) in o.tuples
    assert connes_spectra(s).gamma_F.labels <= o.gamma_F.labels
    with pytest.raises(ValueError):
        connes_oracle(s, mode="bogus")


def test_invariant_ideal_examples(builtins):
    p = alpha_invariant_ideal_properties(builtins["c2-trivial-z2"])
    assert not p.alpha_simple and not p.alpha_prime and len(p.invariant_selectors) == 3
    p = alpha_invariant_ideal_properties(builtins["c2-swap-z2"])
    assert p.alpha_simple and p.alpha_prime and p.invariant_selectors == (frozenset({0, 1}),)
    assert alpha_invariant_ideal_properties(builtins["s3-m2"]).alpha_simple


# -- properties on fuzzed systems --------------------------------------------------

@given(st.integers(0, 2**20))
def test_spectra_properties(seed):
    s = fuzz(seed, 1, max_group=8, max_ambient=4)[0]
    a, c = arveson_spectra(s), connes_spectra(s)
    assert a.strong_sp_F <= a.sp_F <= a.sp
    assert c.strong_gamma_F <= c.gamma_F <= a.sp_F
    assert c.gamma_F.labels == c.strong_gamma_F.labels
    assert s.table.trivial.label in c.strong_gamma_F
    o = connes_oracle(s)
    assert o.gamma_F.labels == c.gamma_F.labels
    assert o.strong_gamma_F.labels == c.strong_gamma_F.labels
    if s.group.is_abelian():
        assert o.plain_gamma.labels == o.gamma_F.labels
