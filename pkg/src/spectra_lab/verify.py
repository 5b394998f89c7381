"""Machine checks of the structure results on a concrete system.

Every check is tri-state.  A check that hits a numerical gray zone is
``ambiguous``; one whose computed sides disagree is ``contradicted``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (DynamicalSystem, ideal_pair_check, partial_trace, projection_operator,
                       reconstruction_check, trace_ideal_identity, x1)
from .errors import EnumerationBudgetExceeded, InternalInconsistency, NumericalAmbiguity
from .fdcstar import Classification, classify, ideal_lattice
from .numeric import Relation
from .spectra import (ArvesonSpectra, ConnesSpectra, InvariantIdealProperties, OracleResult,
                      alpha_invariant_ideal_properties, arveson_spectra, connes_oracle,
                      connes_spectra)

__all__ = ["Status", "Check", "VerificationReport", "verify", "CHECK_NAMES", "THEOREM_CHECKS"]

COMPLETENESS_ATOL = 1e-8


class Status(enum.Enum):
    HOLDS = "holds"
    CONTRADICTED = "contradicted"
    AMBIGUOUS = "ambiguous"


@dataclass
class Check:
    status: Status
    detail: str = ""
    sides: tuple | None = None   # truth values of the two sides of a biconditional

    def to_json(self) -> dict:
        out = {"status": self.status.value, "detail": self.detail}
        if self.sides is not None:
            out["sides"] = list(self.sides)
        return out


CHECK_NAMES = (
    "simple_criterion",        # all twisted fixed algebras simple <=> alpha-simple and sp = strong Gamma
    "prime_criterion",         # all twisted fixed algebras prime  <=> alpha-prime and sp = Gamma
    "simple_transfer",         # X^alpha simple => twisted fixed algebras simple on strong sp_F
    "prime_transfer",          # X^alpha prime  => twisted fixed algebras prime on sp_F
    "trace_ideal_identity",
    "fourier_completeness",
    "spectral_calculus",
    "connes_equality",
    "abelian_plain_intersection",
    "spectral_chain",
    "reduction_matches_oracle",
)

THEOREM_CHECKS = {"simple": ("simple_criterion",), "prime": ("prime_criterion",)}


@dataclass(eq=False)
class VerificationReport:
    system: DynamicalSystem
    checks: dict[str, Check]
    arveson: ArvesonSpectra | None = None
    connes: ConnesSpectra | None = None
    oracle: OracleResult | None = None
    invariant_ideals: InvariantIdealProperties | None = None
    classifications: dict[str, Classification] = field(default_factory=dict)
    deviations: dict[str, float] = field(default_factory=dict)
    error: str = ""

    def outcome(self, names=None) -> str:
        """'fail' if any selected check is contradicted, else 'ambiguous' if any is, else 'pass'."""
        if self.error and self.arveson is None:
            return "ambiguous"
        selected = [self.checks[n] for n in (names or self.checks) if n in self.checks]
        if any(c.status is Status.CONTRADICTED for c in selected):
            return "fail"
        if any(c.status is Status.AMBIGUOUS for c in selected):
            return "ambiguous"
        return "pass"

    def to_json(self, names=None) -> dict:
        order = self.system.table.labels

        def labels(s):
            return s.ordered(order) if s is not None else None

        a, c, o = self.arveson, self.connes, self.oracle
        out = {
            "group": self.system.group.name,
            "irreps": list(order),
            "outcome": self.outcome(names),
            "spectra": None if a is None else {
                "sp": labels(a.sp), "sp_F": labels(a.sp_F), "strong_sp_F": labels(a.strong_sp_F),
                "gamma_F": labels(c.gamma_F) if c else None,
                "strong_gamma_F": labels(c.strong_gamma_F) if c else None,
            },
            "evidence": None if a is None else {k: v.to_json() for k, v in a.evidence.items()},
            "fixed_point_classification": {
                k: {"simple": v.simple, "prime": v.prime, "center_dim": v.center_dim,
                    "block_dims": list(v.block_dims)} for k, v in self.classifications.items()},
            "checks": {k: v.to_json() for k, v in self.checks.items() if names is None or k in names},
            "deviations": self.deviations,
        }
        if o is not None:
            out["oracle"] = {"mode": o.mode, "corners": len(o.tuples), "gamma_F": labels(o.gamma_F),
                             "strong_gamma_F": labels(o.strong_gamma_F),
                             "plain_gamma": labels(o.plain_gamma)}
        if self.invariant_ideals is not None:
            out["alpha_simple"] = self.invariant_ideals.alpha_simple
            out["alpha_prime"] = self.invariant_ideals.alpha_prime
        if self.error:
            out["error"] = self.error
        return out


def _guard(fn):
    """Run one check, turning gray-zone and inconsistency errors into verdicts."""
    try:
        return fn()
    except NumericalAmbiguity as exc:
        return Check(Status.AMBIGUOUS, str(exc))
    except InternalInconsistency as exc:
        return Check(Status.CONTRADICTED, f"internal inconsistency: {exc}")


def _holds(ok: bool, detail: str = "", sides=None) -> Check:
    return Check(Status.HOLDS if ok else Status.CONTRADICTED, detail, sides)


def _biconditional(left: bool, right: bool) -> Check:
    return _holds(left == right, f"left={left}, right={right}", (left, right))


def _completeness(sys: DynamicalSystem, deviations: dict) -> Check:
    ops = {pi.label: projection_operator(sys, pi) for pi in sys.table}
    n = sys.algebra.dim
    total = sum(ops.values())
    dev_sum = float(np.max(np.abs(total - np.eye(n)), initial=0.0))
    dev_orth = 0.0
    for a, P in ops.items():
        for b, Q in ops.items():
            target = P if a == b else np.zeros_like(P)
            dev_orth = max(dev_orth, float(np.max(np.abs(P @ Q - target), initial=0.0)))
    deviations["fourier_sum"] = dev_sum
    deviations["fourier_orthogonality"] = dev_orth
    ok = dev_sum <= COMPLETENESS_ATOL and dev_orth <= COMPLETENESS_ATOL
    return _holds(ok, f"sum {dev_sum:.1e}, orthogonality {dev_orth:.1e}")


def _spectral_calculus(sys: DynamicalSystem, arv: ArvesonSpectra, deviations: dict) -> Check:
    failures = []
    worst = 0.0
    for pi in sys.table:
        X1 = x1(sys, pi)
        X2 = arv.x2_spaces[pi.label]
        if X1.dim != X2.dim:
            failures.append(f"{pi.label}: dim X1 = {X1.dim} but dim X2 = {X2.dim}")
        for a in X2.basis:
            v = reconstruction_check(sys, pi, a)
            worst = max(worst, v.max_deviation)
            if not v.ok:
                failures.append(f"{pi.label}: " + "; ".join(v.failures))
        traces = [partial_trace(a, pi.dim) for a in X2.basis]
        if traces and not X1.contains_all(traces, sys.tol):
            failures.append(f"{pi.label}: partial trace leaves X1")
        v = ideal_pair_check(sys, pi, X2, arv.fixed_algebras[pi.label])
        failures.extend(f"{pi.label}: {f}" for f in v.failures)
    deviations["reconstruction"] = worst
    return _holds(not failures, "; ".join(failures))


def _trace_identity(sys: DynamicalSystem, arv: ArvesonSpectra) -> Check:
    bad = []
    for J in ideal_lattice(sys.fixed):
        rel = trace_ideal_identity(sys, J, arv.x2_spaces)
        if rel is not Relation.EQUAL:
            bad.append(f"ideal {sorted(J.selector)}: {rel.value}")
    return _holds(not bad, "; ".join(bad))


def verify(sys: DynamicalSystem, oracle_mode: str = "auto", rng=None) -> VerificationReport:
    """Compute every spectrum and check every structural identity on ``sys``.

    ``oracle_mode`` is 'full', 'sampled', or 'auto' (full when within budget).
    """
    checks: dict[str, Check] = {}
    deviations: dict[str, float] = {}
    report = VerificationReport(sys, checks, deviations=deviations)
    try:
        arv = arveson_spectra(sys, rng=rng)
        con = connes_spectra(sys, rng=rng)
        inv = alpha_invariant_ideal_properties(sys)
        fixed_class = classify(sys.fixed, sys.tol)
        classes = {label: classify(arv.fixed_algebras[label], sys.tol) for label in arv.sp.labels}
    except (NumericalAmbiguity, InternalInconsistency) as exc:
        report.error = f"{type(exc).__name__}: {exc}"
        status = Status.AMBIGUOUS if isinstance(exc, NumericalAmbiguity) else Status.CONTRADICTED
        for name in CHECK_NAMES:
            checks[name] = Check(status, report.error)
        return report
    report.arveson, report.connes, report.invariant_ideals = arv, con, inv
    report.classifications = {k: classes[k] for k in sys.table.labels if k in classes}

    sp, sp_F, strong = arv.sp.labels, arv.sp_F.labels, arv.strong_sp_F.labels
    gamma, strong_gamma = con.gamma_F.labels, con.strong_gamma_F.labels

    checks["simple_criterion"] = _biconditional(
        all(c.simple for c in classes.values()), inv.alpha_simple and sp == strong_gamma)
    checks["prime_criterion"] = _biconditional(
        all(c.prime for c in classes.values()), inv.alpha_prime and sp == gamma)
    checks["simple_transfer"] = _holds(
        not fixed_class.simple or all(classes[l].simple for l in strong),
        f"X^alpha simple={fixed_class.simple}")
    checks["prime_transfer"] = _holds(
        not fixed_class.prime or all(classes[l].prime for l in sp_F),
        f"X^alpha prime={fixed_class.prime}")
    checks["trace_ideal_identity"] = _guard(lambda: _trace_identity(sys, arv))
    checks["fourier_completeness"] = _guard(lambda: _completeness(sys, deviations))
    checks["spectral_calculus"] = _guard(lambda: _spectral_calculus(sys, arv, deviations))
    checks["connes_equality"] = _holds(gamma == strong_gamma,
                                       f"Gamma={sorted(gamma)}, strong={sorted(strong_gamma)}")
    checks["spectral_chain"] = _holds(strong_gamma <= gamma <= sp_F <= sp and strong <= sp_F)

    def oracle_checks():
        mode = oracle_mode
        if mode == "auto":
            try:
                orc = connes_oracle(sys, "full", rng=rng)
            except EnumerationBudgetExceeded:
                orc = connes_oracle(sys, "sampled", rng=rng)
        else:
            orc = connes_oracle(sys, mode, rng=rng)
        report.oracle = orc
        if orc.mode == "full":
            same = orc.gamma_F.labels == gamma and orc.strong_gamma_F.labels == strong_gamma
        else:
            # sampled corners include all ideal corners' conjugacy classes only partially,
            # so the oracle can only bound the reduction from above
            same = gamma <= orc.gamma_F.labels and strong_gamma <= orc.strong_gamma_F.labels
        checks["reduction_matches_oracle"] = _holds(
            same, f"{orc.mode} oracle over {len(orc.tuples)} corners: {sorted(orc.gamma_F.labels)}")
        if sys.group.is_abelian():
            checks["abelian_plain_intersection"] = _holds(
                orc.plain_gamma.labels == orc.gamma_F.labels,
                f"plain={sorted(orc.plain_gamma.labels)}, F={sorted(orc.gamma_F.labels)}")
        else:
            checks["abelian_plain_intersection"] = Check(Status.HOLDS, "not applicable: group is not abelian")
        return checks["reduction_matches_oracle"]

    outcome = _guard(oracle_checks)
    if outcome.status is not Status.HOLDS or "abelian_plain_intersection" not in checks:
        checks["reduction_matches_oracle"] = outcome
        checks.setdefault("abelian_plain_intersection", Check(outcome.status, outcome.detail))
    return report
