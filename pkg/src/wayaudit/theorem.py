"""Executable form of the no-go result for multiplicatively conserved quantities.

An observable measured exactly and nondestructively must commute with the
system factor of a conserved product quantity, provided the apparatus factor
has maximal rank, both factors have strictly positive spectra, and the
apparatus dimension is below twice the system dimension. This module turns
each hypothesis and the conclusion into a residual check, reproduces the
matrix-element identity and the pointer-Gram rank argument numerically, and
runs seeded randomized sweeps that look for counterexamples (and must find
none).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import commutant_unitary, conserved_eigenspaces
from .errors import PreconditionError
from .linalg import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    as_operator,
    commutator,
    frobenius_norm,
    numerical_rank,
    random_positive_operator,
    random_state_vector,
)
from .model import (
    ConservationReport,
    ConservedQuantity,
    MeasurementModel,
    PointerFamily,
    check_conserved,
    check_nondestructive,
    measured_observable,
    pointer_analysis,
)

__all__ = [
    "COUNTEREXAMPLE_COMMUTATOR_TOL",
    "AssumptionCheck",
    "CounterexampleSweepReport",
    "GramRankReport",
    "IdentityResidualTable",
    "SweepTrial",
    "TheoremVerdict",
    "additive_conservation_check",
    "counterexample_sweep",
    "matrix_element_identity",
    "pointer_gram_rank",
    "sample_conserving_instance",
    "theorem_verdict",
]

# A conforming scheme whose observable commutator exceeds this would falsify
# the no-go claim.
COUNTEREXAMPLE_COMMUTATOR_TOL = 1e-6


@dataclass(frozen=True)
class AssumptionCheck:
    """One named hypothesis with its figure of merit.

    ``residual`` semantics by name: conservation / nondestructive / exact are
    Frobenius or norm residuals (small is good); la_positive / lb_positive are
    the minimum eigenvalue (positive is good); lb_full_rank is the rank
    deficit; dimension_bound is the margin 2*n1 - n2 (positive is good).
    """

    name: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class TheoremVerdict:
    """Hypothesis checks plus the commutator conclusion.

    ``outcome`` is ``assumptions_violated`` when any hypothesis fails,
    ``consistent`` when all hold and the measured observable commutes with the
    system factor, and ``contradiction`` otherwise -- which would falsify the
    no-go claim and is expected never. ``strict_dimension_ok`` additionally
    reports the tighter margin n2 < 2*n1 - 1 suggested by the rank counting;
    the stated bound n2 < 2*n1 is the one that gates the verdict.
    """

    assumptions: tuple[AssumptionCheck, ...]
    commutator_norm: float
    outcome: str
    strict_dimension_ok: bool

    def assumption(self, name: str) -> AssumptionCheck:
        for check in self.assumptions:
            if check.name == name:
                return check
        raise KeyError(name)


def theorem_verdict(
    m: MeasurementModel,
    q: ConservedQuantity,
    tol: float = 1e-9,
    config: ToleranceConfig = DEFAULT_TOLERANCES,
) -> TheoremVerdict:
    if q.kind != "multiplicative":
        raise PreconditionError("kind", "theorem_verdict requires a multiplicative quantity")
    la, lb = q.system_op, q.apparatus_op
    if la.shape[0] != m.n1 or lb.shape[0] != m.n2:
        raise ValueError("conserved quantity dimensions do not match the model")

    conserved = check_conserved(m, q, tol)
    rank = numerical_rank(lb, config.rank_tol)
    la_min = float(np.linalg.eigvalsh(la)[0])
    lb_min = float(np.linalg.eigvalsh(lb)[0])
    analysis = pointer_analysis(m, degenerate_tol=1e-12)

    checks = (
        AssumptionCheck("conservation", conserved.residual, conserved.verdict),
        AssumptionCheck("lb_full_rank", float(m.n2 - rank), rank == m.n2),
        AssumptionCheck("la_positive", la_min, la_min > config.rank_tol),
        AssumptionCheck("lb_positive", lb_min, lb_min > config.rank_tol),
        AssumptionCheck("dimension_bound", float(2 * m.n1 - m.n2), m.n2 < 2 * m.n1),
        AssumptionCheck("nondestructive", analysis.leakage, analysis.leakage <= tol),
        AssumptionCheck("exact", analysis.deficit, analysis.deficit <= tol),
    )
    commutator_norm = frobenius_norm(commutator(measured_observable(m), la))
    if all(c.passed for c in checks):
        outcome = "consistent" if commutator_norm <= tol else "contradiction"
    else:
        outcome = "assumptions_violated"
    return TheoremVerdict(
        assumptions=checks,
        commutator_norm=commutator_norm,
        outcome=outcome,
        strict_dimension_ok=m.n2 < 2 * m.n1 - 1,
    )


@dataclass(frozen=True)
class IdentityResidualTable:
    """Residuals R(i,j) = <u(i)|la|u(j)> * (<v|lb|v> - <v(i)|lb|v(j)>)."""

    residuals: np.ndarray
    max_abs: float


def matrix_element_identity(
    m: MeasurementModel, q: ConservedQuantity, tol: float = 1e-9
) -> IdentityResidualTable:
    """Residual table of the matrix-element consequence of conservation.

    For a nondestructive conserving model the table vanishes identically, so
    ``max_abs`` stays below 1e-8 for well-scaled operators. Preconditions are
    enforced and reported by name.
    """
    if q.kind != "multiplicative":
        raise PreconditionError("kind", "matrix_element_identity requires a multiplicative quantity")
    nd = check_nondestructive(m, tol)
    if nd.error is not None or not nd.verdict:
        raise PreconditionError(
            "check_nondestructive", nd.error or f"leakage {nd.leakage:.3e} exceeds {tol:.3e}"
        )
    cons = check_conserved(m, q, tol)
    if not cons.verdict:
        raise PreconditionError("check_conserved", f"residual {cons.residual:.3e} exceeds {tol:.3e}")

    basis = m.system_basis
    la_elems = basis.conj() @ q.system_op @ basis.T
    ready_expect = complex(np.vdot(m.ready_state, q.apparatus_op @ m.ready_state))
    pointers = nd.pointers.pointers
    pointer_elems = pointers.conj() @ q.apparatus_op @ pointers.T
    residuals = la_elems * (ready_expect - pointer_elems)
    return IdentityResidualTable(residuals, float(np.abs(residuals).max()))


@dataclass(frozen=True)
class GramRankReport:
    gram_lb: np.ndarray
    rank: int
    constant_case: bool


def pointer_gram_rank(
    lb: np.ndarray,
    pointers: PointerFamily,
    tol: float = 1e-9,
    config: ToleranceConfig = DEFAULT_TOLERANCES,
) -> GramRankReport:
    """Rank analysis of B(i,j) = <v(i)|lb|v(j)>.

    ``constant_case`` flags an all-entries-equal table, in which case the rank
    can be at most one; that consistency is asserted.
    """
    lb = as_operator(lb)
    ptrs = np.asarray(pointers.pointers, dtype=complex)
    gram_lb = ptrs.conj() @ lb @ ptrs.T
    rank = numerical_rank(gram_lb, config.rank_tol)
    constant_case = bool(np.abs(gram_lb - gram_lb[0, 0]).max() <= tol)
    if constant_case:
        assert rank <= 1, f"constant table reported rank {rank}"
    return GramRankReport(gram_lb, rank, constant_case)


def additive_conservation_check(
    m: MeasurementModel, q: ConservedQuantity, tol: float = 1e-9
) -> ConservationReport:
    """Baseline residual check for an additive quantity; no verdict machinery."""
    if q.kind != "additive":
        raise PreconditionError("kind", "additive_conservation_check requires an additive quantity")
    return check_conserved(m, q, tol)


def sample_conserving_instance(
    n1: int, n2: int, rng: np.random.Generator
) -> tuple[MeasurementModel, ConservedQuantity]:
    """One random sweep instance: positive factors, a unitary from their
    commutant, a random ready state, and the computational measured basis."""
    la = random_positive_operator(n1, rng)
    lb = random_positive_operator(n2, rng)
    q = ConservedQuantity("multiplicative", la, lb)
    interaction = commutant_unitary(conserved_eigenspaces(q), rng)
    ready = random_state_vector(n2, rng)
    m = MeasurementModel(n1, n2, np.eye(n1, dtype=complex), ready, interaction)
    return m, q


@dataclass(frozen=True)
class SweepTrial:
    trial: int
    leakage: float
    deficit: float
    commutator_norm: float
    degenerate_pointer: bool
    conforming: bool
    counterexample: bool


@dataclass(frozen=True)
class CounterexampleSweepReport:
    n1: int
    n2: int
    count: int
    seed: int
    tol: float
    trials: tuple[SweepTrial, ...]
    conforming_count: int
    counterexamples: int
    max_conforming_commutator: float

    @property
    def no_counterexample(self) -> bool:
        return self.counterexamples == 0


def counterexample_sweep(
    n1: int, n2: int, count: int, seed: int, tol: float = 1e-9
) -> CounterexampleSweepReport:
    """Seeded randomized search for schemes that would falsify the no-go claim.

    Each trial draws positive-spectrum factors (Haar-conjugated uniform
    spectra in [0.5, 2.0]), a conserving unitary sampled from the commutant of
    their product, and a random ready state, then records the scheme quality
    and the observable commutator. A counterexample is a trial that is
    simultaneously nondestructive and exact within ``tol`` yet has commutator
    norm above ``COUNTEREXAMPLE_COMMUTATOR_TOL``. Trials derive independent
    streams from (seed, index), so the report is reproducible and
    order-independent.
    """
    if not n2 < 2 * n1:
        raise ValueError(f"dimension precondition violated: n2 = {n2} must be < 2*n1 = {2 * n1}")
    if count < 1:
        raise ValueError("count must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")

    trials = []
    conforming_count = 0
    counterexamples = 0
    max_conforming = 0.0
    for trial in range(count):
        m, q = sample_conserving_instance(n1, n2, np.random.default_rng((seed, trial)))
        analysis = pointer_analysis(m, degenerate_tol=1e-12)
        comm = frobenius_norm(commutator(measured_observable(m), q.system_op))
        conforming = analysis.leakage <= tol and analysis.deficit <= tol
        counterexample = conforming and comm > COUNTEREXAMPLE_COMMUTATOR_TOL
        if conforming:
            conforming_count += 1
            max_conforming = max(max_conforming, comm)
        if counterexample:
            counterexamples += 1
        trials.append(
            SweepTrial(
                trial=trial,
                leakage=analysis.leakage,
                deficit=analysis.deficit,
                commutator_norm=comm,
                degenerate_pointer=bool(analysis.degenerate),
                conforming=conforming,
                counterexample=counterexample,
            )
        )
    return CounterexampleSweepReport(
        n1=n1,
        n2=n2,
        count=count,
        seed=seed,
        tol=tol,
        trials=tuple(trials),
        conforming_count=conforming_count,
        counterexamples=counterexamples,
        max_conforming_commutator=max_conforming,
    )
