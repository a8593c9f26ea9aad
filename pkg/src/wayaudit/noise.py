"""Measurement-noise lower bounds and their numerical audit.

The noise operator is the Heisenberg-picture difference between the evolved
probe observable and the target observable; its squared expectation on the
joint initial state is the noise figure epsilon^2. The uncertainty-relation
chain epsilon^2 >= Var(N) >= |<[N, L]>|^2 / (4 Var(L)) holds unconditionally
for a conserved L and is enforced as such. The factored bounds that replace
Var(L) with the product of single-factor variances are treated as hypotheses:
they are computed, compared against epsilon^2, and their violation fractions
are reported rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import commutant_unitary, conserved_eigenspaces
from .errors import PreconditionError
from .linalg import (
    as_operator,
    as_state,
    commutator,
    dagger,
    frobenius_norm,
    haar_unitary,
    random_hermitian,
    random_positive_operator,
    random_state_vector,
    tensor_product,
    variance,
)
from .model import ConservedQuantity, MeasurementModel, check_conserved, conserved_operator

__all__ = [
    "AuditConfig",
    "BoundAuditRecord",
    "BoundAuditReport",
    "BoundAuditSummary",
    "NoiseReport",
    "PaperBoundReport",
    "RobertsonReport",
    "SimplifiedBoundReport",
    "VarianceAudit",
    "YanaseBoundReport",
    "bound_audit_sweep",
    "epsilon_sq",
    "noise_operator",
    "noise_report",
    "paper_bound",
    "robertson_bound",
    "simplified_bound",
    "variance_identity_audit",
    "yanase_bound",
]

# Denominators at or below this are treated as degenerate (bound undefined,
# or zero under the 0/0 -> 0 convention for the Robertson chain).
DEGENERACY_TOL = 1e-12
# Slack allowed when comparing a bound against epsilon^2.
VALIDITY_SLACK = 1e-9
# Commutation threshold for the Yanase condition on the probe.
YANASE_COMMUTATOR_TOL = 1e-10
# Threshold on |<v|lb|v>| for the zero-expectation simplification.
ZERO_EXPECTATION_TOL = 1e-10


def _hermitian_arg(a, dim: int, name: str) -> np.ndarray:
    a = as_operator(a)
    if a.shape[0] != dim:
        raise ValueError(f"{name} must have dimension {dim}")
    defect = frobenius_norm(a - dagger(a))
    if defect > 1e-10:
        raise ValueError(f"{name} is not Hermitian: residual {defect:.3e}")
    return a


def noise_operator(m: MeasurementModel, observable, probe) -> np.ndarray:
    """N = U^dag (1 (x) probe) U - observable (x) 1 on the joint space."""
    observable = _hermitian_arg(observable, m.n1, "observable")
    probe = _hermitian_arg(probe, m.n2, "probe")
    evolved = dagger(m.interaction) @ tensor_product(np.eye(m.n1), probe) @ m.interaction
    return evolved - tensor_product(observable, np.eye(m.n2))


def epsilon_sq(m: MeasurementModel, observable, probe, psi) -> float:
    """<N^2> on psi (x) ready_state; the squared state-dependent noise."""
    psi = as_state(psi)
    if psi.shape[0] != m.n1:
        raise ValueError(f"psi must have dimension {m.n1}")
    n = noise_operator(m, observable, probe)
    w = n @ np.kron(psi, m.ready_state)
    return float(np.vdot(w, w).real)


def _require_conserved(m: MeasurementModel, q: ConservedQuantity, tol: float) -> None:
    if q.kind != "multiplicative":
        raise PreconditionError("kind", "noise bounds require a multiplicative quantity")
    report = check_conserved(m, q, tol)
    if not report.verdict:
        raise PreconditionError(
            "check_conserved", f"residual {report.residual:.3e} exceeds {tol:.3e}"
        )


@dataclass(frozen=True)
class RobertsonReport:
    """Exact uncertainty-chain bound: |<[N, L]>|^2 / (4 Var(L)).

    ``degenerate`` marks Var(L) <= 1e-12, where the bound is set to zero: an
    eigenstate of the conserved quantity forces the numerator to zero as well.
    """

    bound: float
    numerator: float
    var_conserved: float
    degenerate: bool


def robertson_bound(
    m: MeasurementModel, observable, probe, q: ConservedQuantity, psi, tol: float = 1e-9
) -> RobertsonReport:
    _require_conserved(m, q, tol)
    psi = as_state(psi)
    joint_state = np.kron(psi, m.ready_state)
    n = noise_operator(m, observable, probe)
    joint_op = conserved_operator(q)
    comm_expect = complex(np.vdot(joint_state, (n @ (joint_op @ joint_state)) - (joint_op @ (n @ joint_state))))
    numerator = abs(comm_expect) ** 2 / 4.0
    var_conserved = variance(joint_op, joint_state)
    degenerate = var_conserved <= DEGENERACY_TOL
    bound = 0.0 if degenerate else numerator / var_conserved
    return RobertsonReport(bound, numerator, var_conserved, degenerate)


@dataclass(frozen=True)
class PaperBoundReport:
    """Factored-denominator bound with the evolved-probe commutator numerator.

    ``defined`` is False when 4 * Var(la on psi) * Var(lb on v) is degenerate;
    ``valid`` compares the bound against epsilon^2 and may legitimately be
    False -- that is exactly what the audit measures.
    """

    bound: float | None
    defined: bool
    valid: bool | None
    numerator: float
    denominator: float


def paper_bound(
    m: MeasurementModel, observable, probe, q: ConservedQuantity, psi, tol: float = 1e-9
) -> PaperBoundReport:
    _require_conserved(m, q, tol)
    observable = _hermitian_arg(observable, m.n1, "observable")
    probe = _hermitian_arg(probe, m.n2, "probe")
    psi = as_state(psi)
    la, lb = q.system_op, q.apparatus_op
    joint_state = np.kron(psi, m.ready_state)
    evolved_term = (
        dagger(m.interaction)
        @ tensor_product(la, commutator(probe, lb))
        @ m.interaction
    )
    term = tensor_product(commutator(observable, la), lb) - evolved_term
    numerator = abs(complex(np.vdot(joint_state, term @ joint_state))) ** 2
    denominator = 4.0 * variance(la, psi) * variance(lb, m.ready_state)
    if denominator <= DEGENERACY_TOL:
        return PaperBoundReport(None, False, None, numerator, denominator)
    bound = numerator / denominator
    eps = epsilon_sq(m, observable, probe, psi)
    return PaperBoundReport(bound, True, bound <= eps + VALIDITY_SLACK, numerator, denominator)


@dataclass(frozen=True)
class YanaseBoundReport:
    """Bound under the Yanase condition [probe, lb] = 0.

    ``applicable`` is False when the probe fails the condition; ``defined``
    is False on a degenerate denominator.
    """

    applicable: bool
    bound: float | None
    defined: bool | None
    valid: bool | None


def yanase_bound(
    m: MeasurementModel, observable, probe, q: ConservedQuantity, psi, tol: float = 1e-9
) -> YanaseBoundReport:
    _require_conserved(m, q, tol)
    observable = _hermitian_arg(observable, m.n1, "observable")
    probe = _hermitian_arg(probe, m.n2, "probe")
    psi = as_state(psi)
    la, lb = q.system_op, q.apparatus_op
    if frobenius_norm(commutator(probe, lb)) > YANASE_COMMUTATOR_TOL:
        return YanaseBoundReport(False, None, None, None)
    joint_state = np.kron(psi, m.ready_state)
    term = tensor_product(commutator(observable, la), lb)
    numerator = abs(complex(np.vdot(joint_state, term @ joint_state))) ** 2
    denominator = 4.0 * variance(la, psi) * variance(lb, m.ready_state)
    if denominator <= DEGENERACY_TOL:
        return YanaseBoundReport(True, None, False, None)
    bound = numerator / denominator
    eps = epsilon_sq(m, observable, probe, psi)
    return YanaseBoundReport(True, bound, True, bound <= eps + VALIDITY_SLACK)


@dataclass(frozen=True)
class SimplifiedBoundReport:
    """System-only bound for a ready state with zero apparatus-factor expectation."""

    applicable: bool
    bound: float | None
    defined: bool | None
    valid: bool | None


def simplified_bound(
    m: MeasurementModel, observable, q: ConservedQuantity, psi, probe=None, tol: float = 1e-9
) -> SimplifiedBoundReport:
    """|<psi|[observable, la]|psi>|^2 / (4 Var(la)) when <v|lb|v> = 0.

    The validity flag needs epsilon^2 and therefore a probe; without one the
    flag is None and only the bound is reported.
    """
    _require_conserved(m, q, tol)
    observable = _hermitian_arg(observable, m.n1, "observable")
    psi = as_state(psi)
    la, lb = q.system_op, q.apparatus_op
    ready_expect = complex(np.vdot(m.ready_state, lb @ m.ready_state))
    if abs(ready_expect) > ZERO_EXPECTATION_TOL:
        return SimplifiedBoundReport(False, None, None, None)
    numerator = abs(complex(np.vdot(psi, commutator(observable, la) @ psi))) ** 2
    denominator = 4.0 * variance(la, psi)
    if denominator <= DEGENERACY_TOL:
        return SimplifiedBoundReport(True, None, False, None)
    bound = numerator / denominator
    if probe is None:
        return SimplifiedBoundReport(True, bound, True, None)
    eps = epsilon_sq(m, observable, probe, psi)
    return SimplifiedBoundReport(True, bound, True, bound <= eps + VALIDITY_SLACK)


@dataclass(frozen=True)
class VarianceAudit:
    """Product-state variance of a product operator versus the factored claim.

    ``corrected_rhs`` adds the cross terms that make the identity exact:
    Var(A (x) B) = VarA VarB + VarA <B>^2 + <A>^2 VarB on product states.
    """

    lhs: float
    paper_rhs: float
    corrected_rhs: float
    paper_claim_holds: bool
    corrected_holds: bool


def variance_identity_audit(a, b, psi_a, psi_b, tol: float = 1e-10) -> VarianceAudit:
    a = as_operator(a)
    b = as_operator(b)
    psi_a = as_state(psi_a)
    psi_b = as_state(psi_b)
    a = _hermitian_arg(a, a.shape[0], "a")
    b = _hermitian_arg(b, b.shape[0], "b")
    lhs = variance(tensor_product(a, b), np.kron(psi_a, psi_b))
    var_a = variance(a, psi_a)
    var_b = variance(b, psi_b)
    mean_a = float(np.vdot(psi_a, a @ psi_a).real)
    mean_b = float(np.vdot(psi_b, b @ psi_b).real)
    paper_rhs = var_a * var_b
    corrected_rhs = var_a * var_b + var_a * mean_b**2 + mean_a**2 * var_b
    return VarianceAudit(
        lhs=lhs,
        paper_rhs=paper_rhs,
        corrected_rhs=corrected_rhs,
        paper_claim_holds=abs(lhs - paper_rhs) <= tol,
        corrected_holds=abs(lhs - corrected_rhs) <= tol,
    )


@dataclass(frozen=True)
class NoiseReport:
    """Everything the `bound` command reports for one instance."""

    epsilon_sq: float
    robertson: RobertsonReport
    paper: PaperBoundReport
    yanase: YanaseBoundReport
    simplified: SimplifiedBoundReport
    var_conserved_exact: float
    var_product_claim: float


def noise_report(
    m: MeasurementModel, q: ConservedQuantity, observable, probe, psi, tol: float = 1e-9
) -> NoiseReport:
    psi = as_state(psi)
    eps = epsilon_sq(m, observable, probe, psi)
    robertson = robertson_bound(m, observable, probe, q, psi, tol)
    paper = paper_bound(m, observable, probe, q, psi, tol)
    yanase = yanase_bound(m, observable, probe, q, psi, tol)
    simplified = simplified_bound(m, observable, q, psi, probe=probe, tol=tol)
    joint_state = np.kron(psi, m.ready_state)
    var_exact = variance(conserved_operator(q), joint_state)
    var_claim = variance(q.system_op, psi) * variance(q.apparatus_op, m.ready_state)
    return NoiseReport(
        epsilon_sq=eps,
        robertson=robertson,
        paper=paper,
        yanase=yanase,
        simplified=simplified,
        var_conserved_exact=var_exact,
        var_product_claim=var_claim,
    )


@dataclass(frozen=True)
class AuditConfig:
    n1: int
    n2: int
    count: int
    seed: int
    tol: float = 1e-9

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class BoundAuditRecord:
    trial: int
    n1: int
    n2: int
    epsilon_sq: float
    robertson_bound: float
    robertson_degenerate: bool
    paper_bound: float | None
    paper_defined: bool
    yanase_applicable: bool
    yanase_bound: float | None
    yanase_defined: bool | None
    simplified_applicable: bool
    simplified_bound: float | None
    simplified_defined: bool | None
    robertson_valid: bool
    paper_valid: bool | None
    yanase_valid: bool | None
    simplified_valid: bool | None


@dataclass(frozen=True)
class BoundAuditSummary:
    """Violation and degeneracy tallies; the Robertson count must be zero."""

    robertson_violations: int
    robertson_degenerate: int
    robertson_violation_fraction: float
    paper_defined: int
    paper_undefined: int
    paper_violations: int
    paper_violation_fraction: float
    yanase_applicable: int
    yanase_degenerate: int
    yanase_violations: int
    yanase_violation_fraction: float
    simplified_applicable: int
    simplified_degenerate: int
    simplified_violations: int
    simplified_violation_fraction: float


@dataclass(frozen=True)
class BoundAuditReport:
    config: AuditConfig
    records: tuple[BoundAuditRecord, ...]
    summary: BoundAuditSummary


def _zero_expectation_state(lb: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Unit vector v with <v|lb|v> = 0, mixing the extreme eigenvectors."""
    values, vectors = np.linalg.eigh(lb)
    low, high = float(values[0]), float(values[-1])
    span = high - low
    weight_low = high / span
    weight_high = -low / span
    phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    v = np.sqrt(weight_low) * vectors[:, 0] + phase * np.sqrt(weight_high) * vectors[:, -1]
    return v / np.linalg.norm(v)


def _traceless_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian with zero trace and a guaranteed sign-indefinite spectrum."""
    d = rng.uniform(0.5, 2.0, dim)
    d = d - d.mean()
    if d.max() < 1e-6 or d.min() > -1e-6:  # ruled out a.s.; keep the spectrum indefinite
        d[0] -= 1.0
        d[-1] += 1.0
        d = d - d.mean()
    w = haar_unitary(dim, rng)
    h = (w * d) @ dagger(w)
    return (h + dagger(h)) / 2.0


def bound_audit_sweep(config: AuditConfig) -> BoundAuditReport:
    """Seeded audit of every bound on random conserving instances.

    Trials cycle deterministically through four regimes so the conditional
    bounds get exercised: odd trials use a probe commuting with the apparatus
    factor (Yanase condition), and trials with index 2 or 3 mod 4 use a
    traceless apparatus factor together with a ready state of zero
    expectation (the simplified regime; positivity is not required here).
    Each trial derives its stream from (seed, index).
    """
    n1, n2 = config.n1, config.n2
    records = []
    robertson_violations = robertson_degenerate = 0
    paper_defined_count = paper_violations = 0
    yanase_applicable_count = yanase_degenerate_count = yanase_violations = 0
    simplified_applicable_count = simplified_degenerate_count = simplified_violations = 0

    eye_basis = np.eye(n1, dtype=complex)
    for trial in range(config.count):
        rng = np.random.default_rng((config.seed, trial))
        yanase_mode = trial % 2 == 1
        zero_mode = trial % 4 >= 2

        la = random_positive_operator(n1, rng)
        lb = _traceless_hermitian(n2, rng) if zero_mode else random_positive_operator(n2, rng)
        q = ConservedQuantity("multiplicative", la, lb)
        interaction = commutant_unitary(conserved_eigenspaces(q), rng)
        ready = _zero_expectation_state(lb, rng) if zero_mode else random_state_vector(n2, rng)
        m = MeasurementModel(n1, n2, eye_basis, ready, interaction)

        observable = random_hermitian(n1, rng)
        if yanase_mode:
            _, lb_vecs = np.linalg.eigh(lb)
            probe = (lb_vecs * rng.uniform(-1.0, 1.0, n2)) @ dagger(lb_vecs)
            probe = (probe + dagger(probe)) / 2.0
        else:
            probe = random_hermitian(n2, rng)
        psi = random_state_vector(n1, rng)

        report = noise_report(m, q, observable, probe, psi, config.tol)
        eps = report.epsilon_sq
        robertson_valid = report.robertson.bound <= eps + VALIDITY_SLACK

        if not robertson_valid:
            robertson_violations += 1
        if report.robertson.degenerate:
            robertson_degenerate += 1
        if report.paper.defined:
            paper_defined_count += 1
            if report.paper.valid is False:
                paper_violations += 1
        if report.yanase.applicable:
            yanase_applicable_count += 1
            if report.yanase.defined is False:
                yanase_degenerate_count += 1
            elif report.yanase.valid is False:
                yanase_violations += 1
        if report.simplified.applicable:
            simplified_applicable_count += 1
            if report.simplified.defined is False:
                simplified_degenerate_count += 1
            elif report.simplified.valid is False:
                simplified_violations += 1

        records.append(
            BoundAuditRecord(
                trial=trial,
                n1=n1,
                n2=n2,
                epsilon_sq=eps,
                robertson_bound=report.robertson.bound,
                robertson_degenerate=report.robertson.degenerate,
                paper_bound=report.paper.bound,
                paper_defined=report.paper.defined,
                yanase_applicable=report.yanase.applicable,
                yanase_bound=report.yanase.bound,
                yanase_defined=report.yanase.defined,
                simplified_applicable=report.simplified.applicable,
                simplified_bound=report.simplified.bound,
                simplified_defined=report.simplified.defined,
                robertson_valid=robertson_valid,
                paper_valid=report.paper.valid,
                yanase_valid=report.yanase.valid,
                simplified_valid=report.simplified.valid,
            )
        )

    def fraction(violations: int, denominator: int) -> float:
        return violations / denominator if denominator else 0.0

    yanase_defined = yanase_applicable_count - yanase_degenerate_count
    simplified_defined = simplified_applicable_count - simplified_degenerate_count
    summary = BoundAuditSummary(
        robertson_violations=robertson_violations,
        robertson_degenerate=robertson_degenerate,
        robertson_violation_fraction=fraction(robertson_violations, config.count),
        paper_defined=paper_defined_count,
        paper_undefined=config.count - paper_defined_count,
        paper_violations=paper_violations,
        paper_violation_fraction=fraction(paper_violations, paper_defined_count),
        yanase_applicable=yanase_applicable_count,
        yanase_degenerate=yanase_degenerate_count,
        yanase_violations=yanase_violations,
        yanase_violation_fraction=fraction(yanase_violations, yanase_defined),
        simplified_applicable=simplified_applicable_count,
        simplified_degenerate=simplified_degenerate_count,
        simplified_violations=simplified_violations,
        simplified_violation_fraction=fraction(simplified_violations, simplified_defined),
    )
    return BoundAuditReport(config=config, records=tuple(records), summary=summary)
