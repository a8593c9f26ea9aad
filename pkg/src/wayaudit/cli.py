"""Command-line interface: parse model files, dispatch checks, emit reports.

Exit codes: 0 on success, 1 when a falsifiable scientific assertion fails (a
theorem contradiction or a Robertson-bound violation), 2 on usage or input
errors. Reports serialize canonically (sorted keys, floats at 17 significant
digits), so identical runs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .commutant import SearchConfig, feasibility_search, minimize_epsilon
from .errors import PreconditionError
from .linalg import ToleranceConfig, dagger, frobenius_norm
from .model import (
    ConservedQuantity,
    MeasurementModel,
    check_conserved,
    check_exact,
    check_nondestructive,
)
from .noise import AuditConfig, bound_audit_sweep, noise_report, variance_identity_audit
from .theorem import counterexample_sweep, pointer_gram_rank, theorem_verdict

__all__ = ["LoadedModel", "ModelFileError", "emit_report", "load_model", "main"]

BOUND_AUDIT_COLUMNS = (
    "trial",
    "n1",
    "n2",
    "epsilon_sq",
    "robertson_bound",
    "paper_bound",
    "paper_defined",
    "yanase_applicable",
    "yanase_bound",
    "simplified_applicable",
    "simplified_bound",
    "robertson_valid",
    "paper_valid",
    "yanase_valid",
    "simplified_valid",
)

COUNTEREXAMPLE_COLUMNS = (
    "trial",
    "leakage",
    "deficit",
    "commutator_norm",
    "degenerate_pointer",
    "conforming",
    "counterexample",
)


class ModelFileError(ValueError):
    """Invalid model file; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


# ---------------------------------------------------------------------------
# canonical serialization


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value in report")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".17g")


def _canonical(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return f"[{_format_float(value.real)},{_format_float(value.imag)}]"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return _canonical(value.tolist())
    if isinstance(value, dict):
        parts = [f"{json.dumps(str(k))}:{_canonical(v)}" for k, v in sorted(value.items())]
        return "{" + ",".join(parts) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def canonical_json(report) -> str:
    return _canonical(report) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    return str(value)


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def emit_report(report, format: str = "json", path: str | None = None) -> None:
    """Serialize a report canonically and write it to ``path`` (stdout if None).

    ``format`` is "json" for a report dict, or "csv" for a dict holding
    ``columns`` and ``rows``.
    """
    if format == "json":
        text = canonical_json(report)
    elif format == "csv":
        text = _csv_text(report["columns"], report["rows"])
    else:
        raise ModelFileError("format", f"unknown format {format!r}")
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ModelFileError("out", f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# model files


def _complex_entry(obj, field: str) -> complex:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise ModelFileError(field, f"complex entries must be [re, im] pairs, got {obj!r}")
    re, im = obj
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ModelFileError(field, f"complex entries must be numeric, got {obj!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ModelFileError(field, "complex entries must be finite")
    return complex(re, im)


def _vector(obj, dim: int, field: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ModelFileError(field, f"expected a vector of {dim} complex entries")
    return np.array([_complex_entry(e, field) for e in obj], dtype=complex)


def _matrix(obj, rows: int, cols: int, field: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise ModelFileError(field, f"expected {rows} rows")
    return np.stack([_vector(r, cols, field) for r in obj])


def encode_vector(v: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex)]


def encode_matrix(a: np.ndarray) -> list:
    return [encode_vector(row) for row in np.asarray(a, dtype=complex)]


class LoadedModel:
    def __init__(self, model, quantity, observable, probe):
        self.model = model
        self.quantity = quantity
        self.observable = observable
        self.probe = probe

    def echo(self) -> dict:
        doc = {
            "n1": self.model.n1,
            "n2": self.model.n2,
            "system_basis": encode_matrix(self.model.system_basis),
            "ready_state": encode_vector(self.model.ready_state),
            "unitary": encode_matrix(self.model.interaction),
            "conserved": {
                "kind": self.quantity.kind,
                "LA": encode_matrix(self.quantity.system_op),
                "LB": encode_matrix(self.quantity.apparatus_op),
            },
        }
        if self.observable is not None:
            doc["observable"] = encode_matrix(self.observable)
        if self.probe is not None:
            doc["probe"] = encode_matrix(self.probe)
        return doc


def _load_document(doc: dict) -> LoadedModel:
    if not isinstance(doc, dict):
        raise ModelFileError("file", "top level must be an object")
    for key in ("n1", "n2"):
        if not isinstance(doc.get(key), int) or doc[key] < 1:
            raise ModelFileError(key, "must be a positive integer")
    n1, n2 = doc["n1"], doc["n2"]

    if "system_basis" in doc:
        basis = _matrix(doc["system_basis"], n1, n1, "system_basis")
    else:
        basis = np.eye(n1, dtype=complex)
    defect = frobenius_norm(basis @ dagger(basis) - np.eye(n1))
    if defect > 1e-8:
        raise ModelFileError("system_basis", f"not orthonormal (defect {defect:.3e})")

    if "ready_state" not in doc:
        raise ModelFileError("ready_state", "missing")
    ready = _vector(doc["ready_state"], n2, "ready_state")
    norm = float(np.linalg.norm(ready))
    if abs(norm - 1.0) > 1e-10:
        raise ModelFileError("ready_state", f"norm {norm!r} is not 1")

    if "unitary" not in doc:
        raise ModelFileError("unitary", "missing")
    interaction = _matrix(doc["unitary"], n1 * n2, n1 * n2, "unitary")
    residual = frobenius_norm(dagger(interaction) @ interaction - np.eye(n1 * n2))
    if residual > 1e-10:
        raise ModelFileError("unitary", f"not unitary (residual {residual:.3e})")

    conserved = doc.get("conserved")
    if not isinstance(conserved, dict):
        raise ModelFileError("conserved", "missing or not an object")
    kind = conserved.get("kind")
    if kind not in ("additive", "multiplicative"):
        raise ModelFileError("conserved.kind", f"must be 'additive' or 'multiplicative', got {kind!r}")
    la = _matrix(conserved.get("LA"), n1, n1, "conserved.LA")
    lb = _matrix(conserved.get("LB"), n2, n2, "conserved.LB")
    for name, op in (("conserved.LA", la), ("conserved.LB", lb)):
        h = frobenius_norm(op - dagger(op))
        if h > 1e-10:
            raise ModelFileError(name, f"not Hermitian (residual {h:.3e})")

    observable = probe = None
    if "observable" in doc:
        observable = _matrix(doc["observable"], n1, n1, "observable")
        h = frobenius_norm(observable - dagger(observable))
        if h > 1e-10:
            raise ModelFileError("observable", f"not Hermitian (residual {h:.3e})")
    if "probe" in doc:
        probe = _matrix(doc["probe"], n2, n2, "probe")
        h = frobenius_norm(probe - dagger(probe))
        if h > 1e-10:
            raise ModelFileError("probe", f"not Hermitian (residual {h:.3e})")

    model = MeasurementModel(n1, n2, basis, ready, interaction)
    quantity = ConservedQuantity(kind, la, lb)
    return LoadedModel(model, quantity, observable, probe)


def load_model(path: str) -> LoadedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelFileError("model", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFileError("model", f"parse error in {path}: {exc}") from exc
    return _load_document(doc)


def _parse_state(spec: str, dim: int) -> np.ndarray:
    """Named states ('plus', basis index) or an inline [[re,im],...] literal."""
    if spec == "plus":
        return np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    if spec.isdigit():
        index = int(spec)
        if index >= dim:
            raise ModelFileError("state", f"basis index {index} out of range for dimension {dim}")
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return v
    if spec.startswith("["):
        try:
            literal = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ModelFileError("state", f"parse error: {exc}") from exc
        v = _vector(literal, dim, "state")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-10:
            raise ModelFileError("state", f"norm {norm!r} is not 1")
        return v
    raise ModelFileError("state", f"unknown state {spec!r}")


# ---------------------------------------------------------------------------
# report assembly


def _tolerances_dict(tol: float) -> dict:
    cfg = ToleranceConfig()
    return {
        "tol": tol,
        "hermiticity_tol": cfg.hermiticity_tol,
        "unitarity_tol": cfg.unitarity_tol,
        "rank_tol": cfg.rank_tol,
        "conservation_tol": cfg.conservation_tol,
        "grouping_tol": cfg.grouping_tol,
    }


def _base_report(args, command: str, seed: int | None, tol: float) -> dict:
    echo = [command]
    for name in ("model", "kind", "state", "n1", "n2", "count", "seed", "out", "format"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            echo.extend([f"--{name}", str(value)])
    return {
        "command": echo,
        "version": __version__,
        "seed": seed,
        "tolerances": _tolerances_dict(tol),
    }


def _search_result_dict(result) -> dict:
    return {
        "best_objective": result.best_objective,
        "best_unitary": encode_matrix(result.best_unitary),
        "objective_trace": [[it, val] for it, val in result.objective_trace],
        "restarts_used": result.restarts_used,
        "converged": result.converged,
        "restart_objectives": list(result.restart_objectives),
    }


# ---------------------------------------------------------------------------
# commands


def _cmd_check(args) -> int:
    loaded = load_model(args.model)
    report = _base_report(args, "check", None, args.tol)
    report["model"] = loaded.echo()
    conserved = check_conserved(loaded.model, loaded.quantity, args.tol)
    nd = check_nondestructive(loaded.model, args.tol)
    results = {
        "conserved": {"kind": conserved.kind, "residual": conserved.residual, "verdict": conserved.verdict},
        "nondestructive": {
            "leakage": nd.leakage,
            "verdict": nd.verdict,
            "degenerate": list(nd.degenerate),
            "error": nd.error,
            "pointers": encode_matrix(nd.pointers.pointers),
        },
    }
    if nd.error is None and nd.verdict:
        exact = check_exact(loaded.model, args.tol, nondestructive=nd)
        results["exact"] = {
            "deficit": exact.deficit,
            "verdict": exact.verdict,
            "gram": encode_matrix(exact.gram),
        }
    else:
        results["exact"] = {"error": nd.error or "precondition_failed: check_nondestructive"}
    report["results"] = results
    _emit(args, report)
    return 0


def _cmd_verdict(args) -> int:
    loaded = load_model(args.model)
    if loaded.quantity.kind != "multiplicative":
        raise ModelFileError("conserved.kind", "verdict requires a multiplicative quantity")
    verdict = theorem_verdict(loaded.model, loaded.quantity, args.tol)
    report = _base_report(args, "verdict", None, args.tol)
    report["model"] = loaded.echo()
    report["results"] = {
        "assumptions": [
            {"name": c.name, "residual": c.residual, "passed": c.passed}
            for c in verdict.assumptions
        ],
        "commutator_norm": verdict.commutator_norm,
        "outcome": verdict.outcome,
        "strict_dimension_ok": verdict.strict_dimension_ok,
    }
    _emit(args, report)
    return 1 if verdict.outcome == "contradiction" else 0


def _cmd_bound(args) -> int:
    loaded = load_model(args.model)
    if loaded.observable is None:
        raise ModelFileError("observable", "bound requires an observable in the model file")
    if loaded.probe is None:
        raise ModelFileError("probe", "bound requires a probe in the model file")
    if loaded.quantity.kind != "multiplicative":
        raise ModelFileError("conserved.kind", "bound requires a multiplicative quantity")
    psi = _parse_state(args.state, loaded.model.n1)
    nr = noise_report(loaded.model, loaded.quantity, loaded.observable, loaded.probe, psi, args.tol)
    robertson_valid = nr.robertson.bound <= nr.epsilon_sq + 1e-9
    report = _base_report(args, "bound", None, args.tol)
    report["model"] = loaded.echo()
    report["results"] = {
        "epsilon_sq": nr.epsilon_sq,
        "robertson_bound": nr.robertson.bound,
        "robertson_degenerate": nr.robertson.degenerate,
        "paper_bound": nr.paper.bound,
        "paper_defined": nr.paper.defined,
        "yanase_applicable": nr.yanase.applicable,
        "yanase_bound": nr.yanase.bound,
        "simplified_applicable": nr.simplified.applicable,
        "simplified_bound": nr.simplified.bound,
        "var_conserved_exact": nr.var_conserved_exact,
        "var_product_claim": nr.var_product_claim,
        "flags": {
            "robertson_valid": robertson_valid,
            "paper_valid": nr.paper.valid,
            "yanase_valid": nr.yanase.valid,
            "simplified_valid": nr.simplified.valid,
        },
    }
    _emit(args, report)
    return 0 if robertson_valid else 1


def _cmd_rank(args) -> int:
    loaded = load_model(args.model)
    nd = check_nondestructive(loaded.model, args.tol)
    if nd.error is not None:
        raise ModelFileError("model", nd.error)
    gram_rank = pointer_gram_rank(loaded.quantity.apparatus_op, nd.pointers, args.tol)
    report = _base_report(args, "rank", None, args.tol)
    report["model"] = loaded.echo()
    report["results"] = {
        "gram_lb": encode_matrix(gram_rank.gram_lb),
        "rank": gram_rank.rank,
        "constant_case": gram_rank.constant_case,
    }
    _emit(args, report)
    return 0


def _cmd_audit_variance(args) -> int:
    loaded = load_model(args.model)
    psi = _parse_state(args.state, loaded.model.n1)
    audit = variance_identity_audit(
        loaded.quantity.system_op, loaded.quantity.apparatus_op, psi, loaded.model.ready_state
    )
    report = _base_report(args, "audit-variance", None, args.tol)
    report["model"] = loaded.echo()
    report["results"] = {
        "lhs": audit.lhs,
        "paper_rhs": audit.paper_rhs,
        "corrected_rhs": audit.corrected_rhs,
        "paper_claim_holds": audit.paper_claim_holds,
        "corrected_holds": audit.corrected_holds,
    }
    _emit(args, report)
    return 0


def _require_seed(args) -> int:
    if args.seed is None:
        raise ModelFileError("seed", "--seed is required for randomized commands")
    if args.seed < 0:
        raise ModelFileError("seed", "--seed must be nonnegative")
    return args.seed


def _cmd_sweep(args) -> int:
    seed = _require_seed(args)
    if args.n1 is None or args.n2 is None or args.count is None:
        raise ModelFileError("usage", "sweep requires --n1, --n2 and --count")
    if args.kind == "counterexample":
        sweep = counterexample_sweep(args.n1, args.n2, args.count, seed, args.tol)
        rows = [
            {
                "trial": t.trial,
                "leakage": t.leakage,
                "deficit": t.deficit,
                "commutator_norm": t.commutator_norm,
                "degenerate_pointer": t.degenerate_pointer,
                "conforming": t.conforming,
                "counterexample": t.counterexample,
            }
            for t in sweep.trials
        ]
        csv_report = {"columns": COUNTEREXAMPLE_COLUMNS, "rows": rows}
        report = _base_report(args, "sweep", seed, args.tol)
        report["results"] = {
            "kind": "counterexample",
            "n1": sweep.n1,
            "n2": sweep.n2,
            "count": sweep.count,
            "conforming_count": sweep.conforming_count,
            "counterexamples": sweep.counterexamples,
            "max_conforming_commutator": sweep.max_conforming_commutator,
            "no_counterexample": sweep.no_counterexample,
        }
        failed = sweep.counterexamples > 0
    else:
        audit = bound_audit_sweep(AuditConfig(args.n1, args.n2, args.count, seed, args.tol))
        rows = [
            {
                "trial": r.trial,
                "n1": r.n1,
                "n2": r.n2,
                "epsilon_sq": r.epsilon_sq,
                "robertson_bound": r.robertson_bound,
                "paper_bound": r.paper_bound,
                "paper_defined": r.paper_defined,
                "yanase_applicable": r.yanase_applicable,
                "yanase_bound": r.yanase_bound,
                "simplified_applicable": r.simplified_applicable,
                "simplified_bound": r.simplified_bound,
                "robertson_valid": r.robertson_valid,
                "paper_valid": r.paper_valid,
                "yanase_valid": r.yanase_valid,
                "simplified_valid": r.simplified_valid,
            }
            for r in audit.records
        ]
        s = audit.summary
        # Summary row reuses the schema: *_bound columns carry violation
        # fractions, *_defined/_applicable carry counts, *_valid carry
        # violation counts.
        rows.append(
            {
                "trial": "summary",
                "n1": args.n1,
                "n2": args.n2,
                "epsilon_sq": None,
                "robertson_bound": s.robertson_violation_fraction,
                "paper_bound": s.paper_violation_fraction,
                "paper_defined": s.paper_defined,
                "yanase_applicable": s.yanase_applicable,
                "yanase_bound": s.yanase_violation_fraction,
                "simplified_applicable": s.simplified_applicable,
                "simplified_bound": s.simplified_violation_fraction,
                "robertson_valid": s.robertson_violations,
                "paper_valid": s.paper_violations,
                "yanase_valid": s.yanase_violations,
                "simplified_valid": s.simplified_violations,
            }
        )
        csv_report = {"columns": BOUND_AUDIT_COLUMNS, "rows": rows}
        report = _base_report(args, "sweep", seed, args.tol)
        report["results"] = {
            "kind": "bound-audit",
            "n1": args.n1,
            "n2": args.n2,
            "count": args.count,
            "robertson_violations": s.robertson_violations,
            "robertson_degenerate": s.robertson_degenerate,
            "robertson_violation_fraction": s.robertson_violation_fraction,
            "paper_defined": s.paper_defined,
            "paper_undefined": s.paper_undefined,
            "paper_violations": s.paper_violations,
            "paper_violation_fraction": s.paper_violation_fraction,
            "yanase_applicable": s.yanase_applicable,
            "yanase_degenerate": s.yanase_degenerate,
            "yanase_violations": s.yanase_violations,
            "yanase_violation_fraction": s.yanase_violation_fraction,
            "simplified_applicable": s.simplified_applicable,
            "simplified_degenerate": s.simplified_degenerate,
            "simplified_violations": s.simplified_violations,
            "simplified_violation_fraction": s.simplified_violation_fraction,
        }
        failed = s.robertson_violations > 0

    if args.format == "csv":
        if args.out is None:
            raise ModelFileError("out", "--out is required for csv output")
        emit_report(csv_report, "csv", args.out)
        sys.stdout.write(canonical_json(report))
    else:
        emit_report(report, "json", args.out)
        if args.out is not None:
            sys.stdout.write(canonical_json(report))
    return 1 if failed else 0


def _cmd_optimize(args) -> int:
    seed = _require_seed(args)
    loaded = load_model(args.model)
    if loaded.observable is None:
        raise ModelFileError("observable", "optimize requires an observable in the model file")
    restarts = args.count if args.count is not None else 8
    config = SearchConfig(seed=seed, restarts=restarts)
    if args.kind == "feasibility":
        result = feasibility_search(loaded.quantity, loaded.observable, loaded.model.n2, config)
    else:
        if loaded.probe is None:
            raise ModelFileError("probe", "optimize --kind epsilon requires a probe in the model file")
        result = minimize_epsilon(
            loaded.quantity,
            loaded.observable,
            loaded.probe,
            loaded.model.ready_state,
            config=config,
        )
    report = _base_report(args, "optimize", seed, args.tol)
    report["model"] = loaded.echo()
    report["results"] = {"kind": args.kind, **_search_result_dict(result)}
    _emit(args, report)
    return 0


def _emit(args, report: dict) -> None:
    if getattr(args, "format", "json") == "csv":
        raise ModelFileError("format", "csv output is only available for sweep")
    sys.stdout.write(canonical_json(report))
    if getattr(args, "out", None) is not None:
        emit_report(report, "json", args.out)


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wayaudit",
        description="Verify measurement models against a multiplicative conservation law "
        "and audit the associated noise bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, state=False):
        if model:
            p.add_argument("--model", required=True, help="model file (JSON)")
        if state:
            p.add_argument("--state", required=True, help="system state: index, 'plus', or [[re,im],...]")
        p.add_argument("--tol", type=float, default=1e-9, help="verdict tolerance (default 1e-9)")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("check", help="conservation / nondestructive / exactness checks")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("verdict", help="hypothesis checks plus the commutator conclusion")
    common(p)
    p.set_defaults(func=_cmd_verdict)

    p = sub.add_parser("bound", help="noise figure and every lower bound for one state")
    common(p, state=True)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("rank", help="pointer Gram-matrix rank analysis")
    common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("audit-variance", help="product-state variance claim audit")
    common(p, state=True)
    p.set_defaults(func=_cmd_audit_variance)

    p = sub.add_parser("sweep", help="seeded randomized sweeps (CSV records)")
    p.add_argument("--kind", choices=("counterexample", "bound-audit"), required=True)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize", help="search the commutant for low-noise or exact schemes")
    p.add_argument("--model", required=True)
    p.add_argument("--kind", choices=("epsilon", "feasibility"), default="epsilon")
    p.add_argument("--count", type=int, default=None, help="number of restarts (default 8)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.set_defaults(func=_cmd_optimize)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ModelFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
