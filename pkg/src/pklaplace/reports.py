"""Report assembly and serialization (JSON reports, CSV summaries).

Reports are deterministic: floats serialize with shortest round-trip
precision (replaying a report reproduces the exact binary values), the
``timing`` block carries work counters rather than wall-clock seconds, and
keys are emitted sorted.  Two runs with equal seeds therefore produce
byte-identical report files.
"""

from __future__ import annotations

import json

import numpy as np

from . import __version__
from .conditions import ConditionReport
from .grid import GridFunction
from .saddle import MountainPassReport
from .solvers import MinimizerReport, SolutionCertificate, TwoSolutions

__all__ = [
    "SCHEMA_VERSION",
    "condition_payload",
    "minimizer_payload",
    "mountain_pass_payload",
    "certificate_payload",
    "solve_payload",
    "check_payload",
    "refusal_payload",
    "dumps",
    "sweep_csv",
    "solution_csv",
]

SCHEMA_VERSION = 1

_CSV_HEADER = "axis1,axis2,c2_lhs,c2_rhs,c2_pass,n_certified,J_min,J_mp"


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float)]


def _witness_payload(witness):
    if witness is None:
        return None
    if isinstance(witness, GridFunction):
        return {"grid_function": _floats(witness.values)}
    k, y = witness
    return {"k": int(k), "y": float(y)}


def condition_payload(report: ConditionReport) -> dict:
    return {
        "id": report.condition_id,
        "lhs": float(report.lhs),
        "rhs": float(report.rhs),
        "holds": bool(report.holds),
        "witness": _witness_payload(report.witness),
        "sample_count": int(report.sample_count),
        "notes": list(report.notes),
    }


def minimizer_payload(report: MinimizerReport) -> dict:
    return {
        "minimizer": _floats(report.minimizer.values),
        "energy": float(report.energy),
        "kkt_sigma": float(report.kkt_sigma),
        "kkt_residual_norm": float(report.kkt_residual_norm),
        "interior": bool(report.interior),
        "iterations": int(report.iterations),
        "notes": list(report.notes),
    }


def mountain_pass_payload(report: MountainPassReport) -> dict:
    return {
        "critical_point": _floats(report.critical_point.values),
        "critical_value": float(report.critical_value),
        "path_energy_history": _floats(report.path_energy_history),
        "endpoint_energies": _floats(report.endpoint_energies),
        "grad_norm_at_result": float(report.grad_norm_at_result),
        "iterations": int(report.iterations),
        "barrier_verified": bool(report.barrier_verified),
    }


def certificate_payload(cert: SolutionCertificate) -> dict:
    return {
        "solution": _floats(cert.solution.values),
        "residual_sup_norm": float(cert.residual_sup_norm),
        "strictly_positive": bool(cert.strictly_positive),
        "min_value": float(cert.min_value),
        "energy": float(cert.energy),
        "certified": bool(cert.certified),
        "anomaly": bool(cert.anomaly),
    }


def _version_block() -> dict:
    return {"package": __version__, "schema": SCHEMA_VERSION}


def check_payload(config_echo: dict, c1: ConditionReport | None, c2: ConditionReport,
                  sphere_lower_bound: float) -> dict:
    return {
        "kind": "check",
        "config": config_echo,
        "conditions": {
            "C1": condition_payload(c1) if c1 is not None else None,
            "C2": condition_payload(c2),
            "sphere_lower_bound": float(sphere_lower_bound),
        },
        "version": _version_block(),
    }


def solve_payload(config_echo: dict, c1: ConditionReport | None, c2: ConditionReport,
                  sphere_lower_bound: float, result: TwoSolutions) -> dict:
    timing = {
        "minimize_iterations": int(result.minimizer_report.iterations),
        "mountain_pass_iterations": int(result.mountain_pass_report.iterations),
        "deterministic_counters": True,
    }
    return {
        "kind": "solve",
        "config": config_echo,
        "conditions": {
            "C1": condition_payload(c1) if c1 is not None else None,
            "C2": condition_payload(c2),
            "sphere_lower_bound": float(sphere_lower_bound),
        },
        "minimizer": minimizer_payload(result.minimizer_report),
        "mountain_pass": mountain_pass_payload(result.mountain_pass_report),
        "certificates": {
            "minimizer": certificate_payload(result.minimizer_certificate),
            "mountain_pass": certificate_payload(result.mountain_pass_certificate),
        },
        "timing": timing,
        "version": _version_block(),
    }


def refusal_payload(config_echo: dict, report: ConditionReport) -> dict:
    return {
        "kind": "refusal",
        "config": config_echo,
        "failed_condition": condition_payload(report),
        "version": _version_block(),
    }


def dumps(payload: dict) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def sweep_csv(rows) -> str:
    """Assemble the sweep summary CSV.

    Each row is (axis1_value, axis2_value_or_None, c2_lhs, c2_rhs, c2_pass,
    n_certified, j_min_or_None, j_mp_or_None).
    """
    lines = [_CSV_HEADER]
    for a1, a2, lhs, rhs, ok, n_cert, jmin, jmp in rows:
        lines.append(
            ",".join(
                [
                    repr(float(a1)),
                    "" if a2 is None else repr(float(a2)),
                    repr(float(lhs)),
                    repr(float(rhs)),
                    "1" if ok else "0",
                    str(int(n_cert)),
                    "" if jmin is None else repr(float(jmin)),
                    "" if jmp is None else repr(float(jmp)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def solution_csv(y: GridFunction) -> str:
    """Solution vector as CSV with columns k, y(k) (full precision)."""
    lines = ["k,y"]
    for k, v in enumerate(y.values):
        lines.append(f"{k},{float(v)!r}")
    return "\n".join(lines) + "\n"
