"""Executable hypothesis checks and certified bounds.

Two conditions gate the two-solution pipeline:

* C1 (growth envelope): positive sequences phi1, phi2, psi1, psi2 and an
  exponent m > p_plus with, for all y >= 0 and k in [1, T],

      psi1(k) + phi1(k) |y|^(m-2) y  <=  f(k, y)  <=  phi2(k) |y|^(m-2) y + psi2(k).

* C2 (envelope smallness): the geometric constant beats the upper envelope,

      T^((p_plus - 2)/2) (T+1)^(-p_plus/2)  >  sum_k (phi2(k) + psi2(k)).

Six auxiliary norm inequalities A1..A6 relate the variable-exponent modular
sum_k |Dy(k-1)|^(p(k-1)), plain power sums, the difference norm ||y|| and the
sup norm; each is implemented as an exactly evaluated predicate.  A1 and A2
are implemented in their provable power-mean form with the (T+1) base

    A1:  sum |Dy|^p(k-1) >= (T+1)^((2-p_minus)/2) ||y||^p_minus - (T+1)
    A2:  sum |Dy|^p(k-1) >= (T+1)^((2-p_plus)/2)  ||y||^p_plus    (||y|| <= 1)

which are tight (alternating profiles attain A2's constant), so any larger
constant is falsifiable.  A4 is checked in the sharpened explicit-constant
form sum |Dy|^p(k-1) <= (T+1)(||y||^p_plus + 1), which implies the classical
2^p_plus (T+1)(C ||y||^p_plus + 1) bound for any C >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .energy import GrowthEnvelope, ProblemSpec
from .errors import PreconditionError
from .grid import ExponentMap, GridFunction, forward_difference, h_norm, sup_norm

__all__ = [
    "ConditionReport",
    "check_growth_envelope",
    "check_envelope_smallness",
    "check_norm_inequality",
    "sphere_energy_lower_bound",
    "envelope_scale_threshold",
    "NORM_INEQUALITIES",
]

NORM_INEQUALITIES = ("A1", "A2", "A3", "A4", "A5", "A6")

_DEFAULT_Y_GRID_STOP = 100.0
_DEFAULT_Y_GRID_STEP = 0.01
_ASYMPTOTIC_POINTS = (1e3, 1e6)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one condition check.

    ``lhs``/``rhs`` are the two compared quantities (for C1: the worst lower
    and upper envelope margins, both required nonnegative; for A3 the outer
    chain bounds).  ``witness`` is the violating sample for sample-based
    checks: a (k, y) pair for C1, the tested grid function for A-checks.
    """

    condition_id: str
    lhs: float
    rhs: float
    holds: bool
    witness: Optional[object] = None
    sample_count: int = 0
    notes: tuple = field(default_factory=tuple)


def _geometric_constant(T: int, p_plus: float) -> float:
    """T^((p_plus-2)/2) (T+1)^(-p_plus/2), evaluated in log space.

    Direct powers overflow around T^((p-2)/2) for large T and p; the log-space
    form is exact to a few ulps (verified against 50-digit arithmetic).
    """
    return math.exp(0.5 * ((p_plus - 2.0) * math.log(T) - p_plus * math.log(T + 1.0)))


def check_growth_envelope(problem: ProblemSpec, y_grid=None, check_asymptotics=True) -> ConditionReport:
    """Verify the two-sided growth envelope (C1) of f by dense sampling.

    Samples f(k, y) on y_grid (default 0..100 step 0.01, all k in [1, T]) and,
    unless disabled, at the large arguments 1e3 and 1e6 where the m-power
    dominates.  The report's lhs/rhs are the worst margins f - lower and
    upper - f; a failed check reports the first violating (k, y) as witness.
    Continuity makes dense sampling meaningful; this is not a symbolic proof.
    """
    env = problem.nonlinearity.envelope
    if env is None:
        raise PreconditionError("C1 check requires a growth envelope on the nonlinearity")
    if y_grid is None:
        y_grid = np.arange(0.0, _DEFAULT_Y_GRID_STOP + _DEFAULT_Y_GRID_STEP / 2, _DEFAULT_Y_GRID_STEP)
    y = np.asarray(y_grid, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise PreconditionError("y_grid must be a non-empty 1-d sequence")
    if np.any(y < 0.0):
        raise PreconditionError("C1 constrains y >= 0 only; y_grid must be nonnegative")
    if check_asymptotics:
        y = np.concatenate([y, np.asarray(_ASYMPTOTIC_POINTS)])

    ks = problem.interior_indices[:, None]
    m = env.m
    with np.errstate(over="ignore"):
        f = np.asarray(problem.nonlinearity.evaluator(ks, y[None, :]), dtype=float)
        power = np.abs(y[None, :]) ** (m - 2.0) * y[None, :]
        lower = env.psi1[:, None] + env.phi1[:, None] * power
        upper = env.phi2[:, None] * power + env.psi2[:, None]
        ok = (f >= lower) & (f <= upper)
        lo_margin = np.where(np.isinf(f) & np.isinf(lower), 0.0, f - lower)
        hi_margin = np.where(np.isinf(upper) & np.isinf(f), 0.0, upper - f)

    holds = bool(np.all(ok))
    witness = None
    if not holds:
        bad = np.argwhere(~ok)
        row, col = bad[np.lexsort((bad[:, 1], bad[:, 0]))][0]
        witness = (int(row) + 1, float(y[col]))
    return ConditionReport(
        condition_id="C1",
        lhs=float(np.min(lo_margin)),
        rhs=float(np.min(hi_margin)),
        holds=holds,
        witness=witness,
        sample_count=int(f.size),
    )


def check_envelope_smallness(T: int, exponents: ExponentMap, envelope: GrowthEnvelope) -> ConditionReport:
    """The smallness condition (C2): geometric constant > upper-envelope total.

    lhs = T^((p_plus-2)/2) (1/sqrt(T+1))^p_plus, rhs = sum_k (phi2(k)+psi2(k)).
    Exact evaluation (log-space power, exactly rounded summation); no sampling.
    """
    if envelope.T != T or exponents.T != T:
        raise PreconditionError("T, exponent map, and envelope sizes must agree")
    lhs = _geometric_constant(T, exponents.p_plus)
    rhs = math.fsum((envelope.phi2 + envelope.psi2).tolist())
    return ConditionReport(condition_id="C2", lhs=lhs, rhs=rhs, holds=lhs > rhs)


def envelope_scale_threshold(T: int, exponents: ExponentMap, envelope: GrowthEnvelope) -> float:
    """The critical scale s* = lhs/rhs of the smallness condition.

    Scaling the upper envelope (hence f, for the built-in families) by s keeps
    C2 satisfied exactly for s < s* and fails it for s >= s*.
    """
    rep = check_envelope_smallness(T, exponents, envelope)
    return rep.lhs / rep.rhs


def sphere_energy_lower_bound(problem: ProblemSpec) -> float:
    """Lower bound L for the action on the constraint sphere ||y|| = 1/sqrt(T+1).

    L = (1/p_plus) T^((p_plus-2)/2) (1/sqrt(T+1))^p_plus
        - sum_k (phi2(k)/m + psi2(k)).

    On the sphere every |y(k)| <= 1, so each primitive term is at most
    phi2(k)/m + psi2(k) under the envelope.  For p identically 2 the kinetic
    bound is an identity and L certifies inf J over the sphere; for p_plus > 2
    it inherits the classical (unproven-sharp) geometric constant and the
    solve pipeline double-checks the barrier numerically instead of relying
    on it.
    """
    env = problem.nonlinearity.envelope
    if env is None:
        raise PreconditionError("sphere lower bound requires a growth envelope")
    geom = _geometric_constant(problem.T, problem.exponents.p_plus)
    tail = math.fsum((env.phi2 / env.m + env.psi2).tolist())
    return geom / problem.exponents.p_plus - tail


# ---------------------------------------------------------------------------
# norm inequalities
# ---------------------------------------------------------------------------

def _modular(y: GridFunction, exponents: ExponentMap) -> float:
    d = forward_difference(y)
    return float(np.sum(np.abs(d) ** exponents.values[:-1]))


def _require(cond: bool, message: str):
    if not cond:
        raise PreconditionError(message)


def check_norm_inequality(
    ineq: str,
    y: GridFunction,
    exponents: Optional[ExponentMap] = None,
    m: Optional[float] = None,
    p: Optional[float] = None,
    q: Optional[float] = None,
) -> ConditionReport:
    """Evaluate one of the norm inequalities A1..A6 at a given grid function.

    Preconditions are the hypotheses of the inequalities, not bugs: violating
    them raises PreconditionError naming the unmet hypothesis.  A1, A2, A4
    need the exponent map; A3, A5 need a scalar power m >= 2; A6 needs a
    conjugate pair p, q > 1 (q defaults to p/(p-1)).

    Norm powers ||y||^m are computed as (sum |Dy|^2)^(m/2) without a square
    root round trip, so the equality cases of A2 and A3 (attained by
    equal-magnitude differences and by m = 2) evaluate exactly.
    """
    T = y.T
    d = forward_difference(y)
    nrm2 = float(np.sum(np.abs(d) ** 2.0))
    if ineq in ("A1", "A2", "A4"):
        _require(exponents is not None, f"{ineq} requires the exponent map")
        _require(exponents.T == T, "exponent map size must match the grid function")

    if ineq == "A1":
        _require(nrm2 > 1.0, "A1 requires h_norm(y) > 1")
        lhs = _modular(y, exponents)
        rhs = (T + 1.0) ** ((2.0 - exponents.p_minus) / 2.0) * nrm2 ** (
            exponents.p_minus / 2.0
        ) - (T + 1.0)
        return ConditionReport("A1", lhs, rhs, lhs >= rhs, None if lhs >= rhs else y, 1)

    if ineq == "A2":
        _require(nrm2 <= 1.0, "A2 requires h_norm(y) <= 1")
        lhs = _modular(y, exponents)
        rhs = (T + 1.0) ** ((2.0 - exponents.p_plus) / 2.0) * nrm2 ** (
            exponents.p_plus / 2.0
        )
        return ConditionReport("A2", lhs, rhs, lhs >= rhs, None if lhs >= rhs else y, 1)

    if ineq == "A3":
        _require(m is not None and m >= 2.0, "A3 requires m >= 2")
        mid = float(np.sum(np.abs(d) ** m))
        lo = (T + 1.0) ** ((2.0 - m) / 2.0) * nrm2 ** (m / 2.0)
        hi = (T + 1.0) * nrm2 ** (m / 2.0)
        holds = lo <= mid <= hi
        return ConditionReport(
            "A3", lo, hi, holds, None if holds else y, 1, notes=(f"power_sum={mid!r}",)
        )

    if ineq == "A4":
        lhs = _modular(y, exponents)
        rhs = (T + 1.0) * (nrm2 ** (exponents.p_plus / 2.0) + 1.0)
        return ConditionReport("A4", lhs, rhs, lhs <= rhs, None if lhs <= rhs else y, 1)

    if ineq == "A5":
        _require(m is not None and m >= 2.0, "A5 requires m >= 2")
        lhs = float(np.sum(np.abs(d) ** m))
        rhs = 2.0**m * float(np.sum(np.abs(y.interior) ** m))
        return ConditionReport("A5", lhs, rhs, lhs <= rhs, None if lhs <= rhs else y, 1)

    if ineq == "A6":
        _require(p is not None and p > 1.0, "A6 requires p > 1")
        if q is None:
            q = p / (p - 1.0)
        _require(
            q > 1.0 and abs(1.0 / p + 1.0 / q - 1.0) <= 1e-12,
            "A6 requires p, q > 1 with 1/p + 1/q = 1",
        )
        lhs = sup_norm(y)
        rhs = (T + 1.0) ** (1.0 / q) * float(np.sum(np.abs(d) ** p)) ** (1.0 / p)
        return ConditionReport("A6", lhs, rhs, lhs <= rhs, None if lhs <= rhs else y, 1)

    raise ValueError(f"unknown inequality id {ineq!r}; expected one of {NORM_INEQUALITIES}")
