"""Ball-constrained minimization, KKT certificates, Newton polishing, and the
two-solution pipeline.

The pipeline realizes the two-solution existence mechanism numerically:

1. minimize the action J over the ball B = { ||y|| <= 1/sqrt(T+1) } by
   projected descent from multiple starts; under the smallness condition C2
   the minimizer is interior, which the KKT certificate confirms (multiplier
   sigma = 0);
2. scan constant profiles y_lambda until their energy drops below both the
   minimizer energy and the certified sphere lower bound;
3. run the mountain-pass search between the minimizer and that profile;
4. polish both critical points with damped Newton on the equation residual;
5. certify each solution: small residual and strict positivity (by the
   discrete maximum principle, exact solutions of the positive-part equation
   are strictly positive, so a certified-residual iterate that is not
   positive is flagged as a numerical anomaly rather than accepted).

Descent steps use the direction preconditioned by the difference metric
(solving -D^2 u = g), so the radial ball projection is the exact metric
projection and fixed points of the projected iteration satisfy exactly the
first-order condition <J'(y), v> + sigma <y, v> = 0 in the difference inner
product.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_banded

from .conditions import (
    check_envelope_smallness,
    check_growth_envelope,
    sphere_energy_lower_bound,
)
from .energy import ProblemSpec, _energy, _grad_interior, _residual_interior
from .errors import (
    ConditionRefusalError,
    DistinctnessError,
    IterationBudgetError,
    JacobianError,
    LambdaScanError,
    PKLaplaceError,
    SolveStageError,
)
from .grid import GridFunction, constant_profile, h_norm, sup_norm
from .linalg import neg_laplacian_apply, ymetric_solve
from .saddle import MountainPassReport, mountain_pass

__all__ = [
    "BallConstraint",
    "MinimizerReport",
    "SolutionCertificate",
    "TwoSolutions",
    "project_to_ball",
    "minimize_in_ball",
    "kkt_residual",
    "find_lambda0",
    "newton_polish",
    "verify_positive_solution",
    "solve_two",
]

# relative distance below the radius that counts as strictly interior
_BOUNDARY_CUT = 1e-6
_ARMIJO = 1e-4
_MIN_STEP = 1e-18
_DISTINCTNESS_TOL = 1e-6
_PIVOT_FLOOR = 1e-12


@dataclass(frozen=True)
class BallConstraint:
    """The constraint mu(y) = ||y||^2/2 - radius^2/2 <= 0.

    The canonical radius is 1/sqrt(T+1), for which mu(0) = -1/(2(T+1)) < 0
    (an interior Slater point always exists).
    """

    radius: float

    @classmethod
    def for_problem(cls, problem: ProblemSpec) -> "BallConstraint":
        return cls(problem.ball_radius)

    def mu(self, y: GridFunction) -> float:
        return 0.5 * (h_norm(y) ** 2 - self.radius**2)


@dataclass(frozen=True)
class MinimizerReport:
    """Constrained minimization outcome with its first-order certificate."""

    minimizer: GridFunction
    energy: float
    kkt_sigma: float
    kkt_residual_norm: float
    interior: bool
    iterations: int
    notes: tuple = ()


@dataclass(frozen=True)
class SolutionCertificate:
    """Machine-checkable record for one candidate solution.

    ``certified`` means the residual sup norm is within tolerance and every
    interior value exceeds the positivity margin.  ``anomaly`` marks the
    suspicious combination residual-ok but not strictly positive.
    """

    solution: GridFunction
    residual_sup_norm: float
    strictly_positive: bool
    min_value: float
    energy: float
    certified: bool
    anomaly: bool


class TwoSolutions(NamedTuple):
    minimizer_certificate: SolutionCertificate
    mountain_pass_certificate: SolutionCertificate
    minimizer_report: MinimizerReport
    mountain_pass_report: MountainPassReport


# ---------------------------------------------------------------------------
# projection and first-order (KKT) data
# ---------------------------------------------------------------------------

def _project_vals(vals: np.ndarray, radius: float) -> np.ndarray:
    d = np.diff(vals)
    nrm = float(np.sqrt(np.sum(d * d)))
    if nrm <= radius:
        return vals
    return vals * (radius / nrm)


def project_to_ball(y: GridFunction, radius: float) -> GridFunction:
    """Radial projection onto { ||y|| <= radius } in the difference norm."""
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    out = _project_vals(np.array(y.values), radius)
    return y if out is y.values else GridFunction(out)


def _kkt_from_grad(problem: ProblemSpec, vals: np.ndarray, g: np.ndarray):
    """Multiplier and first-order residual vector at vals given the gradient.

    Strictly interior points get sigma = 0 by complementary slackness; on the
    boundary sigma solves the scalar least-squares problem min ||g + sigma c||
    with c the difference-metric representative -D^2 y, clamped at sigma >= 0.
    Returns (sigma, residual_vector, strictly_interior).
    """
    d = np.diff(vals)
    nrm = float(np.sqrt(np.sum(d * d)))
    radius = problem.ball_radius
    if nrm < radius * (1.0 - _BOUNDARY_CUT):
        return 0.0, g, True
    c = neg_laplacian_apply(vals)
    cc = float(np.dot(c, c))
    sigma = max(0.0, -float(np.dot(g, c)) / cc) if cc > 0.0 else 0.0
    return sigma, g + sigma * c, False


def kkt_residual(problem: ProblemSpec, y: GridFunction):
    """First-order certificate data (sigma, residual norm) at y.

    sigma is the nonnegative multiplier of the ball constraint chosen by
    least squares so that grad + sigma * (-D^2 y) has minimal Euclidean norm;
    complementary slackness forces sigma = 0 strictly inside the ball.
    """
    vals = y.values
    g = _grad_interior(problem, vals)
    sigma, res, _ = _kkt_from_grad(problem, vals, g)
    return sigma, float(np.sqrt(np.sum(res * res)))


# ---------------------------------------------------------------------------
# Newton polishing of the equation residual
# ---------------------------------------------------------------------------

def _newton_step(problem: ProblemSpec, vals: np.ndarray, r: np.ndarray) -> np.ndarray:
    """One Newton direction for the residual map on the interior unknowns.

    The Jacobian is tridiagonal: flux coefficients (p(j)-1)|d_j|^(p(j)-2) off
    the diagonal and their negative sum plus df/dy (central differences at
    the positive part) on it.  Zero pivots from degenerate flux coefficients
    (flat profiles with p > 2) are regularized by a 1e-12 shift.
    """
    T = problem.T
    d = np.diff(vals)
    pk = problem.exponents.values[:-1]
    c = (pk - 1.0) * np.abs(d) ** (pk - 2.0)
    pos = np.maximum(vals[1:-1], 0.0)
    h = 1e-6 * (1.0 + np.abs(pos))
    f = problem.nonlinearity.evaluator
    ks = problem.interior_indices
    fprime = (np.asarray(f(ks, pos + h), dtype=float) - np.asarray(f(ks, pos - h), dtype=float)) / (2.0 * h)

    diag = -(c[1:] + c[:-1]) + fprime
    diag = np.where(np.abs(diag) < _PIVOT_FLOOR, diag - _PIVOT_FLOOR, diag)
    ab = np.zeros((3, T))
    ab[0, 1:] = c[1:T]
    ab[1, :] = diag
    ab[2, :-1] = c[1:T]
    try:
        step = solve_banded((1, 1), ab, -r)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises ValueError mostly
        raise JacobianError(f"Newton Jacobian is singular: {exc}") from exc
    if not np.all(np.isfinite(step)):
        raise JacobianError("Newton Jacobian produced a non-finite step")
    return step


def newton_polish(problem: ProblemSpec, y_init: GridFunction, max_iter: int = 60) -> GridFunction:
    """Damped Newton on the equation residual, down to the residual tolerance.

    Accepted steps must reduce the residual sup norm (Armijo-damped); the
    final iterate satisfies sup |r| <= residual_tol.
    """
    rtol = problem.tolerances.residual_tol
    vals = np.array(y_init.values)
    r = _residual_interior(problem, vals)
    rn = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if rn <= rtol:
            return GridFunction(vals)
        step = _newton_step(problem, vals, r)
        a = 1.0
        accepted = False
        while a >= _MIN_STEP:
            trial = vals.copy()
            trial[1:-1] += a * step
            rt = _residual_interior(problem, trial)
            rtn = float(np.max(np.abs(rt)))
            if rtn <= (1.0 - _ARMIJO * a) * rn:
                vals, r, rn = trial, rt, rtn
                accepted = True
                break
            a *= 0.5
        if not accepted:
            raise IterationBudgetError(
                f"Newton damping stalled at residual {rn:.3e}", best=GridFunction(vals)
            )
    if rn <= rtol:
        return GridFunction(vals)
    raise IterationBudgetError(
        f"Newton did not reach residual tolerance {rtol:.1e} in {max_iter} iterations "
        f"(residual {rn:.3e})",
        best=GridFunction(vals),
    )


# ---------------------------------------------------------------------------
# projected descent on the ball
# ---------------------------------------------------------------------------

def _stationarity(problem, vals, g):
    """(measure, sigma, res_vec, interior): sup-norm first-order residual."""
    sigma, res, interior = _kkt_from_grad(problem, vals, g)
    return float(np.max(np.abs(res))), sigma, res, interior


def _pgd(problem: ProblemSpec, vals0: np.ndarray, gtol: float, max_iter: int):
    """Projected descent with difference-metric preconditioning.

    Returns (vals, energy, iterations, converged).  Accepted steps are
    monotone in the energy.
    """
    radius = problem.ball_radius
    vals = _project_vals(np.array(vals0), radius)
    J = _energy(problem, vals)
    alpha = 1.0
    it = 0
    while it < max_iter:
        g = _grad_interior(problem, vals)
        measure, _, _, _ = _stationarity(problem, vals, g)
        if measure <= gtol:
            return vals, J, it, True
        u = ymetric_solve(problem.T, g)
        a = alpha
        accepted = False
        while a >= _MIN_STEP:
            trial = vals.copy()
            trial[1:-1] -= a * u
            trial = _project_vals(trial, radius)
            moved = trial[1:-1] - vals[1:-1]
            if not np.any(moved):
                break
            Jt = _energy(problem, trial)
            decrease = -float(np.dot(g, moved))
            if Jt <= J - _ARMIJO * max(decrease, 0.0):
                accepted = True
                break
            a *= 0.5
        if not accepted:
            return vals, J, it, False
        vals, J = trial, Jt
        alpha = min(a * 2.0, 1e6)
        it += 1
    return vals, J, it, False


def _interior_newton_finish(problem, vals, J, gtol, max_iter=50):
    """Quadratic endgame for an interior minimizer candidate.

    Damped Newton steps on the residual, accepted only while they stay
    strictly inside the ball, keep decreasing the residual, and do not
    increase the energy beyond floating-point slack.
    """
    radius = problem.ball_radius
    r = _residual_interior(problem, vals)
    rn = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if rn <= gtol:
            break
        try:
            step = _newton_step(problem, vals, r)
        except JacobianError:
            break
        a = 1.0
        accepted = False
        while a >= 1e-8:
            trial = vals.copy()
            trial[1:-1] += a * step
            d = np.diff(trial)
            if np.sqrt(np.sum(d * d)) >= radius * (1.0 - _BOUNDARY_CUT):
                a *= 0.5
                continue
            rt = _residual_interior(problem, trial)
            rtn = float(np.max(np.abs(rt)))
            Jt = _energy(problem, trial)
            if rtn <= (1.0 - _ARMIJO * a) * rn and Jt <= J + 1e-12 * (1.0 + abs(J)):
                vals, r, rn, J = trial, rt, rtn, Jt
                accepted = True
                break
            a *= 0.5
        if not accepted:
            break
    return vals, J, rn


def minimize_in_ball(
    problem: ProblemSpec,
    seed: int = 0,
    n_starts: int = 8,
    max_iter: int = 20000,
    check_conditions: bool = True,
) -> MinimizerReport:
    """Minimize J over the ball ||y|| <= 1/sqrt(T+1) with a KKT certificate.

    Multi-start projected descent (the zero function plus ``n_starts`` seeded
    random interior points); the best candidate is driven to the stationarity
    tolerance, with an interior Newton finish when applicable.  When the
    smallness condition C2 holds, an interior minimizer is expected; a
    boundary outcome in that case is reported as a finding in ``notes``
    rather than silently accepted.
    """
    tol = problem.tolerances
    radius = problem.ball_radius
    env = problem.nonlinearity.envelope
    notes = []

    if check_conditions and env is not None:
        coarse = check_growth_envelope(
            problem, y_grid=np.linspace(0.0, 10.0, 101), check_asymptotics=True
        )
        if not coarse.holds:
            warnings.warn(
                f"growth envelope check failed at (k, y) = {coarse.witness}; proceeding anyway",
                stacklevel=2,
            )
            notes.append("C1 spot check failed (warn-only)")

    rng = np.random.default_rng(seed)
    starts = [np.zeros(problem.T + 2)]
    for _ in range(n_starts):
        direction = rng.standard_normal(problem.T)
        full = np.zeros(problem.T + 2)
        full[1:-1] = direction
        nrm = float(np.sqrt(np.sum(np.diff(full) ** 2)))
        if nrm == 0.0:
            continue
        rho = rng.uniform(0.05, 0.95)
        starts.append(full * (rho * radius / nrm))

    coarse_tol = max(tol.grad_tol, 1e-6)
    candidates = []
    total_iterations = 0
    for s in starts:
        vals, J, its, _ = _pgd(problem, s, coarse_tol, max_iter)
        total_iterations += its
        candidates.append((J, vals))
    J_best, vals = min(candidates, key=lambda c: c[0])

    vals, J_best, its, converged = _pgd(problem, vals, tol.grad_tol, max_iter)
    total_iterations += its

    g = _grad_interior(problem, vals)
    measure, sigma, res, interior = _stationarity(problem, vals, g)
    if measure > tol.grad_tol and interior:
        vals, J_best, rn = _interior_newton_finish(problem, vals, J_best, tol.grad_tol)
        g = _grad_interior(problem, vals)
        measure, sigma, res, interior = _stationarity(problem, vals, g)
    if measure > tol.grad_tol:
        report = MinimizerReport(
            GridFunction(vals), J_best, sigma,
            float(np.sqrt(np.sum(res * res))), interior, total_iterations, tuple(notes),
        )
        raise IterationBudgetError(
            f"projected descent stopped at stationarity {measure:.3e} > {tol.grad_tol:.1e}",
            best=report,
        )

    if check_conditions and env is not None:
        c2 = check_envelope_smallness(problem.T, problem.exponents, env)
        if c2.holds and not interior:
            warnings.warn(
                "smallness condition holds but the minimizer sits on the boundary; "
                "this contradicts the interiority mechanism",
                stacklevel=2,
            )
            notes.append("C2 holds but minimizer is on the boundary (finding)")

    return MinimizerReport(
        minimizer=GridFunction(vals),
        energy=J_best,
        kkt_sigma=sigma,
        kkt_residual_norm=float(np.sqrt(np.sum(res * res))),
        interior=interior,
        iterations=total_iterations,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# constant-profile scan, certification, pipeline
# ---------------------------------------------------------------------------

def find_lambda0(problem: ProblemSpec, barrier: float, lambda_max: float = 1e8):
    """Scan constant profiles y_lambda until J(y_lambda) drops below barrier.

    Doubles lambda from 2; with a valid lower envelope (m > p_plus) the
    energy tends to -infinity so the scan terminates.  Returns (lambda0,
    energy).  The returned profile always lies outside the closed ball since
    its norm is lambda * sqrt(2) >= 2 sqrt(2) > 1 >= 1/sqrt(T+1).
    """
    if not np.isfinite(barrier):
        raise ValueError("barrier must be finite")
    margin = 1e-9 * (1.0 + abs(barrier))
    lam = 2.0
    while lam <= lambda_max:
        y = constant_profile(problem.T, lam)
        J = _energy(problem, y.values)
        if J < barrier - margin:
            if not h_norm(y) > problem.ball_radius:
                raise LambdaScanError(
                    "constant profile unexpectedly inside the constraint ball"
                )
            return lam, J
        lam *= 2.0
    raise LambdaScanError(
        f"constant-profile energy never crossed below {barrier:.6g} up to "
        f"lambda = {lambda_max:.3g}; the lower growth envelope is suspect"
    )


def verify_positive_solution(problem: ProblemSpec, y: GridFunction) -> SolutionCertificate:
    """Certify a candidate: equation residual and strict positivity.

    A candidate is certified when its residual sup norm is within the
    residual tolerance and every interior value exceeds the positivity
    margin; positivity means the positive-part equation coincides with the
    original problem at the candidate.  A residual-certified iterate that is
    not strictly positive contradicts the maximum principle for exact
    solutions and is flagged as an anomaly.
    """
    tol = problem.tolerances
    r = _residual_interior(problem, y.values)
    r_sup = float(np.max(np.abs(r)))
    min_value = float(np.min(y.interior))
    strictly_positive = min_value > tol.positivity_margin
    residual_ok = r_sup <= tol.residual_tol
    anomaly = residual_ok and not strictly_positive
    if anomaly:
        warnings.warn(
            f"numerical anomaly: residual {r_sup:.3e} within tolerance but the "
            f"minimum value {min_value:.3e} is not strictly positive",
            stacklevel=2,
        )
    return SolutionCertificate(
        solution=y,
        residual_sup_norm=r_sup,
        strictly_positive=strictly_positive,
        min_value=min_value,
        energy=_energy(problem, y.values),
        certified=residual_ok and strictly_positive,
        anomaly=anomaly,
    )


def solve_two(
    problem: ProblemSpec,
    seed: int = 0,
    n_starts: int = 8,
    minimize_max_iter: int = 20000,
    path_nodes: int = 64,
    mountain_max_iter: int = 20000,
) -> TwoSolutions:
    """Find and certify two distinct strictly positive solutions.

    Requires the smallness condition C2 (hard gate: refusal carries the
    condition report).  Pipeline: ball minimization, interiority assertion,
    constant-profile scan, mountain pass, Newton polish of both points,
    certification, distinctness and energy-ordering assertions.  Stage
    failures propagate as SolveStageError naming the stage.
    """
    env = problem.nonlinearity.envelope
    if env is None:
        raise SolveStageError(
            "conditions", "a growth envelope is required for the two-solution pipeline"
        )
    c2 = check_envelope_smallness(problem.T, problem.exponents, env)
    if not c2.holds:
        raise ConditionRefusalError(c2)

    try:
        min_report = minimize_in_ball(
            problem, seed=seed, n_starts=n_starts, max_iter=minimize_max_iter
        )
    except PKLaplaceError as exc:
        raise SolveStageError("minimize", str(exc)) from exc
    if not min_report.interior:
        raise SolveStageError(
            "minimize",
            "expected an interior minimizer under the smallness condition, got a boundary point",
        )

    level = sphere_energy_lower_bound(problem)
    barrier = min(level, min_report.energy)
    try:
        lambda0, energy_at_lambda0 = find_lambda0(problem, barrier)
    except PKLaplaceError as exc:
        raise SolveStageError("profile_scan", str(exc)) from exc
    far_profile = constant_profile(problem.T, lambda0)

    try:
        mp_report = mountain_pass(
            problem,
            min_report.minimizer,
            far_profile,
            n_nodes=path_nodes,
            max_iter=mountain_max_iter,
            barrier=level,
            require_barrier=False,
        )
    except PKLaplaceError as exc:
        raise SolveStageError("mountain_pass", str(exc)) from exc

    try:
        low = newton_polish(problem, min_report.minimizer)
        high = newton_polish(problem, mp_report.critical_point)
    except PKLaplaceError as exc:
        raise SolveStageError("newton_polish", str(exc)) from exc

    cert_low = verify_positive_solution(problem, low)
    cert_high = verify_positive_solution(problem, high)

    separation = float(np.max(np.abs(low.values - high.values)))
    if separation <= _DISTINCTNESS_TOL:
        raise DistinctnessError(
            f"the two critical points coincide numerically (sup distance {separation:.3e})"
        )
    if not cert_low.energy < cert_high.energy:
        raise SolveStageError(
            "ordering",
            f"expected J(minimizer) < J(mountain pass), got {cert_low.energy!r} >= {cert_high.energy!r}",
        )
    return TwoSolutions(cert_low, cert_high, min_report, mp_report)
