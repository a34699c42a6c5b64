"""Numerical mountain-pass search along a deformable path.

Given endpoints x0, x1 whose energies lie below a separating level, the
minimax level

    c = inf over paths h from x0 to x1 of max_s J(h(s))

is a critical value, attained at a saddle point whose energy strictly
exceeds both endpoint energies.  The search discretizes the path into nodes
and repeats: locate the continuous energy maximum along the polyline (scalar
maximization on the segments adjacent to the peak node), take a line-searched
descent step from the peak with a trust cap of one node spacing (so the peak
walks along the energy ridge instead of jumping across it), write the moved
point back into the path, and periodically re-spline the path by arc length
around the peak.  Once the peak's gradient is small or its energy has
plateaued, a damped Newton endgame refines the stationary point to the
gradient tolerance; the refined point is accepted only if its energy still
clears the endpoint energies and does not exceed the path's max estimate,
otherwise the walk resumes with a tighter switching threshold.

The reported level is an upper estimate of the true minimax value; no
a-posteriori bound is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .energy import ProblemSpec, _energy, _grad_interior, _residual_interior
from .errors import BarrierError, IterationBudgetError, PathCollapseError
from .grid import GridFunction
from .linalg import ymetric_solve

__all__ = ["MountainPassReport", "mountain_pass"]

_ARMIJO = 1e-4
_MIN_STEP = 1e-18
_ENDGAME_WARMUP = 20
_ENDGAME_EVERY = 25


@dataclass(frozen=True)
class MountainPassReport:
    """Result of a mountain-pass search.

    ``critical_value`` is the energy at the located saddle (an upper estimate
    of the true minimax level); it strictly exceeds both endpoint energies.
    ``barrier_verified`` records whether the max of the endpoint energies was
    confirmed below the supplied separating level.
    """

    critical_point: GridFunction
    critical_value: float
    path_energy_history: tuple
    endpoint_energies: tuple
    grad_norm_at_result: float
    iterations: int
    barrier_verified: bool


def _resample_polyline(pts: np.ndarray, n_out: int) -> np.ndarray:
    """Resample a polyline at n_out uniform arc-length parameters (endpoints kept)."""
    seg = np.sqrt(((pts[1:] - pts[:-1]) ** 2).sum(axis=1))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total == 0.0:
        return np.repeat(pts[:1], n_out, axis=0)
    t = np.linspace(0.0, total, n_out)
    idx = np.clip(np.searchsorted(s, t, side="right") - 1, 0, len(seg) - 1)
    w = (t - s[idx]) / np.where(seg[idx] > 0.0, seg[idx], 1.0)
    out = pts[idx] + w[:, None] * (pts[idx + 1] - pts[idx])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def _segment_peak(problem, a, b):
    """Continuous maximizer of J along the segment a -> b; returns (t, J)."""
    res = minimize_scalar(
        lambda t: -_energy(problem, a + t * (b - a)),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(res.x), float(-res.fun)


def _continuous_peak(problem, nodes, node_energy, i):
    """Best energy point on the segments around the argmax node i.

    Returns (point, energy, replace_index, at_endpoint): replace_index is the
    interior node nearest the peak (the one the descended point overwrites);
    at_endpoint reports that the continuous maximum is an endpoint itself,
    i.e. the path has collapsed into one basin.
    """
    n = nodes.shape[0]
    best = (float(node_energy[i]), nodes[i].copy(), i)
    if i > 0:
        t, J = _segment_peak(problem, nodes[i - 1], nodes[i])
        if J > best[0]:
            j = i - 1 if t < 0.5 else i
            best = (J, nodes[i - 1] + t * (nodes[i] - nodes[i - 1]), j)
    if i < n - 1:
        t, J = _segment_peak(problem, nodes[i], nodes[i + 1])
        if J > best[0]:
            j = i if t < 0.5 else i + 1
            best = (J, nodes[i] + t * (nodes[i + 1] - nodes[i]), j)
    value, point, j = best
    at_endpoint = (i == 0 or i == n - 1) and value <= float(node_energy[i]) + 1e-15 * (
        1.0 + abs(value)
    )
    return point, value, int(np.clip(j, 1, n - 2)), at_endpoint


def _saddle_newton(problem, vals0, gtol, max_iter=80):
    """Damped Newton on the stationarity system from a near-saddle point.

    Returns (vals, sup_grad, converged); never raises on stall, the caller
    decides whether to resume the path walk.
    """
    from .solvers import _newton_step  # deferred: avoids a module cycle

    vals = np.array(vals0)
    r = _residual_interior(problem, vals)
    rn = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if rn <= gtol:
            return vals, rn, True
        try:
            step = _newton_step(problem, vals, r)
        except Exception:
            return vals, rn, False
        a = 1.0
        accepted = False
        while a >= 1e-10:
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
            return vals, rn, False
    return vals, rn, rn <= gtol


def mountain_pass(
    problem: ProblemSpec,
    x0: GridFunction,
    x1: GridFunction,
    n_nodes: int = 64,
    max_iter: int = 20000,
    barrier: float | None = None,
    require_barrier: bool = True,
    resample_every: int = 10,
) -> MountainPassReport:
    """Locate a saddle of the action between two low-energy endpoints.

    Parameters
    ----------
    problem : ProblemSpec
    x0, x1 : GridFunction
        Path endpoints (typically the ball minimizer and a constant profile
        far outside the ball).  Their energies should lie below ``barrier``.
    n_nodes : int
        Path resolution; endpoints are frozen.
    barrier : float, optional
        Separating level (the certified sphere lower bound).  When given and
        ``require_barrier`` is true, endpoint energies at or above it raise
        BarrierError; with ``require_barrier=False`` the violation is only
        recorded as barrier_verified=False.

    Raises
    ------
    PathCollapseError
        If the path maximum migrates into an endpoint, or the search
        converges without clearing the endpoint energies: both indicate the
        separating-barrier hypothesis fails for this problem.
    IterationBudgetError
        If the iteration budget is exhausted; carries the best node.
    """
    if n_nodes < 4:
        raise ValueError("n_nodes must be >= 4")
    v0 = np.array(x0.values)
    v1 = np.array(x1.values)
    J0 = _energy(problem, v0)
    J1 = _energy(problem, v1)
    endpoint_max = max(J0, J1)
    verified = barrier is not None and endpoint_max < barrier
    if barrier is not None and not verified and require_barrier:
        raise BarrierError(
            f"endpoint energies {J0:.6g}, {J1:.6g} do not lie below the barrier {barrier:.6g}"
        )
    gtol = problem.tolerances.grad_tol

    t = np.linspace(0.0, 1.0, n_nodes)[:, None]
    nodes = (1.0 - t) * v0[None, :] + t * v1[None, :]
    node_energy = np.array([_energy(problem, nodes[i]) for i in range(n_nodes)])
    path_length = float(
        np.sum(np.sqrt(((nodes[1:] - nodes[:-1]) ** 2).sum(axis=1)))
    )
    step_cap = path_length / n_nodes

    def finish(vals, value, gsup, it, history):
        margin = 1e-12 * (1.0 + abs(value))
        if not value > endpoint_max + margin:
            raise PathCollapseError(
                "search converged at or below the endpoint energy level"
            )
        return MountainPassReport(
            critical_point=GridFunction(vals),
            critical_value=value,
            path_energy_history=tuple(history),
            endpoint_energies=(J0, J1),
            grad_norm_at_result=gsup,
            iterations=it,
            barrier_verified=verified,
        )

    history = []
    alpha = 1.0
    switch_tol = None
    z = nodes[int(np.argmax(node_energy))].copy()

    for it in range(1, max_iter + 1):
        i = int(np.argmax(node_energy))
        z, Jz, j, at_endpoint = _continuous_peak(problem, nodes, node_energy, i)
        if at_endpoint:
            raise PathCollapseError(
                "path maximum reached an endpoint; barrier hypothesis likely violated"
            )
        history.append(Jz)
        g = _grad_interior(problem, z)
        gsup = float(np.max(np.abs(g)))
        if gsup <= gtol:
            return finish(z, Jz, gsup, it, history)

        if switch_tol is None:
            switch_tol = max(1e-3 * gsup, 10.0 * gtol)
        due = it >= _ENDGAME_WARMUP and it % _ENDGAME_EVERY == 0
        if gsup <= switch_tol or due:
            xs, rn, ok = _saddle_newton(problem, z, gtol)
            if ok:
                Js = _energy(problem, xs)
                slack = 1e-9 * (1.0 + abs(Jz))
                if Js > endpoint_max + 1e-12 * (1.0 + abs(Js)) and Js <= Jz + slack:
                    history.append(Js)
                    return finish(xs, Js, rn, it, history)
            if gsup <= switch_tol:
                switch_tol *= 0.1

        u = ymetric_solve(problem.T, g)
        gu = float(np.dot(g, u))
        unorm = float(np.sqrt(np.dot(u, u)))
        a = min(alpha, step_cap / unorm) if unorm > 0.0 else alpha
        accepted = False
        while a >= _MIN_STEP:
            trial = z.copy()
            trial[1:-1] -= a * u
            Jt = _energy(problem, trial)
            if Jt <= Jz - _ARMIJO * a * gu:
                accepted = True
                break
            a *= 0.5
        if not accepted:
            raise IterationBudgetError(
                "descent from the path maximum stalled", best=GridFunction(z)
            )
        alpha = a * 2.0
        nodes[j] = trial
        node_energy[j] = Jt

        if it % resample_every == 0:
            left = _resample_polyline(nodes[: j + 1], j + 1)
            right = _resample_polyline(nodes[j:], n_nodes - j)
            nodes = np.vstack([left, right[1:]])
            node_energy = np.array([_energy(problem, nodes[i]) for i in range(n_nodes)])
            path_length = float(
                np.sum(np.sqrt(((nodes[1:] - nodes[:-1]) ** 2).sum(axis=1)))
            )
            step_cap = path_length / n_nodes

    raise IterationBudgetError(
        f"mountain pass did not converge in {max_iter} iterations",
        best=GridFunction(z),
    )
