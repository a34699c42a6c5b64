"""Batched adaptive quadrature over intervals [0, u_i].

A family of integrals int_0^{u_i} f_i(t) dt is evaluated with composite
16-point Gauss-Legendre panels, doubling the panel count per integral until
successive refinements agree to the requested tolerance.  All integrals of a
batch share refinement levels so each level costs a single vectorized call
to the integrand; integrals that have converged drop out of later levels.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

__all__ = ["integrate_from_zero"]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)
_DEFAULT_MAX_PANELS = 4096


def _panel_values(fun, rows, upper, panels):
    """Composite Gauss-Legendre value of each row integral with ``panels`` panels."""
    edges = np.linspace(0.0, 1.0, panels + 1)
    width = edges[1] - edges[0]
    unit = (edges[:-1, None] + width * 0.5 * (_NODES[None, :] + 1.0)).ravel()
    t = upper[:, None] * unit[None, :]
    vals = np.asarray(fun(rows, t), dtype=float)
    w = np.tile(_WEIGHTS * (width * 0.5), panels)
    return (vals @ w) * upper


def integrate_from_zero(fun, upper, tol, max_panels=_DEFAULT_MAX_PANELS):
    """Integrate ``fun`` row-wise from 0 to ``upper[i]``.

    Parameters
    ----------
    fun : callable
        Vectorized integrand ``fun(rows, t)``: ``rows`` is a 1-d array of
        original row indices and ``t`` a (len(rows), m) array of abscissae;
        returns integrand values of the same shape as ``t``.
    upper : array_like, shape (n,)
        Upper limits; negative limits integrate with reversed orientation,
        zero limits return exactly 0.0.
    tol : float
        Convergence requirement: successive panel doublings must agree to
        ``tol * max(1, |F|)`` per integral.
    max_panels : int
        Refinement budget per integral.

    Raises
    ------
    QuadratureError
        If some integral has not converged within the panel budget; the error
        carries the worst achieved (relative-floored) tolerance.
    """
    upper = np.asarray(upper, dtype=float)
    out = np.zeros_like(upper)
    idx = np.flatnonzero(upper != 0.0)
    if idx.size == 0:
        return out

    u = upper[idx]
    prev = _panel_values(fun, idx, u, 1)
    panels = 2
    while True:
        cur = _panel_values(fun, idx, u, panels)
        err = np.abs(cur - prev)
        done = err <= tol * np.maximum(1.0, np.abs(cur))
        out[idx[done]] = cur[done]
        if np.all(done):
            return out
        if panels >= max_panels:
            achieved = err[~done] / np.maximum(1.0, np.abs(cur[~done]))
            raise QuadratureError(
                f"quadrature did not converge within {max_panels} panels",
                float(np.max(achieved)),
            )
        keep = ~done
        idx, u, prev = idx[keep], u[keep], cur[keep]
        panels *= 2
