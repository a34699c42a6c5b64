"""Problem data, the action functional, its gradient, and the equation residual.

The discrete Dirichlet problem on {0,...,T+1} is

    D( |Dy(k-1)|^(p(k-1)-2) Dy(k-1) ) + f(k, y(k)) = 0,   k = 1..T,
    y(0) = y(T+1) = 0,

with D the forward difference and p(k) >= 2 a variable exponent.  Solutions
are critical points of the action

    J(y) = sum_{k=1}^{T+1} |Dy(k-1)|^(p(k-1)) / p(k-1)
         - sum_{k=1}^{T}   Fhat(k, y(k)),

where Fhat(k, y) = int_0^y f(k, max(s, 0)) ds.  Freezing the integrand on the
negative half line makes J continuously differentiable with directional
derivative

    <J'(y), v> = sum |Dy|^(p-2) Dy Dv - sum f(k, y+(k)) v(k),

so critical points solve the auxiliary equation with f evaluated at the
positive part y+ = max(y, 0); for y >= 0 the nonlinear term is the plain
primitive F(k, y) = int_0^y f(k, s) ds.  A maximum-principle argument then
shows such critical points are strictly positive, hence solve the original
problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import ExponentMap, GridFunction
from .quadrature import integrate_from_zero

__all__ = [
    "GrowthEnvelope",
    "Nonlinearity",
    "ToleranceSet",
    "ProblemSpec",
    "primitive_F",
    "energy_J",
    "grad_J",
    "residual",
    "directional_derivative",
]


@dataclass(frozen=True)
class ToleranceSet:
    """Solver tolerances.

    grad_tol: stationarity requirement, sup norm of the gradient (or of the
        constrained first-order residual at an active constraint).
    residual_tol: sup norm of the equation residual for a polished solution.
    quad_tol: convergence requirement of the primitive's quadrature.
    positivity_margin: strict-positivity threshold for certificates.
    """

    grad_tol: float = 1e-9
    residual_tol: float = 1e-10
    quad_tol: float = 1e-12
    positivity_margin: float = 1e-12


class GrowthEnvelope:
    """Two-sided power growth envelope for the nonlinearity (condition C1).

    Encodes m > p_plus and positive sequences phi1, phi2, psi1, psi2 on
    k = 1..T such that for all y >= 0

        psi1(k) + phi1(k) y^(m-1)  <=  f(k, y)  <=  phi2(k) y^(m-1) + psi2(k).

    Arrays are indexed 0..T-1 for k = 1..T.
    """

    __slots__ = ("m", "phi1", "phi2", "psi1", "psi2")

    def __init__(self, m, phi1, phi2, psi1, psi2):
        self.m = float(m)
        arrays = []
        for name, seq in (("phi1", phi1), ("phi2", phi2), ("psi1", psi1), ("psi2", psi2)):
            a = np.array(seq, dtype=float)
            if a.ndim != 1 or a.size < 2:
                raise ValueError(f"{name} must be a 1-d sequence of length T >= 2")
            if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
                raise ValueError(f"{name} must be strictly positive and finite")
            a.flags.writeable = False
            arrays.append(a)
        if len({a.size for a in arrays}) != 1:
            raise ValueError("envelope sequences must share one length T")
        if not np.isfinite(self.m) or self.m <= 2.0:
            raise ValueError("growth exponent m must be finite and exceed 2")
        self.phi1, self.phi2, self.psi1, self.psi2 = arrays

    @property
    def T(self) -> int:
        return self.phi1.size

    def scaled(self, s: float) -> "GrowthEnvelope":
        """Envelope of s*f: every sequence multiplied by s > 0."""
        if not s > 0.0:
            raise ValueError("scale must be positive")
        return GrowthEnvelope(
            self.m, s * self.phi1, s * self.phi2, s * self.psi1, s * self.psi2
        )


class Nonlinearity:
    """The forcing term f(k, y) together with optional analytic extras.

    evaluator(k, y) must be vectorized over numpy arrays (broadcasting), with
    k integer grid indices in [1, T] and arbitrary real y; it must be positive
    for y >= 0 and continuous in y.  ``primitive``, when given, is the closed
    form of F(k, y) = int_0^y f(k, s) ds and is preferred over quadrature.
    """

    __slots__ = ("evaluator", "envelope", "primitive", "name")

    def __init__(
        self,
        evaluator: Callable,
        envelope: Optional[GrowthEnvelope] = None,
        primitive: Optional[Callable] = None,
        name: str = "custom",
    ):
        self.evaluator = evaluator
        self.envelope = envelope
        self.primitive = primitive
        self.name = name


class ProblemSpec:
    """A fully specified problem instance: size, exponents, forcing, tolerances."""

    def __init__(
        self,
        T: int,
        exponents: ExponentMap,
        nonlinearity: Nonlinearity,
        tolerances: ToleranceSet | None = None,
    ):
        T = int(T)
        if T < 2:
            raise ValueError("T must be >= 2")
        if exponents.T != T:
            raise ValueError(
                f"exponent map is for T={exponents.T}, problem has T={T}"
            )
        env = nonlinearity.envelope
        if env is not None:
            if env.T != T:
                raise ValueError(f"envelope is for T={env.T}, problem has T={T}")
            if not env.m > exponents.p_plus:
                raise ValueError(
                    f"growth exponent m={env.m} must exceed p_plus={exponents.p_plus}"
                )
        self.T = T
        self.exponents = exponents
        self.nonlinearity = nonlinearity
        self.tolerances = tolerances if tolerances is not None else ToleranceSet()
        self._ks = np.arange(1, T + 1)
        self._f0 = None
        self._prim_memo = {}

    @property
    def ball_radius(self) -> float:
        """Radius 1/sqrt(T+1) of the constraint ball in the difference norm."""
        return 1.0 / np.sqrt(self.T + 1.0)

    @property
    def interior_indices(self) -> np.ndarray:
        """Grid indices 1..T as an integer array."""
        return self._ks

    @property
    def f_at_zero(self) -> np.ndarray:
        """f(k, 0) for k = 1..T (cached)."""
        if self._f0 is None:
            f0 = np.asarray(
                self.nonlinearity.evaluator(self._ks, np.zeros(self.T)), dtype=float
            )
            f0 = f0 + np.zeros(self.T)  # broadcast scalar evaluators
            f0.flags.writeable = False
            self._f0 = f0
        return self._f0

    def __repr__(self):
        return (
            f"ProblemSpec(T={self.T}, p in [{self.exponents.p_minus}, "
            f"{self.exponents.p_plus}], f={self.nonlinearity.name!r})"
        )


# ---------------------------------------------------------------------------
# internal vector kernels (full-length value arrays, no GridFunction wrapping)
# ---------------------------------------------------------------------------

def _flux(problem: ProblemSpec, vals: np.ndarray) -> np.ndarray:
    """a(j) = |d_j|^(p(j)-2) d_j for the T+1 forward differences d of vals."""
    d = np.diff(vals)
    pk = problem.exponents.values[:-1]
    return np.abs(d) ** (pk - 2.0) * d


def _residual_interior(problem: ProblemSpec, vals: np.ndarray) -> np.ndarray:
    a = _flux(problem, vals)
    pos = np.maximum(vals[1:-1], 0.0)
    fv = np.asarray(problem.nonlinearity.evaluator(problem._ks, pos), dtype=float)
    return np.diff(a) + fv


def _grad_interior(problem: ProblemSpec, vals: np.ndarray) -> np.ndarray:
    return -_residual_interior(problem, vals)


def _primitive_batch(problem: ProblemSpec, upper: np.ndarray, max_panels=4096) -> np.ndarray:
    """F(k, upper[k-1]) for k = 1..T, vectorized; honors a closed form."""
    nl = problem.nonlinearity
    if nl.primitive is not None:
        return np.asarray(nl.primitive(problem._ks, upper), dtype=float) + np.zeros(
            problem.T
        )
    f = nl.evaluator

    def integrand(rows, t):
        return f(problem._ks[rows][:, None], t)

    return integrate_from_zero(
        integrand, upper, problem.tolerances.quad_tol, max_panels=max_panels
    )


def _energy(problem: ProblemSpec, vals: np.ndarray) -> float:
    d = np.diff(vals)
    pk = problem.exponents.values[:-1]
    kinetic = float(np.sum(np.abs(d) ** pk / pk))
    inner = vals[1:-1]
    pos = np.maximum(inner, 0.0)
    neg = np.maximum(-inner, 0.0)
    F = _primitive_batch(problem, pos)
    return kinetic - float(np.sum(F)) + float(np.sum(problem.f_at_zero * neg))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def primitive_F(problem: ProblemSpec, k: int, y: float, max_panels=4096) -> float:
    """The primitive F(k, y) = int_0^y f(k, s) ds.

    Uses the closed form when the nonlinearity provides one, otherwise
    adaptive Gauss-Legendre quadrature to the problem's quadrature tolerance.
    F(k, 0) = 0 exactly.  Computed values are memoized per (k, y).
    """
    if not 1 <= k <= problem.T:
        raise ValueError(f"k={k} outside the interior range [1, {problem.T}]")
    y = float(y)
    if y == 0.0:
        return 0.0
    nl = problem.nonlinearity
    if nl.primitive is not None:
        return float(nl.primitive(np.asarray([k]), np.asarray([y]))[0])
    key = (int(k), y)
    hit = problem._prim_memo.get(key)
    if hit is not None:
        return hit

    def integrand(rows, t):
        return nl.evaluator(np.full_like(t, k, dtype=float), t)

    val = float(
        integrate_from_zero(
            integrand,
            np.asarray([y]),
            problem.tolerances.quad_tol,
            max_panels=max_panels,
        )[0]
    )
    if len(problem._prim_memo) > 1 << 20:
        problem._prim_memo.clear()
    problem._prim_memo[key] = val
    return val


def energy_J(problem: ProblemSpec, y: GridFunction) -> float:
    """The action J(y): anisotropic kinetic term minus the frozen primitive.

    J(y) = sum_k |Dy(k-1)|^p(k-1)/p(k-1) - sum_k Fhat(k, y(k)) with
    Fhat(k, y) = F(k, max(y,0)) + f(k,0) min(y, 0); on functions with
    nonnegative interior values the nonlinear term is exactly
    sum_k F(k, y+(k)).
    """
    return _energy(problem, y.values)


def grad_J(problem: ProblemSpec, y: GridFunction) -> GridFunction:
    """Gradient of J as the pointwise (duality) representative.

    Returns g with g(k) = -D(|Dy(k-1)|^(p(k-1)-2) Dy(k-1))(k) - f(k, y+(k))
    on the interior and zero boundary entries, so that <J'(y), v> equals
    sum_{k=1}^T g(k) v(k) for every v vanishing at the boundary.
    """
    g = np.zeros(problem.T + 2)
    g[1:-1] = _grad_interior(problem, y.values)
    return GridFunction(g)


def residual(problem: ProblemSpec, y: GridFunction) -> np.ndarray:
    """Pointwise residual of the equation, r(k) for k = 1..T (length T).

    r(k) = D(|Dy(k-1)|^(p(k-1)-2) Dy(k-1))(k) + f(k, y+(k)); identically the
    negated interior gradient.
    """
    return _residual_interior(problem, y.values)


def directional_derivative(problem: ProblemSpec, y: GridFunction, v: GridFunction) -> float:
    """<J'(y), v> in its difference form.

    Computes sum_{k=1}^{T+1} |Dy|^(p-2) Dy Dv - sum_{k=1}^{T} f(k, y+(k)) v(k)
    directly; by summation by parts this equals sum_k g(k) v(k) with g the
    gradient representative, a cross-check exercised by the test suite.
    """
    a = _flux(problem, y.values)
    dv = np.diff(v.values)
    pos = np.maximum(y.values[1:-1], 0.0)
    fv = np.asarray(problem.nonlinearity.evaluator(problem._ks, pos), dtype=float)
    return float(np.sum(a * dv) - np.sum(fv * v.values[1:-1]))
