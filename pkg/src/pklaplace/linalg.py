"""Small linear-algebra helpers shared by the solvers."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

__all__ = ["ymetric_solve", "neg_laplacian_apply"]


@lru_cache(maxsize=64)
def _ymetric_factor(T: int):
    # Cholesky factor of the Dirichlet second-difference matrix tridiag(-1, 2, -1)
    ab = np.zeros((2, T))
    ab[0, 1:] = -1.0
    ab[1, :] = 2.0
    return cholesky_banded(ab, lower=False)


def ymetric_solve(T: int, rhs: np.ndarray) -> np.ndarray:
    """Solve (-D^2) u = rhs on the interior with zero Dirichlet boundary.

    Maps the pointwise (duality) representative of a functional to its
    representative in the difference inner product sum Du Dv.
    """
    return cho_solve_banded((_ymetric_factor(T), False), rhs)


def neg_laplacian_apply(vals: np.ndarray) -> np.ndarray:
    """(-D^2 y)(k) = 2 y(k) - y(k+1) - y(k-1) on the interior of a full vector."""
    return 2.0 * vals[1:-1] - vals[2:] - vals[:-2]
