"""Closed-form ridge regression on z-scored designs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

__all__ = ["RidgeModel", "ridge_fit"]


@dataclass(frozen=True)
class RidgeModel:
    alpha: float
    coefficients: np.ndarray
    intercept: float

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coefficients + self.intercept


def ridge_fit(X, y, alpha: float) -> RidgeModel:
    """Solve (X'X + alpha I) beta = X'(y - ybar) by Cholesky; intercept = ybar.

    Expects z-scored columns (the intercept absorbs the target mean exactly
    when columns have zero mean).  alpha > 0 keeps the system positive
    definite regardless of column collinearity.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if alpha <= 0:
        raise ValueError("ridge alpha must be > 0")
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size or X.shape[0] < 1:
        raise ValueError("ridge_fit needs X (n x p) and y (n,) with n >= 1")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("ridge_fit inputs must be finite")
    intercept = float(y.mean())
    A = X.T @ X + alpha * np.eye(X.shape[1])
    b = X.T @ (y - intercept)
    coef = cho_solve(cho_factor(A, lower=True), b)
    return RidgeModel(alpha=float(alpha), coefficients=coef, intercept=intercept)
