"""scikit-learn style wrappers around the approximation toolbox.

Rows of ``X`` are samples of periodic functions on the uniform grid
``2πj/N`` unless stated otherwise.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import _solvers
from ._validation import is_power_of_two
from .periodic_field import PeriodicFunction, PeriodicGrid, TrigPolynomial, lp_norms
from .psi_space import PsiFunction
from .trig_approx import KERNEL_KINDS, kernel_build

__all__ = ["KernelSmoother", "TrigApproximator", "LpProfile"]


def _check_rows(X, n_features: int | None = None) -> np.ndarray:
    X = check_array(X, dtype=float, ensure_2d=True)
    N = X.shape[1]
    if N < 8 or not is_power_of_two(N):
        raise ValueError(f"rows must hold a power-of-two number (>= 8) of grid samples, got {N}")
    if n_features is not None and N != n_features:
        raise ValueError(f"X has {N} features, but the estimator was fitted with {n_features}")
    return X


class KernelSmoother(TransformerMixin, BaseEstimator):
    """Convolve each row with a summation kernel.

    Parameters
    ----------
    kind : str
        Any kernel kind accepted by :func:`glslab.trig_approx.kernel_build`.
    n : int
        Kernel index.

    Examples
    --------
    >>> x = 2 * np.pi * np.arange(64) / 64
    >>> X = np.vstack([np.cos(x), np.cos(5 * x)])
    >>> Y = KernelSmoother("dirichlet", 2).fit_transform(X)
    >>> bool(np.allclose(Y[0], X[0]) and np.allclose(Y[1], 0))
    True
    """

    def __init__(self, kind: str = "jackson", n: int = 8):
        self.kind = kind
        self.n = n

    def fit(self, X, y=None):
        X = _check_rows(X)
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        kernel = kernel_build(self.kind, self.n)
        N = X.shape[1]
        if 2 * kernel.degree + 1 > N:
            raise ValueError(f"kernel degree {kernel.degree} does not fit on {N} samples")
        self.kernel_ = kernel
        self.multiplier_ = kernel.multiplier(PeriodicGrid(N))
        self.n_features_in_ = N
        return self

    def transform(self, X):
        check_is_fitted(self, "multiplier_")
        X = _check_rows(X, self.n_features_in_)
        return np.real(np.fft.ifft(np.fft.fft(X, axis=1) * self.multiplier_[None, :], axis=1))


class TrigApproximator(RegressorMixin, BaseEstimator):
    """Fit a real trigonometric polynomial of degree ``degree`` by ``L_p`` regression.

    ``X`` has a single column of angles; the loss is ``mean |y - T(x)|^p``
    (least squares for ``p = 2``, a smooth convex minimization otherwise).

    Attributes
    ----------
    coef_ : ndarray
        ``[a0, a_1..a_n, b_1..b_n]`` of ``a0 + Σ a_k cos kx + b_k sin kx``.
    polynomial_ : TrigPolynomial
    residual_norm_ : float
        ``(mean |y - T(x)|^p)^(1/p)`` at the fitted coefficients.
    """

    def __init__(self, degree: int = 4, p: float = 2.0):
        self.degree = degree
        self.p = p

    def _phi(self, X) -> np.ndarray:
        return _solvers.design_matrix(np.asarray(X, dtype=float)[:, 0], int(self.degree))

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        if X.shape[1] != 1:
            raise ValueError("X must have exactly one column of angles")
        if int(self.degree) < 0:
            raise ValueError("degree must be nonnegative")
        if not (self.p >= 1.0 and math.isfinite(self.p)):
            raise ValueError("p must be a finite number >= 1")
        phi = self._phi(X)
        if X.shape[0] < phi.shape[1]:
            raise ValueError(f"need at least {phi.shape[1]} samples for degree {self.degree}")
        theta = np.linalg.lstsq(phi, y, rcond=None)[0]
        if self.p != 2.0 and np.max(np.abs(y - phi @ theta)) > 1e-14 * max(1.0, np.max(np.abs(y))):
            res = minimize(
                _solvers._lp_objective,
                theta,
                args=(y, phi, float(self.p)),
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": 5000, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-15},
            )
            theta = res.x
        self.coef_ = theta
        self.polynomial_ = TrigPolynomial.from_parameters(theta)
        self.residual_norm_ = float(_solvers.stable_norms(y - phi @ theta, np.array([float(self.p)]))[0][0])
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 1:
            raise ValueError("X must have exactly one column of angles")
        return self._phi(X) @ self.coef_


class LpProfile(TransformerMixin, BaseEstimator):
    """Map each row to its ``L_p`` norms, or to ``|f|_p / ψ(p)`` when ``psi`` is given."""

    def __init__(self, ps=(1.0, 2.0, 4.0, 8.0, math.inf), psi: PsiFunction | None = None):
        self.ps = ps
        self.psi = psi

    def fit(self, X, y=None):
        X = _check_rows(X)
        ps = np.asarray(self.ps, dtype=float)
        if ps.ndim != 1 or ps.size == 0 or np.any(ps < 1):
            raise ValueError("ps must be a nonempty list of exponents >= 1")
        self.ps_ = ps
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "ps_")
        X = _check_rows(X, self.n_features_in_)
        grid = PeriodicGrid(X.shape[1])
        out = np.vstack([lp_norms(PeriodicFunction(grid, row), self.ps_) for row in X])
        if self.psi is not None:
            finite = np.isfinite(self.ps_)
            out[:, finite] *= np.exp(-self.psi.log(self.ps_[finite]))[None, :]
        return out
