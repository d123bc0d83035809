import logging
from typing import List, Tuple

import numpy as np
from scipy import linalg

from app.exceptions.regression.regression_exceptions import (
    InsufficientObservationsError,
    InsufficientRegressorsError,
    RankDeficientError,
    ZeroStandardError
)
from app.models.regression.design_matrix_model import DesignMatrix
from app.models.regression.ols_fit_model import OlsFit
from config import RANK_TOL
from singleton import SingletonMeta


# Get logger
logger = logging.getLogger(__name__)


class RegressionService(metaclass=SingletonMeta):
    """
    Least squares by QR decomposition with classical inference. Every
    regression in the toolkit goes through ols_fit.
    """
    def __init__(self, rank_tol: float = RANK_TOL):
        self.rank_tol = rank_tol

    def _scale(self, values: np.ndarray) -> float:
        norms = np.linalg.norm(values, axis=0)
        return float(norms.max()) if norms.size else 0.0

    def ols_fit(self, y: np.ndarray, X: DesignMatrix) -> OlsFit:
        """
        Fits y on the columns of X. The design must already have full
        column rank; prune_collinear is the caller's job.
        """
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.size != X.n:
            raise ValueError(f"Regressand has {y.size} rows but the design has {X.n}")
        if X.m < 1:
            raise InsufficientRegressorsError(detail="Cannot fit a regression without regressors")
        if X.n <= X.m:
            raise InsufficientObservationsError(
                detail=f"{X.n} observations cannot support {X.m} regressors"
            )

        q, r = linalg.qr(X.values, mode='economic')
        diagonal = np.abs(np.diag(r))
        threshold = self.rank_tol * self._scale(X.values)
        if threshold == 0.0 or np.any(diagonal <= threshold):
            dependent = [X.column_labels[i] for i in np.flatnonzero(diagonal <= threshold)]
            raise RankDeficientError(
                detail=f"Design is collinear at tolerance {self.rank_tol:g}; dependent columns: {dependent}"
            )

        coefficients = linalg.solve_triangular(r, q.T @ y)
        fitted = X.values @ coefficients
        residuals = y - fitted
        rss = float(residuals @ residuals)
        dof = X.n - X.m
        sigma2 = rss / dof

        # (X'X)^-1 = R^-1 R^-T
        r_inv = linalg.solve_triangular(r, np.eye(X.m))
        xtx_inv = r_inv @ r_inv.T
        cov = sigma2 * xtx_inv
        std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))

        return OlsFit(
            coefficients=coefficients,
            residuals=residuals,
            fitted=fitted,
            rss=rss,
            sigma2=sigma2,
            std_errors=std_errors,
            cov=cov,
            n=X.n,
            m=X.m,
            column_labels=X.column_labels
        )

    def prune_collinear(self, X: DesignMatrix, rank_tol: float = None) -> Tuple[DesignMatrix, List[int]]:
        """
        Greedy left-to-right column selection: a column is kept when its
        component orthogonal to the columns already kept is larger than
        rank_tol times the largest column norm.
        """
        rank_tol = self.rank_tol if rank_tol is None else rank_tol
        threshold = rank_tol * self._scale(X.values)
        if threshold == 0.0:
            logger.warning("All columns are zero; returning an empty design")
            return DesignMatrix.empty(X.n), []

        kept: List[int] = []
        basis = np.zeros((X.n, 0))
        for j in range(X.m):
            column = X.values[:, j]
            remainder = column - basis @ (basis.T @ column)
            # Second pass restores orthogonality lost to rounding
            remainder = remainder - basis @ (basis.T @ remainder)
            norm = np.linalg.norm(remainder)
            if norm > threshold:
                kept.append(j)
                basis = np.column_stack([basis, remainder / norm])

        if len(kept) < X.m:
            dropped = [X.column_labels[j] for j in range(X.m) if j not in kept]
            logger.debug(f"Pruned collinear columns {dropped}")
        return X.select(kept), kept

    def wald_single(self, fit: OlsFit, index: int, null_value: float) -> Tuple[float, float]:
        """t-ratio and F statistic for H0: coefficient[index] = null_value."""
        if not 0 <= index < fit.m:
            raise IndexError(f"Coefficient index {index} outside 0..{fit.m - 1}")
        se = float(fit.std_errors[index])
        if not se > 0.0:
            raise ZeroStandardError(
                detail=f"Standard error of '{fit.column_labels[index]}' is zero"
            )
        t = (float(fit.coefficients[index]) - null_value) / se
        return t, t * t


regression_service = RegressionService()
