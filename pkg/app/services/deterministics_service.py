import logging

import numpy as np

from app.exceptions.deterministics.deterministics_exceptions import (
    InvalidBreakDateError,
    InvalidDetSpecError
)
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.det_kind import DetKind
from app.models.regression.design_matrix_model import DesignMatrix
from app.services.regression_service import regression_service
from config import RANK_TOL
from singleton import SingletonMeta


# Get logger
logger = logging.getLogger(__name__)


def lag_label(label: str, lag: int) -> str:
    return label if lag == 0 else f"{label}_L{lag}"


class DeterministicsService(metaclass=SingletonMeta):
    """
    Builds x_t on a 1-based time grid, and the lagged set {x_t, ..., x_{t-p}}
    the one-step autoregression needs. Deterministic functions are evaluated
    analytically at t <= 0 (t^0 = 1, dummies 0).
    """

    def evaluate(self, spec: DetSpec, t: np.ndarray) -> np.ndarray:
        """Columns of x evaluated at the integer time points t (no validation)."""
        t = np.asarray(t, dtype=float)
        if spec.kind == DetKind.NONE:
            return np.zeros((t.size, 0))
        if spec.kind == DetKind.CUSTOM:
            return self._evaluate_custom(spec, t)

        columns = [t ** power for power in range(spec.order + 1)]
        if spec.kind == DetKind.BREAK:
            columns.append((t > spec.break_date).astype(float))
            if spec.with_trend_break:
                columns.append(np.maximum(0.0, t - spec.break_date))
        return np.column_stack(columns)

    def _evaluate_custom(self, spec: DetSpec, t: np.ndarray) -> np.ndarray:
        if spec.custom_matrix is not None:
            rows = t.astype(int) - 1
            inside = (rows >= 0) & (rows < spec.custom_matrix.shape[0])
            values = np.zeros((t.size, spec.custom_matrix.shape[1]))
            values[inside] = spec.custom_matrix[rows[inside]]
            return values
        columns = []
        for label, function in zip(spec.custom_labels, spec.custom_functions):
            column = np.asarray(function(t), dtype=float).reshape(-1)
            if column.size != t.size:
                raise InvalidDetSpecError(
                    detail=f"Custom column '{label}' returned {column.size} values for {t.size} time points"
                )
            columns.append(column)
        return np.column_stack(columns)

    def _validate_range(self, spec: DetSpec, t_first: int, t_last: int):
        if t_first > t_last:
            raise InvalidDetSpecError(detail=f"Empty time range {t_first}..{t_last}")
        if spec.kind == DetKind.BREAK and not t_first <= spec.break_date < t_last:
            raise InvalidBreakDateError(
                detail=f"Break date {spec.break_date} outside the sample {t_first}..{t_last}"
            )
        if spec.kind == DetKind.CUSTOM and spec.custom_matrix is not None:
            available = spec.custom_matrix.shape[0]
            if t_last > available:
                raise InvalidDetSpecError(
                    detail=f"Custom regressors cover t = 1..{available} but t = {t_last} was requested"
                )

    def build(self, spec: DetSpec, t_first: int, t_last: int) -> DesignMatrix:
        """x_t for t = t_first..t_last, one row per period."""
        self._validate_range(spec, t_first, t_last)
        t = np.arange(t_first, t_last + 1)
        if spec.is_empty:
            return DesignMatrix.empty(t.size)
        return DesignMatrix(values=self.evaluate(spec, t), column_labels=spec.labels)

    def lagged_expansion(
        self,
        spec: DetSpec,
        p: int,
        t_first: int,
        t_last: int,
        rank_tol: float = RANK_TOL
    ) -> DesignMatrix:
        """
        {x_t, x_{t-1}, ..., x_{t-p}} over t = t_first..t_last with collinear
        columns removed, earliest lag preferred. For a full polynomial trend
        this spans {1, t, ..., t^r} again; break dummies keep their lags.
        """
        if p < 0:
            raise ValueError("Lag order p must be nonnegative")
        self._validate_range(spec, t_first, t_last)
        t = np.arange(t_first, t_last + 1)
        if spec.is_empty:
            return DesignMatrix.empty(t.size)

        blocks, labels = [], []
        for lag in range(p + 1):
            blocks.append(self.evaluate(spec, t - lag))
            labels.extend(lag_label(label, lag) for label in spec.labels)
        expanded = DesignMatrix(values=np.hstack(blocks), column_labels=labels)
        pruned, kept = regression_service.prune_collinear(expanded, rank_tol)
        if pruned.m == 0:
            raise InvalidDetSpecError(detail=f"Deterministic spec '{spec}' has no non-zero columns on {t_first}..{t_last}")
        logger.debug(f"Lagged expansion of '{spec}' with p={p}: kept {pruned.column_labels}")
        return pruned


deterministics_service = DeterministicsService()
