from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import pandas as pd
from pydantic import Field, field_validator, model_validator

from app.exceptions.deterministics.deterministics_exceptions import InvalidDetSpecError
from app.models.core_model import CoreModel
from app.models.enum.det_kind import DetKind


POLYNOMIAL_ALIASES = {"c": 0, "ct": 1, "ctt": 2}


class DetSpec(CoreModel):
    """
    Declarative description of the deterministic component x_t.

    Polynomial(r) always means the full set {1, t, ..., t^r}. Break adds
    DU_t = 1{t > T_B} and optionally DT_t = max(0, t - T_B) on top of a
    polynomial base. Custom columns are either functions of the integer time
    index or a column matrix whose row i holds t = i + 1 (zero outside it).
    """
    kind: DetKind = DetKind.NONE
    order: int = Field(0, ge=0)
    break_date: Optional[int] = None
    with_trend_break: bool = False
    custom_labels: List[str] = Field(default_factory=list)
    custom_functions: List[Callable] = Field(default_factory=list)
    custom_matrix: Optional[np.ndarray] = None
    source: Optional[str] = None

    @field_validator('custom_matrix', mode='before')
    @classmethod
    def validate_matrix(cls, v):
        if v is None:
            return v
        array = np.array(v, dtype=float)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        array.setflags(write=False)
        return array

    @model_validator(mode='after')
    def validate_kind(self) -> 'DetSpec':
        if self.kind == DetKind.BREAK and (self.break_date is None or self.break_date < 1):
            raise ValueError("Break specification needs a break date T_B >= 1")
        if self.kind == DetKind.CUSTOM:
            if not self.custom_labels:
                raise ValueError("Custom specification needs at least one column")
            if self.custom_matrix is not None:
                if self.custom_matrix.shape[1] != len(self.custom_labels):
                    raise ValueError("Custom matrix width does not match its labels")
            elif len(self.custom_functions) != len(self.custom_labels):
                raise ValueError("Custom specification needs one function per label")
        return self

    # -- constructors -----------------------------------------------------

    @classmethod
    def none(cls) -> 'DetSpec':
        return cls(kind=DetKind.NONE)

    @classmethod
    def polynomial(cls, order: int) -> 'DetSpec':
        return cls(kind=DetKind.POLYNOMIAL, order=order)

    @classmethod
    def with_break(cls, order: int, break_date: int, with_trend_break: bool = False) -> 'DetSpec':
        return cls(
            kind=DetKind.BREAK,
            order=order,
            break_date=break_date,
            with_trend_break=with_trend_break
        )

    @classmethod
    def custom(cls, labels: List[str], functions: List[Callable]) -> 'DetSpec':
        return cls(kind=DetKind.CUSTOM, custom_labels=labels, custom_functions=functions)

    @classmethod
    def from_matrix(cls, labels: List[str], matrix, source: str = None) -> 'DetSpec':
        return cls(kind=DetKind.CUSTOM, custom_labels=labels, custom_matrix=matrix, source=source)

    @classmethod
    def parse(cls, text: str) -> 'DetSpec':
        """
        Parse the canonical string syntax: none, c, ct, ctt, poly:r,
        break:TB[:trend][:order=r], custom:file.csv
        """
        if isinstance(text, DetSpec):
            return text
        raw = str(text).strip()
        token = raw.lower()
        try:
            if token in ("", "none", "n"):
                return cls.none()
            if token in POLYNOMIAL_ALIASES:
                return cls.polynomial(POLYNOMIAL_ALIASES[token])
            if token.startswith("poly:"):
                return cls.polynomial(int(token.split(":", 1)[1]))
            if token.startswith("break:"):
                parts = token.split(":")[1:]
                break_date = int(parts[0])
                with_trend = "trend" in parts[1:]
                order = 1 if with_trend else 0
                for part in parts[1:]:
                    if part.startswith("order="):
                        order = int(part.split("=", 1)[1])
                    elif part != "trend":
                        raise ValueError(f"unknown break option '{part}'")
                return cls.with_break(order, break_date, with_trend)
            if token.startswith("custom:"):
                return cls.from_csv(raw.split(":", 1)[1])
        except InvalidDetSpecError:
            raise
        except (ValueError, IndexError) as e:
            raise InvalidDetSpecError(detail=f"Could not parse deterministic spec '{raw}': {str(e)}")
        raise InvalidDetSpecError(detail=f"Unknown deterministic spec '{raw}'")

    @classmethod
    def from_csv(cls, path: str) -> 'DetSpec':
        file_path = Path(path)
        if not file_path.exists():
            raise InvalidDetSpecError(detail=f"Custom regressor file not found: {path}")
        frame = pd.read_csv(file_path, comment='#')
        numeric = frame.apply(pd.to_numeric, errors='coerce')
        if numeric.isna().any().any():
            row, col = np.argwhere(numeric.isna().to_numpy())[0]
            raise InvalidDetSpecError(
                detail=f"Custom regressor file {path}: non-numeric cell at row {row + 1}, "
                       f"column '{frame.columns[col]}'"
            )
        return cls.from_matrix(
            labels=[str(c) for c in frame.columns],
            matrix=numeric.to_numpy(dtype=float),
            source=str(path)
        )

    # -- descriptors ------------------------------------------------------

    @property
    def base_labels(self) -> List[str]:
        if self.kind in (DetKind.POLYNOMIAL, DetKind.BREAK):
            return ["const" if i == 0 else ("t" if i == 1 else f"t^{i}") for i in range(self.order + 1)]
        return []

    @property
    def labels(self) -> List[str]:
        if self.kind == DetKind.NONE:
            return []
        if self.kind == DetKind.POLYNOMIAL:
            return self.base_labels
        if self.kind == DetKind.BREAK:
            return self.base_labels + ["DU"] + (["DT"] if self.with_trend_break else [])
        return list(self.custom_labels)

    @property
    def n_columns(self) -> int:
        return len(self.labels)

    @property
    def is_empty(self) -> bool:
        return self.kind == DetKind.NONE

    def to_string(self) -> str:
        if self.kind == DetKind.NONE:
            return "none"
        if self.kind == DetKind.POLYNOMIAL:
            return {0: "c", 1: "ct"}.get(self.order, f"poly:{self.order}")
        if self.kind == DetKind.BREAK:
            text = f"break:{self.break_date}"
            if self.with_trend_break:
                text += ":trend"
            if self.order != (1 if self.with_trend_break else 0):
                text += f":order={self.order}"
            return text
        return f"custom:{self.source or ','.join(self.custom_labels)}"

    def __str__(self) -> str:
        return self.to_string()
