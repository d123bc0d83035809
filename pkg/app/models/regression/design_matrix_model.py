from typing import List, Sequence

import numpy as np
from pydantic import field_validator, model_validator

from app.models.core_model import CoreModel, frozen_array


class DesignMatrix(CoreModel):
    """
    Regressor matrix (n rows x m columns) with one label per column.
    A zero-column design is allowed; it stands for "no regressors".
    """
    values: np.ndarray
    column_labels: List[str]

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v) -> np.ndarray:
        array = np.array(v, dtype=float)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        return frozen_array(array, ndim=2)

    @model_validator(mode='after')
    def validate_labels(self) -> 'DesignMatrix':
        if self.values.shape[0] < 1:
            raise ValueError("Design matrix needs at least one row")
        if self.values.shape[1] != len(self.column_labels):
            raise ValueError(
                f"{self.values.shape[1]} columns but {len(self.column_labels)} labels"
            )
        if len(set(self.column_labels)) != len(self.column_labels):
            raise ValueError(f"Column labels must be unique: {self.column_labels}")
        return self

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @classmethod
    def empty(cls, n: int) -> 'DesignMatrix':
        return cls(values=np.zeros((n, 0)), column_labels=[])

    @classmethod
    def from_columns(cls, columns: Sequence[np.ndarray], labels: Sequence[str], n: int) -> 'DesignMatrix':
        if not columns:
            return cls.empty(n)
        return cls(values=np.column_stack(columns), column_labels=list(labels))

    def index_of(self, label: str) -> int:
        try:
            return self.column_labels.index(label)
        except ValueError:
            raise KeyError(f"No column labelled '{label}'")

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.index_of(label)]

    def select(self, indices: Sequence[int]) -> 'DesignMatrix':
        indices = list(indices)
        if not indices:
            return DesignMatrix.empty(self.n)
        return DesignMatrix(
            values=self.values[:, indices],
            column_labels=[self.column_labels[i] for i in indices]
        )

    def drop(self, labels: Sequence[str]) -> 'DesignMatrix':
        dropped = set(labels)
        keep = [i for i, label in enumerate(self.column_labels) if label not in dropped]
        return self.select(keep)

    def row_slice(self, start: int, stop: int = None) -> 'DesignMatrix':
        return DesignMatrix(values=self.values[start:stop], column_labels=self.column_labels)

    def hstack(self, *others: 'DesignMatrix') -> 'DesignMatrix':
        blocks = [self, *others]
        if any(block.n != self.n for block in blocks):
            raise ValueError("Cannot stack designs with different row counts")
        labels = [label for block in blocks for label in block.column_labels]
        return DesignMatrix(
            values=np.hstack([block.values for block in blocks]),
            column_labels=labels
        )
