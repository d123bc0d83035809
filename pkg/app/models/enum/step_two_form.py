from enum import Enum


class StepTwoForm(str, Enum):
    """Regressand of the second-step autoregression: y_t or the step-one residual."""
    LEVELS = "levels"
    RESIDUAL = "residual"
