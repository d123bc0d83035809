from enum import Enum


class Innovation(str, Enum):
    GAUSSIAN = "gaussian"
    STUDENT_T = "student_t"


class InitialCondition(str, Enum):
    FIXED = "fixed"
    STATIONARY = "stationary"
