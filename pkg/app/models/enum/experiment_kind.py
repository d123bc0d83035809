from enum import Enum


class ExperimentKind(str, Enum):
    CRITICAL_VALUES = "critical_values"
    SIZE_POWER = "size_power"
    VARIANCE = "variance"
    EFFICIENCY = "efficiency"
