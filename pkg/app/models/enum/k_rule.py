from enum import Enum


class KRule(str, Enum):
    FIXED = "fixed"
    SCHWERT = "schwert"
