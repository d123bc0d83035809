from enum import Enum


class DetKind(str, Enum):
    NONE = "none"
    POLYNOMIAL = "polynomial"
    CUSTOM = "custom"
    BREAK = "break"
