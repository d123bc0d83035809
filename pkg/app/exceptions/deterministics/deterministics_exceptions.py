from fastapi import status

from app.exceptions.base.unit_root_exception import UnitRootException


class InvalidDetSpecError(UnitRootException):
    """Raised when a deterministic specification cannot be parsed or built"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    detail = "Invalid deterministic specification"


class InvalidBreakDateError(InvalidDetSpecError):
    """Raised when the break date does not fall inside the sample"""
    detail = "Break date must lie inside the sample range"
