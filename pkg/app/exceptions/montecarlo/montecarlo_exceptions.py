from fastapi import status

from app.exceptions.base.unit_root_exception import UnitRootException


class ExperimentConfigError(UnitRootException):
    """Raised when an experiment configuration fails validation"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    detail = "Invalid experiment configuration"


class MissingCriticalValueError(UnitRootException):
    """Raised when a critical value table lacks a required entry"""
    status_code = status.HTTP_404_NOT_FOUND
    detail = "Critical value table does not cover the requested statistic"


class ExcessiveDropRateError(UnitRootException):
    """Raised when too many replications were degenerate for the table to be trusted"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    detail = "Too many degenerate replications"
