from fastapi import status

from app.exceptions.base.unit_root_exception import UnitRootException


class NonStationaryErrorPolynomial(UnitRootException):
    """Raised when the AR polynomial of the error process has a root on or inside the unit circle"""
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    detail = "Error AR polynomial is not stationary"