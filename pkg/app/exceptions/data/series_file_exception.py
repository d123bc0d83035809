from fastapi import status

from app.exceptions.base.unit_root_exception import UnitRootException


class SeriesFileError(UnitRootException):
    """Raised when an input CSV cannot be read as a numeric series or table"""
    status_code = status.HTTP_400_BAD_REQUEST
    detail = "Could not read the series file"
