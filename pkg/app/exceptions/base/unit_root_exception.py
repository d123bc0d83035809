from fastapi import status


class UnitRootException(Exception):
    """Base exception for every error raised by the toolkit"""
    status_code: int = status.HTTP_500_INTERNAL_SERVER_ERROR
    exit_code: int = 1
    detail: str = "An error occurred while processing the unit root request"

    def __init__(self, detail: str = None, status_code: int = None):
        if detail:
            self.detail = detail
        if status_code:
            self.status_code = status_code
        super().__init__(self.detail)


class EstimationDegeneracy(UnitRootException):
    """
    Raised when the numbers themselves make a statistic undefined.
    The Monte Carlo engine drops and counts replications failing this way.
    """
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    exit_code = 2
    detail = "Degenerate estimation problem"
