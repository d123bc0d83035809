from app.exceptions.base.unit_root_exception import (
    UnitRootException,
    EstimationDegeneracy
)
from app.exceptions.regression.regression_exceptions import (
    RankDeficientError,
    InsufficientObservationsError,
    InsufficientRegressorsError,
    ZeroStandardError,
    DegenerateDofError
)
from app.exceptions.deterministics.deterministics_exceptions import (
    InvalidDetSpecError,
    InvalidBreakDateError
)
from app.exceptions.simulation.simulation_exceptions import NonStationaryErrorPolynomial
from app.exceptions.unitroot.unitroot_exceptions import DegenerateResidualVarianceError
from app.exceptions.montecarlo.montecarlo_exceptions import (
    ExperimentConfigError,
    MissingCriticalValueError,
    ExcessiveDropRateError
)
from app.exceptions.data.series_file_exception import SeriesFileError

__all__ = [
    'UnitRootException',
    'EstimationDegeneracy',
    'RankDeficientError',
    'InsufficientObservationsError',
    'InsufficientRegressorsError',
    'ZeroStandardError',
    'DegenerateDofError',
    'InvalidDetSpecError',
    'InvalidBreakDateError',
    'NonStationaryErrorPolynomial',
    'DegenerateResidualVarianceError',
    'ExperimentConfigError',
    'MissingCriticalValueError',
    'ExcessiveDropRateError',
    'SeriesFileError'
]
