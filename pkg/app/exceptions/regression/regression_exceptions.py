from app.exceptions.base.unit_root_exception import EstimationDegeneracy


class RankDeficientError(EstimationDegeneracy):
    """Raised when a design matrix is collinear at the rank tolerance"""
    detail = "Design matrix is rank deficient; prune collinear columns first"


class InsufficientObservationsError(EstimationDegeneracy):
    """Raised when there are not more rows than regressors"""
    detail = "Not enough observations for the requested regression"


class InsufficientRegressorsError(EstimationDegeneracy):
    """Raised when a regression is requested with no usable columns"""
    detail = "Design matrix has no usable columns"


class ZeroStandardError(EstimationDegeneracy):
    """Raised when a Wald ratio would divide by a zero standard error"""
    detail = "Standard error of the tested coefficient is zero"


class DegenerateDofError(EstimationDegeneracy):
    """Raised when the residual degrees of freedom are not positive"""
    detail = "Effective sample must exceed the number of regressors"
