from app.exceptions.base.unit_root_exception import EstimationDegeneracy


class DegenerateResidualVarianceError(EstimationDegeneracy):
    """Raised when the series is fitted exactly and every t-ratio would be infinite"""
    detail = "Residual variance is zero; the series is fitted exactly"
