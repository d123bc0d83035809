import logging

from fastapi import APIRouter, status, HTTPException
from pydantic import ValidationError

from app.exceptions import UnitRootException
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.response_status import ResponseStatus
from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec
from app.models.simulation.simulation_request_model import SimulationRequestModel
from app.models.simulation.simulation_response_model import SimulationResponse
from app.models.unitroot.unit_root_request_model import UnitRootTestRequestModel
from app.models.unitroot.unit_root_response_model import UnitRootSummary, UnitRootTestResponse
from app.services.csv_service import format_validation_error
from app.services.simulation_service import simulation_service
from app.services.unitroot_service import unitroot_service
from util import Utils


# Get logger
logger = logging.getLogger(__name__)

# Initialize the router
router = APIRouter(prefix="/unitroot")


@router.post(
    "/tests",
    responses={
        400: {"description": "Invalid series"},
        422: {"description": "Invalid spec or degenerate statistics"},
        500: {"description": "Internal server error"}
    },
    response_model=UnitRootTestResponse
)
async def run_unit_root_test(request: UnitRootTestRequestModel):
    """
    Run one Dickey-Fuller pipeline on a posted series.

    Args:
        request: The series, method, deterministic spec and lag order

    Returns:
        UnitRootTestResponse: Estimates and both test statistics

    Raises:
        HTTPException: If the spec is invalid, the statistics are degenerate, or an error occurs
    """
    try:
        spec = DetSpec.parse(request.det)
        k = Utils.schwert_lags(len(request.values)) if request.k == "auto" else request.k

        result = unitroot_service.run(request.method, request.values, spec, k, request.form)
        return UnitRootTestResponse(
            result=UnitRootSummary.from_result(result),
            status=ResponseStatus.SUCCESS
        )

    except UnitRootException as e:
        raise HTTPException(
            status_code=e.status_code,
            detail=e.detail
        )
    except ValueError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=str(e)
        )
    except Exception as e:
        logger.error(f"Unit root test failed: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail={"detail": f"Failed to run unit root test: {str(e)}"}
        )


@router.post(
    "/simulations",
    status_code=status.HTTP_201_CREATED,
    responses={
        422: {"description": "Invalid DGP"},
        500: {"description": "Internal server error"}
    },
    response_model=SimulationResponse
)
async def simulate_series(request: SimulationRequestModel):
    """
    Simulate one path from a DGP. The same (dgp, T, seed) always returns the same values.
    """
    try:
        dgp = DgpConfig.model_validate(request.dgp)
        values = simulation_service.simulate(dgp, request.n_obs, SeedSpec(base_seed=request.seed))
        return SimulationResponse(
            dgp=dgp.model_dump(mode="json"),
            seed=request.seed,
            values=values.tolist(),
            status=ResponseStatus.SUCCESS
        )

    except UnitRootException as e:
        raise HTTPException(
            status_code=e.status_code,
            detail=e.detail
        )
    except ValidationError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=format_validation_error(e)
        )
    except Exception as e:
        logger.error(f"Simulation failed: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail={"detail": f"Failed to simulate series: {str(e)}"}
        )
