from fastapi import APIRouter

from app.api.v1 import unitroot

API_V1_PREFIX = "/v1"

api_router = APIRouter()

# Versioned unit-root endpoints: /api/v1/unitroot/...
api_router.include_router(unitroot.router, prefix=API_V1_PREFIX, tags=["Unit root"])
