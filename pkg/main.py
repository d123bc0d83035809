import logging

import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.api import api_router
from config import APP_NAME, APP_VERSION, HOST, PORT

logger = logging.getLogger(__name__)

app = FastAPI(
    title=APP_NAME,
    version=APP_VERSION,
    description="Dickey-Fuller unit root tests and DGP simulation over HTTP"
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="/api")


if __name__ == "__main__":
    logger.info(f"Starting {APP_NAME} {APP_VERSION} on {HOST}:{PORT}")
    uvicorn.run(app, host=HOST, port=PORT)
