import logging
import os

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Setup logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


APP_NAME = "urkit"
APP_VERSION = os.getenv("APP_VERSION", "1.0.0")

# Numerical tolerances
RANK_TOL = float(os.getenv("RANK_TOL", 1e-10))
DEGENERATE_TOL = float(os.getenv("DEGENERATE_TOL", 1e-20))

# Monte Carlo engine
URKIT_THREADS = int(os.getenv("URKIT_THREADS", 1))
MC_BLOCK_SIZE = int(os.getenv("MC_BLOCK_SIZE", 250))
MAX_DROP_RATE = float(os.getenv("MAX_DROP_RATE", 0.001))
MIN_PUBLISHED_REPS = int(os.getenv("MIN_PUBLISHED_REPS", 1000))
DEFAULT_BASE_SEED = int(os.getenv("DEFAULT_BASE_SEED", 20240101))
DEFAULT_QUANTILES = [0.01, 0.025, 0.05, 0.1, 0.5, 0.9, 0.95, 0.975, 0.99]

# Simulation
STATIONARY_BURN_IN = int(os.getenv("STATIONARY_BURN_IN", 1000))
MIN_STUDENT_T_DF = 5.0

# Series files
MIN_SERIES_LENGTH = 10

# HTTP surface
HOST = os.getenv("HOST", "0.0.0.0")
PORT = int(os.getenv("PORT", 8081))
