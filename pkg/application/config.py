import os  # Provides access to environment variables and OS functions
from dotenv import load_dotenv  # Load settings from a local .env file when one exists

# Read .env before any config class is evaluated
load_dotenv()


# Base configuration: engine defaults for grids, sweeps and logging
class Config:
    SECRET_KEY = os.getenv("SECRET_KEY", "default_secret")
    LOG_LEVEL = os.getenv("DOF_ATLAS_LOG_LEVEL", "INFO")

    # Grid oracle: step 1/400 certifies a 0.02 DoF tolerance
    GRID_STEP = float(os.getenv("DOF_ATLAS_GRID_STEP", 1.0 / 400.0))
    ORACLE_TOLERANCE = float(os.getenv("DOF_ATLAS_ORACLE_TOLERANCE", 0.02))
    LAMBDA_SAMPLES = int(os.getenv("DOF_ATLAS_LAMBDA_SAMPLES", 11))

    # Monte Carlo sweep defaults
    SNR_DB = os.getenv("DOF_ATLAS_SNR_DB", "30:60:5")
    MC_TRIALS = int(os.getenv("DOF_ATLAS_TRIALS", 200))
    MC_SEED = int(os.getenv("DOF_ATLAS_SEED", 7))

    # Worker cap for oracle and Monte Carlo thread pools (None means CPU count)
    THREADS = os.getenv("DOF_ATLAS_THREADS") or None

    # Region and verdict responses only depend on the request, so they cache well
    CACHE_TYPE = "SimpleCache"
    CACHE_DEFAULT_TIMEOUT = 300
    RATELIMIT_ENABLED = True


# Development-specific configuration: enable debug mode and verbose logs
class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.getenv("DOF_ATLAS_LOG_LEVEL", "DEBUG")


# Testing-specific configuration: no rate limits, no cache, small sweeps
class TestingConfig(Config):
    TESTING = True
    RATELIMIT_ENABLED = False
    CACHE_TYPE = "NullCache"
    GRID_STEP = 1.0 / 200.0
    MC_TRIALS = 100
    LOG_LEVEL = "WARNING"


# Production-specific configuration: disable debug mode for live deployment
class ProductionConfig(Config):
    DEBUG = False
