"""Ordered worker-pool map used by the oracle and the Monte Carlo sweeps."""
import logging # Import logging to report the pool size
import os # Import os for the thread-count variable and CPU count
from multiprocessing.pool import ThreadPool # Import ThreadPool; numpy releases the GIL in linear algebra

from application.dof.errors import ConfigurationError # Import the input error type

logger = logging.getLogger(__name__)

THREADS_ENV = "DOF_ATLAS_THREADS"


def worker_count(requested=None):
    """Number of workers: ``requested``, else DOF_ATLAS_THREADS, else the CPU count."""
    raw = requested if requested is not None else os.getenv(THREADS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if count < 1:
        raise ConfigurationError(f"worker count must be at least 1, got {count}")
    return count


def ordered_map(fn, items, workers=None):
    """``[fn(item) for item in items]``, evaluated on a thread pool.

    Results come back in input order whatever the pool size, so reductions
    over them are identical for every worker count.
    """
    items = list(items)
    count = min(worker_count(workers), max(len(items), 1))
    if count <= 1:
        return [fn(item) for item in items]
    logger.debug("mapping %d tasks over %d threads", len(items), count)
    with ThreadPool(count) as pool:
        return pool.map(fn, items)
