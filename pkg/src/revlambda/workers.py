import os


def worker_count() -> int:
    """Worker threads for parallel sweeps, capped by ``REVLAMBDA_THREADS``."""
    env = os.environ.get("REVLAMBDA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))
