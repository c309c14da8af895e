"""Small shared helpers."""
import os


def worker_count() -> int:
    """Worker cap for internally parallel operations.

    Honors the EDGECLUST_THREADS environment variable; defaults to the CPU
    count. Always at least 1.
    """
    cap = os.cpu_count() or 1
    env = os.environ.get("EDGECLUST_THREADS")
    if env is not None:
        try:
            cap = min(cap, int(env))
        except ValueError:
            pass
    return max(1, cap)
