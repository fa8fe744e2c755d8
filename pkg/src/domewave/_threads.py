"""Worker-count policy: DOMEWAVE_THREADS caps parallelism (0 or unset = auto)."""

import os


def thread_count():
    raw = os.environ.get("DOMEWAVE_THREADS", "0")
    try:
        requested = int(raw)
    except ValueError:
        requested = 0
    if requested < 0:
        requested = 0
    if requested == 0:
        return os.cpu_count() or 1
    return requested
