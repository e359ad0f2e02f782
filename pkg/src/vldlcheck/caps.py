"""Stage caps guarding every potentially explosive construction.

All defaults are 10**6 and can be overridden globally through the
VLDLCHECK_STAGE_CAP environment variable (the CLI reads it once at startup)
or per call via the `cap` keyword most builders accept.
"""

import os

DEFAULT_STAGE_CAP = 1_000_000

_override = None


def set_stage_cap(value):
    global _override
    _override = value


def stage_cap(explicit=None):
    if explicit is not None:
        return explicit
    if _override is not None:
        return _override
    raw = os.environ.get("VLDLCHECK_STAGE_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_STAGE_CAP
