"""Runtime settings.

Defaults live here; the only environment variable consulted is
``LOCDOM_THREADS``. Explicit arguments and CLI flags always win.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

logger = logging.getLogger(__name__)

THREADS_ENV = "LOCDOM_THREADS"


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    node_budget: Optional[int] = None
    time_budget: Optional[float] = None
    enum_max_order: int = 12
    canonical_max_order: int = 16
    naive_max_order: int = 20

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build settings from the environment.

        An unparsable or non-positive ``LOCDOM_THREADS`` is ignored with a
        warning rather than failing the run.
        """
        env = os.environ if environ is None else environ
        settings = cls()
        raw = env.get(THREADS_ENV)
        if raw:
            try:
                threads = int(raw)
            except ValueError:
                logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV, raw)
            else:
                if threads >= 1:
                    settings = replace(settings, threads=threads)
                else:
                    logger.warning("Ignoring %s=%r: must be >= 1", THREADS_ENV, raw)
        return settings
