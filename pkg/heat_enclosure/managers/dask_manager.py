from __future__ import annotations

import logging
import os
from typing import Any, Callable, Optional

import dask
import numpy as np

from heat_enclosure.dask_computations import chunk_slices

logger = logging.getLogger(__name__)

THREADS_VARIABLE = "HEAT_ENCLOSURE_THREADS"


def threads_from_environment() -> int:
    value = os.environ.get(THREADS_VARIABLE, "1")
    try:
        return max(1, int(value))
    except ValueError:
        logger.warning("Ignoring %s=%r (not an integer)", THREADS_VARIABLE, value)
        return 1


class DaskManager:
    """Evaluates independent chunks of points, in parallel when more than one worker is set.

    Chunks have a fixed size, so results and any reduction over them are
    identical for every worker count."""

    def __init__(self, chunk_size: int = 256, num_workers: Optional[int] = None):
        if chunk_size < 1:
            raise ValueError(f"chunk_size must be positive, got {chunk_size}")
        self.chunk_size = chunk_size
        self.num_workers = num_workers or threads_from_environment()

    def is_active(self) -> bool:
        """Checks if chunks are dispatched to dask threads"""
        return self.num_workers > 1

    def compute(self, tasks: list[Callable[[], Any]]) -> list[Any]:
        """Runs argument-free callables and returns their results in order"""
        if not self.is_active() or len(tasks) < 2:
            return [task() for task in tasks]
        delayed = [dask.delayed(task)() for task in tasks]
        return list(dask.compute(*delayed, scheduler="threads", num_workers=self.num_workers))

    def map_chunks(self, func: Callable, *arrays: np.ndarray) -> list[Any]:
        """func applied to consecutive chunks of the arrays (split along the first axis)"""
        length = len(arrays[0])
        slices = chunk_slices(length, self.chunk_size)
        logger.debug("Evaluating %d point(s) in %d chunk(s)", length, len(slices))
        tasks = [lambda s=s: func(*(array[s] for array in arrays)) for s in slices]
        return self.compute(tasks)
