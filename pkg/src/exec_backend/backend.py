import os

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Tuple

from src.common.common import chunk_bounds
from src.common.exceptions import ConfigurationError


class BackendKind(Enum):
    Serial = "serial"
    Parallel = "parallel"


@dataclass(frozen=True)
class Backend:
    """
    Execution backend for the data-parallel primitives. Parallel work runs on a thread pool; the numpy kernels
    each worker calls release the GIL.
    """
    kind: BackendKind = BackendKind.Serial
    worker_count: int = 1

    def __post_init__(self):
        if self.worker_count < 0:
            raise ConfigurationError(f"Worker count must be non-negative, got {self.worker_count}")

    @classmethod
    def serial(cls) -> "Backend":
        return cls(BackendKind.Serial, 1)

    @classmethod
    def parallel(cls, workers: int = 0) -> "Backend":
        """
        :param workers: worker threads, 0 = one per available CPU
        """
        return cls(BackendKind.Parallel, workers)

    @classmethod
    def from_name(cls, name: str, workers: int = 0) -> "Backend":
        try:
            kind = BackendKind(name.lower())
        except ValueError:
            raise ConfigurationError(f"Unknown backend '{name}', expected serial or parallel")

        return cls.serial() if kind is BackendKind.Serial else cls.parallel(workers)

    @property
    def is_parallel(self) -> bool:
        return self.kind is BackendKind.Parallel

    @property
    def resolved_workers(self) -> int:
        if not self.is_parallel:
            return 1
        if self.worker_count:
            return self.worker_count

        return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)

    def chunks(self, length: int) -> List[Tuple[int, int]]:
        """
        Contiguous (start, stop) ranges over range(length), one per worker at most.
        """
        return chunk_bounds(length, self.resolved_workers)

    def map(self, func: Callable, items: Iterable) -> list:
        """
        Apply func to every item, on the thread pool when parallel. Results keep item order.
        """
        items = list(items)
        if not self.is_parallel or len(items) < 2:
            return [func(item) for item in items]

        with ThreadPoolExecutor(max_workers=min(self.resolved_workers, len(items))) as executor:
            return list(executor.map(func, items))

    def __str__(self) -> str:
        return f"{self.kind.value}[{self.resolved_workers}]" if self.is_parallel else self.kind.value
