import time

from typing import Callable, Union

import numpy as np

from loguru import logger

from src.bench.bench_record import BenchMode, BenchRecord, combine_records
from src.common.constants import DEFAULT_REPETITIONS, MIN_REPETITIONS
from src.common.exceptions import BenchmarkConfigurationError, VerificationFailed
from src.csr_build.csr_builder import build_adjacency
from src.csr_build.memory_estimate import estimate_memory
from src.exec_backend.backend import Backend
from src.mesh_core.mesh import Mesh, validate_mesh
from src.oracle.oracle import build_oracle
from src.pair_expand.pair_list import AdjacencyMode


def median_ms(func: Callable[[], object], repetitions: int) -> float:
    """
    Median wall time of repeated calls, in milliseconds.
    """
    timings = []
    for _ in range(repetitions):
        start = time.perf_counter()
        func()
        timings.append((time.perf_counter() - start) * 1000.0)

    return float(np.median(timings))


def run_benchmark(mesh: Mesh, mode: Union[BenchMode, AdjacencyMode], worker_count: int = 0,
                  repetitions: int = DEFAULT_REPETITIONS, mesh_name: str = "mesh") -> BenchRecord:
    """
    Time the serial oracle against the parallel build. One untimed run of every contender comes first and doubles
    as verification: nothing is timed unless the serial backend, the parallel backend and the oracle agree.

    :param mesh: mesh to benchmark (parsing is never timed)
    :param mode: node, element or Both (both stages, times summed)
    :param worker_count: parallel workers, 0 = one per CPU
    :param repetitions: timed runs per contender, at least 3
    :param mesh_name: label for the report
    :return: BenchRecord with median times
    """
    if repetitions < MIN_REPETITIONS:
        raise BenchmarkConfigurationError(f"Benchmarks need at least {MIN_REPETITIONS} repetitions, got {repetitions}")
    mesh = validate_mesh(mesh)
    if isinstance(mode, AdjacencyMode):
        mode = BenchMode.from_adjacency_mode(mode)

    if mode is BenchMode.Both:
        node_record = run_benchmark(mesh, BenchMode.NodeNeighbors, worker_count, repetitions, mesh_name)
        element_record = run_benchmark(mesh, BenchMode.ElementNeighbors, worker_count, repetitions, mesh_name)
        return combine_records(node_record, element_record)

    adjacency_mode = mode.adjacency_mode
    backend = Backend.parallel(worker_count)

    # warm-up and verification
    expected = build_oracle(mesh, adjacency_mode).to_csr()
    for candidate_backend in (Backend.serial(), backend):
        divergence = expected.first_divergence(build_adjacency(mesh, adjacency_mode, candidate_backend))
        if divergence is not None:
            raise VerificationFailed(f"{mesh_name} {adjacency_mode.name} on {candidate_backend}: {divergence}")

    serial_ms = median_ms(lambda: build_oracle(mesh, adjacency_mode), repetitions)
    parallel_ms = median_ms(lambda: build_adjacency(mesh, adjacency_mode, backend), repetitions)
    peak_bytes = estimate_memory(mesh, adjacency_mode, backend).peak_bytes

    record = BenchRecord.from_times(mesh_name, mesh.vertex_count, mesh.element_count, mode, serial_ms, parallel_ms,
                                    backend.resolved_workers, repetitions, peak_bytes)
    logger.info(f"{mesh_name} {mode.value}: serial {serial_ms:.1f} ms, parallel {parallel_ms:.1f} ms "
                f"on {backend}, speedup {record.speedup:.1f}")

    return record
