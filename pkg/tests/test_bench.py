from dataclasses import replace
from types import SimpleNamespace

import pytest

from src.bench import benchmark
from src.bench.bench_record import (ARMADILLO_ELEMENT_REFERENCE, ARMADILLO_NODE_REFERENCE, ARMADILLO_REFERENCE,
                                    BenchMode, combine_records)
from src.bench.benchmark import median_ms, run_benchmark
from src.bench.benchmark_stage import BenchmarkStage
from src.common.exceptions import BenchmarkConfigurationError, ConfigurationError, VerificationFailed
from src.csr_build.csr_adjacency import CsrAdjacency
from src.mesh_core.generators import generate_grid
from src.mesh_io.mesh_collector import NamedMesh
from src.pair_expand.pair_list import AdjacencyMode


def test_repetitions_below_three_are_rejected(triangle):
    with pytest.raises(BenchmarkConfigurationError):
        run_benchmark(triangle, BenchMode.NodeNeighbors, 2, repetitions=2)


def test_single_mode_record():
    mesh = generate_grid(20, 20)
    record = run_benchmark(mesh, AdjacencyMode.ElementNeighbors, 2, repetitions=3, mesh_name="grid_20x20")
    assert record.mode is BenchMode.ElementNeighbors
    assert (record.vertex_count, record.element_count) == (441, 800)
    assert record.worker_count == 2 and record.repetitions == 3
    assert record.serial_ms > 0 and record.parallel_ms > 0
    assert record.speedup == pytest.approx(record.serial_ms / record.parallel_ms)
    assert record.peak_bytes > 0


def test_both_mode_sums_stage_times():
    record = run_benchmark(generate_grid(10, 10), BenchMode.Both, 2, repetitions=3)
    assert record.mode is BenchMode.Both
    assert record.speedup == pytest.approx(record.serial_ms / record.parallel_ms)


def test_benchmark_aborts_before_timing_on_divergence(triangle_pair, monkeypatch):
    timed = []

    def wrong_adjacency(mesh, mode, backend=None):
        return CsrAdjacency.from_offsets(mode, [0] * (mesh.vertex_count + 1), [])

    monkeypatch.setattr(benchmark, "build_adjacency", wrong_adjacency)
    monkeypatch.setattr(benchmark, "median_ms", lambda func, repetitions: timed.append(func) or 1.0)
    with pytest.raises(VerificationFailed):
        run_benchmark(triangle_pair, BenchMode.NodeNeighbors, 2, repetitions=3)
    assert not timed


def test_median_is_not_the_minimum(monkeypatch):
    clock = iter([0.0, 0.001, 1.0, 1.010, 2.0, 2.005])
    monkeypatch.setattr(benchmark, "time", SimpleNamespace(perf_counter=lambda: next(clock)))
    assert median_ms(lambda: None, 3) == pytest.approx(5.0)


def test_armadillo_reference():
    assert ARMADILLO_NODE_REFERENCE.speedup == pytest.approx(50.54)
    assert ARMADILLO_ELEMENT_REFERENCE.speedup == pytest.approx(78.37, abs=0.01)
    assert ARMADILLO_REFERENCE.mode is BenchMode.Both
    assert ARMADILLO_REFERENCE.serial_ms == pytest.approx(4259.0)
    assert ARMADILLO_REFERENCE.parallel_ms == pytest.approx(72.1)
    assert round(ARMADILLO_REFERENCE.speedup, 1) == 59.1


def test_combine_records_takes_larger_peak():
    node = replace(ARMADILLO_NODE_REFERENCE, peak_bytes=10)
    element = replace(ARMADILLO_ELEMENT_REFERENCE, peak_bytes=30)
    assert combine_records(node, element).peak_bytes == 30


@pytest.mark.parametrize("name, mode", [("nodes", BenchMode.NodeNeighbors), ("element", BenchMode.ElementNeighbors),
                                        ("BOTH", BenchMode.Both)])
def test_bench_mode_names(name, mode):
    assert BenchMode.from_name(name) is mode


def test_unknown_bench_mode():
    with pytest.raises(ConfigurationError):
        BenchMode.from_name("faces")


def test_stage_adds_overall_row(tmp_path):
    stage = BenchmarkStage({"modes": ["nodes", "elements"], "bench": {"repetitions": 3, "workers": [1, 2]}})
    records = stage.benchmark([NamedMesh("grid_8x8", generate_grid(8, 8))])
    assert [(record.mode, record.worker_count) for record in records] == [
        (BenchMode.NodeNeighbors, 1), (BenchMode.ElementNeighbors, 1), (BenchMode.Both, 1),
        (BenchMode.NodeNeighbors, 2), (BenchMode.ElementNeighbors, 2), (BenchMode.Both, 2),
    ]
    path = stage.write_report(records, tmp_path / "report.csv")
    assert path.read_text().splitlines()[0].startswith("mesh,vertices,elements,mode")
