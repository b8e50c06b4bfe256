from pathlib import Path
from typing import List, Optional, Union

from loguru import logger

from src.bench.bench_record import BenchMode, BenchRecord, combine_records
from src.bench.benchmark import run_benchmark
from src.bench.report import ReportFormat, emit_report, render_table
from src.common.args import process_args
from src.common.common import ensure_dir_exists, get_utc_time
from src.common.constants import REPORTS_DIRECTORY_PATH
from src.mesh_config.mesh_configuration import AdjacencyConfig
from src.mesh_io.mesh_collector import NamedMesh
from src.pipeline_object.pipeline_object import PipelineObject


class BenchmarkStage(PipelineObject):
    """
    Bench stage: one record per mesh, mode and worker count from config.bench, plus a Both row per mesh and worker
    count when node and element modes are both configured.
    """

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        super().__init__(config)
        self.report_format = ReportFormat.from_name(self.config.bench.format)

    def benchmark(self, named_meshes: List[NamedMesh]) -> List[BenchRecord]:
        modes = [BenchMode.from_name(mode_name) for mode_name in self.config.modes]
        records = []
        for named_mesh in named_meshes:
            for worker_count in self.config.bench.workers:
                by_mode = {}
                for mode in modes:
                    by_mode[mode] = run_benchmark(named_mesh.mesh, mode, worker_count, self.config.bench.repetitions,
                                                  named_mesh.name)
                    records.append(by_mode[mode])
                if BenchMode.NodeNeighbors in by_mode and BenchMode.ElementNeighbors in by_mode \
                        and BenchMode.Both not in by_mode:
                    records.append(combine_records(by_mode[BenchMode.NodeNeighbors],
                                                   by_mode[BenchMode.ElementNeighbors]))

        logger.info(f"Benchmark results for {self.config.runName}:\n{render_table(records)}")

        return records

    def write_report(self, records: List[BenchRecord], path: Optional[Union[str, Path]] = None) -> Path:
        """
        :param records: records to write
        :param path: target file, a timestamped file under artifacts/reports by default
        :return: path written
        """
        if path is None:
            report_directory = ensure_dir_exists(REPORTS_DIRECTORY_PATH / self.config.runName)
            path = report_directory / f"bench_{get_utc_time()}.{self.report_format.value}"
        path = Path(path)
        path.write_bytes(emit_report(records, self.report_format))
        logger.info(f"Wrote {len(records)} benchmark records to {path}")

        return path
