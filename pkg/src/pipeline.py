from typing import List, Union

from loguru import logger

from src.bench.bench_record import BenchRecord
from src.bench.benchmark_stage import BenchmarkStage
from src.common.args import process_args
from src.csr_build.adjacency_exporter import AdjacencyExporter
from src.mesh_config.mesh_configuration import AdjacencyConfig
from src.mesh_io.mesh_collector import MeshCollector
from src.oracle.adjacency_verifier import AdjacencyVerifier
from src.pipeline_object.pipeline_object import PipelineObject


class AdjacencyPipeline(PipelineObject):

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        super().__init__(config)
        self.collector = MeshCollector(self.config)
        self.exporter = AdjacencyExporter(self.config)
        self.verifier = AdjacencyVerifier(self.config)
        self.bench = BenchmarkStage(self.config)

    async def run(self) -> List[BenchRecord]:
        named_meshes = await self.collector.collect_meshes()
        stages = self.config.stages

        if "build" in stages:
            self.exporter.export(named_meshes)
        else:
            logger.info("Skipping build stage")

        if "verify" in stages:
            self.verifier.verify(named_meshes)
        else:
            logger.info("Skipping verify stage")

        records = []
        if "bench" in stages:
            records = self.bench.benchmark(named_meshes)
            self.bench.write_report(records)
        else:
            logger.info("Skipping bench stage")

        return records
