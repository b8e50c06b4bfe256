from pathlib import Path
from typing import List, Union

from loguru import logger

from src.common.args import process_args
from src.common.common import ensure_dir_exists
from src.common.constants import RESULTS_DIRECTORY_PATH
from src.csr_build.csr_builder import AdjacencyBuilder
from src.exec_backend.backend import Backend
from src.mesh_config.mesh_configuration import AdjacencyConfig
from src.mesh_io.csr_writer import write_csr
from src.mesh_io.mesh_collector import NamedMesh
from src.pair_expand.pair_list import AdjacencyMode
from src.pipeline_object.pipeline_object import PipelineObject


class AdjacencyExporter(PipelineObject):
    """
    Build stage: computes every configured adjacency mode for each mesh and writes MESHCSR1 files.
    """

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        super().__init__(config)
        self.backend = Backend.from_name(self.config.backend, self.config.workers)
        self.builder = AdjacencyBuilder(self.backend)
        self._set_output_directory()

    def _set_output_directory(self) -> None:
        output_directory = self.config.get("outputDirectory") or RESULTS_DIRECTORY_PATH / self.config.runName
        self.output_directory = ensure_dir_exists(output_directory)

    def export(self, named_meshes: List[NamedMesh]) -> List[Path]:
        written = []
        for named_mesh in named_meshes:
            for mode in AdjacencyMode.from_names(self.config.modes):
                adjacency = self.builder.build(named_mesh.mesh, mode)
                target = self.output_directory / f"{named_mesh.name}_{mode.short_name}.csr"
                written.append(write_csr(adjacency, self.make_filepath_with_backoff(target), self.config.binary))

        return written

    def make_filepath_with_backoff(self, target_file_path: Path, backoff_level: int = 1) -> Path:
        """
        Keep earlier outputs when overwrite is off by appending _1, _2, ... to the file stem.

        :param target_file_path: preferred path
        :param backoff_level: suffix to try next
        :return: path that is free to write
        """
        if self.config.overwrite or not target_file_path.exists():
            return target_file_path

        stem = target_file_path.stem if backoff_level == 1 else target_file_path.stem.rsplit("_", 1)[0]
        candidate = target_file_path.with_name(f"{stem}_{backoff_level}{target_file_path.suffix}")
        logger.debug(f"{target_file_path.name} exists, trying {candidate.name}")

        return self.make_filepath_with_backoff(candidate, backoff_level + 1)
