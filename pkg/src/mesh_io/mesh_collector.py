import asyncio

from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

from loguru import logger

from src.common.args import process_args
from src.mesh_config.mesh_configuration import AdjacencyConfig
from src.mesh_core.generators import generate_grid, parse_grid_spec
from src.mesh_core.mesh import ValidatedMesh
from src.mesh_io.mesh_cache import MeshCache
from src.mesh_io.mesh_loader import load_mesh
from src.pipeline_object.pipeline_object import PipelineObject


@dataclass(frozen=True)
class NamedMesh:
    name: str
    mesh: ValidatedMesh


class MeshCollector(PipelineObject):
    """
    Gathers every mesh a run needs: files from config.inputs and synthetic grids from config.grids.
    """

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        super().__init__(config)
        self.cache = MeshCache() if self.config.get("useMeshCache") else None

    async def collect_meshes(self) -> List[NamedMesh]:
        """
        Load and generate all configured meshes concurrently, keeping config order.
        """
        tasks = [asyncio.to_thread(self.load_input, path) for path in self.config.inputs]
        tasks += [asyncio.to_thread(self.make_grid, grid_spec) for grid_spec in self.config.grids]
        meshes = await asyncio.gather(*tasks)
        logger.info(f"Collected {len(meshes)} meshes for {self.config.runName}")

        return list(meshes)

    def load_input(self, path: Union[str, Path]) -> NamedMesh:
        return NamedMesh(Path(path).stem, load_mesh(path, self.cache))

    @staticmethod
    def make_grid(grid_spec: str) -> NamedMesh:
        rows, cols = parse_grid_spec(grid_spec)
        logger.info(f"Generating {rows}x{cols} grid")

        return NamedMesh(f"grid_{rows}x{cols}", generate_grid(rows, cols))
