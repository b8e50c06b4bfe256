from typing import Union

from src.common.args import process_args
from src.mesh_config.mesh_configuration import AdjacencyConfig


class PipelineObject:
    config: AdjacencyConfig

    @process_args
    def __init__(self, config: Union[str, dict, AdjacencyConfig]):
        self.config = config
