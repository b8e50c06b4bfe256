import json

import pytest

from src.common.args import load_adjacency_config
from src.common.constants import EXAMPLE_CONFIGS_DIRECTORY_PATH
from src.mesh_config.mesh_configuration import AdjacencyConfig, ConfigSettingGroup
from src.mesh_core.generators import parse_grid_spec
from src.pipeline_object.pipeline_object import PipelineObject


def test_defaults_fill_missing_keys():
    config = AdjacencyConfig({"runName": "tiny", "grids": ["2x2"]})
    assert config.runName == "tiny"
    assert config.modes == ["nodes", "elements"]
    assert config.backend == "parallel"
    assert config.bench.repetitions == 5
    assert config.get("outputDirectory") is None


def test_nested_bench_group_is_merged():
    config = AdjacencyConfig({"bench": {"format": "json"}})
    assert isinstance(config.bench, ConfigSettingGroup)
    assert config.bench.format == "json"
    assert config.bench.workers == [0]


def test_defaults_are_not_shared_between_configs():
    first = AdjacencyConfig({})
    first.modes.append("both")
    first.bench.repetitions = 9
    second = AdjacencyConfig({})
    assert second.modes == ["nodes", "elements"]
    assert second.bench.repetitions == 5


def test_loads_from_json_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"runName": "from_file", "workers": 3}))
    config = AdjacencyConfig(path)
    assert config.runName == "from_file" and config.workers == 3
    assert config["workers"] == 3 and "workers" in config


def test_example_configs_load():
    for path in EXAMPLE_CONFIGS_DIRECTORY_PATH.glob("*.json"):
        config = AdjacencyConfig(path)
        assert set(config.stages) <= {"build", "verify", "bench"}
        assert config.bench.repetitions >= 3


def test_published_model_scales_match_model_sizes():
    # (vertices, triangles) of the six scanned models the grids stand in for
    model_sizes = [(172_000, 346_000), (237_000, 474_000), (327_000, 655_000), (437_000, 871_000),
                   (543_000, 1_088_000), (882_000, 1_765_000)]
    config = AdjacencyConfig(EXAMPLE_CONFIGS_DIRECTORY_PATH / "published_model_scales.json")
    assert set(config.modes) == {"nodes", "elements"}
    assert config.stages == ["bench"]

    assert len(config.grids) == len(model_sizes)
    for grid, (vertices, triangles) in zip(config.grids, model_sizes):
        rows, cols = parse_grid_spec(grid)
        assert (rows + 1) * (cols + 1) == pytest.approx(vertices, rel=0.01)
        assert 2 * rows * cols == pytest.approx(triangles, rel=0.01)


def test_to_dict_round_trips():
    config = AdjacencyConfig({"grids": ["3x3"]})
    assert AdjacencyConfig(config.to_dict()).to_dict() == config.to_dict()


def test_missing_setting_is_an_attribute_error():
    with pytest.raises(AttributeError):
        AdjacencyConfig({}).notASetting


def test_bad_config_source():
    with pytest.raises(ValueError):
        AdjacencyConfig(42)


def test_process_args_normalises_config():
    config = AdjacencyConfig({"runName": "shared"})
    assert load_adjacency_config(config) is config
    assert PipelineObject({"runName": "from_dict"}).config.runName == "from_dict"
    assert PipelineObject(config=config).config is config
