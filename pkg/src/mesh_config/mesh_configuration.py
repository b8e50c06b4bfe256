import json

from pathlib import Path
from typing import Union


class ConfigSettingGroup:
    """
    Class to hold groups of settings
    """

    def __init__(self, config_dict: dict) -> None:
        # Convert JSON objects to ConfigSettingGroups
        for key, value in config_dict.items():
            if isinstance(value, dict):
                config_dict[key] = ConfigSettingGroup(value)
        self._config = config_dict

    def to_dict(self) -> dict:
        """
        return dict representation of the settings

        :return: config dict
        """

        return {key: value.to_dict() if isinstance(value, ConfigSettingGroup) else value for key, value in
                self._config.items()}

    def get(self, item: str, default=None):
        """
        Allows for retrieving items while falling back to a default value

        :param item: item to retrieve
        :param default: default to return when the key is missing
        :return: value
        """

        return self._config.get(item, default)

    def __getattr__(self, item: str):
        """
        allow dot notation access to settings

        :param item: item to retrieve
        :return: value
        """

        if item.startswith('_'):
            return object.__getattribute__(self, item)
        try:
            return object.__getattribute__(self, '_config')[item]
        except KeyError:
            raise AttributeError(f"No setting named '{item}'")

    def __setattr__(self, key: str, value) -> None:
        if key.startswith('_'):
            object.__setattr__(self, key, value)
        else:
            self._config[key] = value

    def __getitem__(self, item: str):
        return self._config[item]

    def __setitem__(self, key: str, value) -> None:
        self._config[key] = value

    def __contains__(self, item: str) -> bool:
        return item in self._config

    def __str__(self) -> str:
        return str(self.to_dict())

    def __dir__(self) -> list:
        return list(super().__dir__()) + list(self._config.keys())


class AdjacencyConfig(ConfigSettingGroup):
    """
    Run configuration for the adjacency pipeline. Loaded from a JSON file or built from a dict (the CLI does the
    latter). Missing keys fall back to the defaults below.
    """

    # Enables IDE autocompletion
    runName: str
    inputs: list
    grids: list
    modes: list
    backend: str
    workers: int
    stages: list
    bench: ConfigSettingGroup

    defaults = {
        "runName": "adjacency_run",
        "inputs": [],
        "grids": [],
        "modes": ["nodes", "elements"],
        "backend": "parallel",
        "workers": 0,
        "stages": ["build", "verify", "bench"],
        "outputDirectory": None,
        "binary": False,
        "useMeshCache": False,
        "overwrite": True,
        "bench": {"repetitions": 5, "workers": [0], "format": "csv"},
    }

    def __init__(self, adjacency_config: Union[str, Path, dict] = None) -> None:

        # Load config file from disk
        if isinstance(adjacency_config, (str, Path)):
            self._source = str(adjacency_config)
            with open(adjacency_config) as config_file:
                adjacency_config = json.load(config_file)
        elif isinstance(adjacency_config, dict):
            self._source = None
        else:
            raise ValueError("Adjacency config supplied must be a path to a config json file or a dict")

        merged = json.loads(json.dumps(self.defaults))
        for key, value in adjacency_config.items():
            if key == "bench" and isinstance(value, dict):
                merged["bench"].update(value)
            else:
                merged[key] = value

        super().__init__(merged)
