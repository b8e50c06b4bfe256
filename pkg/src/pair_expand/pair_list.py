from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List

import numpy as np

from src.common.constants import INDEX_DTYPE, MODE_NAMES
from src.common.exceptions import ConfigurationError, MeshInputError


class AdjacencyMode(Enum):
    NodeNeighbors = 0
    ElementNeighbors = 1

    @property
    def short_name(self) -> str:
        return "nodes" if self is AdjacencyMode.NodeNeighbors else "elements"

    @classmethod
    def from_name(cls, name: str) -> "AdjacencyMode":
        """
        Resolve "nodes"/"elements" (or the enum member names) to a mode.
        """
        member_name = MODE_NAMES.get(name.lower(), name)
        try:
            return cls[member_name]
        except KeyError:
            raise ConfigurationError(f"Unknown adjacency mode '{name}'")

    @classmethod
    def from_names(cls, names: Iterable[str]) -> List["AdjacencyMode"]:
        """
        Resolve mode names in order, "both" standing for nodes then elements. Repeats are dropped.
        """
        modes = []
        for name in names:
            resolved = list(cls) if name.lower() == "both" else [cls.from_name(name)]
            modes += [mode for mode in resolved if mode not in modes]

        return modes


@dataclass(frozen=True, eq=False)
class PairList:
    """
    Two equal-length INDEX_DTYPE arrays: keys (vertex ids) and values (neighbour vertex or element ids).
    """
    keys: np.ndarray
    values: np.ndarray
    mode: AdjacencyMode

    def __post_init__(self):
        keys = np.asarray(self.keys, dtype=INDEX_DTYPE)
        values = np.asarray(self.values, dtype=INDEX_DTYPE)
        if keys.shape != values.shape or keys.ndim != 1:
            raise MeshInputError(f"Pair keys {keys.shape} and values {values.shape} must be equal-length 1-d arrays")
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.keys)

    def to_tuples(self) -> list:
        return list(zip(self.keys.tolist(), self.values.tolist()))
