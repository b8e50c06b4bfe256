from dataclasses import asdict, dataclass
from enum import Enum

from src.common.exceptions import ConfigurationError
from src.pair_expand.pair_list import AdjacencyMode


class BenchMode(Enum):
    NodeNeighbors = "nodes"
    ElementNeighbors = "elements"
    Both = "both"

    @classmethod
    def from_name(cls, name: str) -> "BenchMode":
        name = name.lower()
        aliases = {"node": "nodes", "element": "elements", "nodeneighbors": "nodes", "elementneighbors": "elements"}
        try:
            return cls(aliases.get(name, name))
        except ValueError:
            raise ConfigurationError(f"Unknown benchmark mode '{name}'")

    @classmethod
    def from_adjacency_mode(cls, mode: AdjacencyMode) -> "BenchMode":
        return cls[mode.name]

    @property
    def adjacency_mode(self) -> AdjacencyMode:
        if self is BenchMode.Both:
            raise ValueError("Both spans two adjacency modes")

        return AdjacencyMode[self.name]


@dataclass(frozen=True)
class BenchRecord:
    """
    One benchmark row. Times are medians in milliseconds; speedup is serial_ms / parallel_ms.
    """
    mesh_name: str
    vertex_count: int
    element_count: int
    mode: BenchMode
    serial_ms: float
    parallel_ms: float
    speedup: float
    worker_count: int
    repetitions: int
    peak_bytes: int

    @classmethod
    def from_times(cls, mesh_name: str, vertex_count: int, element_count: int, mode: BenchMode, serial_ms: float,
                   parallel_ms: float, worker_count: int, repetitions: int, peak_bytes: int) -> "BenchRecord":
        speedup = serial_ms / parallel_ms if parallel_ms > 0 else float("inf")

        return cls(mesh_name, vertex_count, element_count, mode, serial_ms, parallel_ms, speedup, worker_count,
                   repetitions, peak_bytes)

    def to_dict(self) -> dict:
        record = asdict(self)
        record["mode"] = self.mode.value

        return record


def combine_records(node_record: BenchRecord, element_record: BenchRecord) -> BenchRecord:
    """
    Overall row for a mesh: node and element times added, speedup recomputed from the sums, peak memory the larger
    of the two builds.
    """
    return BenchRecord.from_times(node_record.mesh_name, node_record.vertex_count, node_record.element_count,
                                  BenchMode.Both,
                                  node_record.serial_ms + element_record.serial_ms,
                                  node_record.parallel_ms + element_record.parallel_ms,
                                  node_record.worker_count,
                                  min(node_record.repetitions, element_record.repetitions),
                                  max(node_record.peak_bytes, element_record.peak_bytes))


# published GPU measurements for the Armadillo scan, kept for report formatting tests
ARMADILLO_NODE_REFERENCE = BenchRecord.from_times("Armadillo", 172000, 346000, BenchMode.NodeNeighbors,
                                                  2527.0, 50.0, 0, 3, 0)
ARMADILLO_ELEMENT_REFERENCE = BenchRecord.from_times("Armadillo", 172000, 346000, BenchMode.ElementNeighbors,
                                                     1732.0, 22.1, 0, 3, 0)
ARMADILLO_REFERENCE = combine_records(ARMADILLO_NODE_REFERENCE, ARMADILLO_ELEMENT_REFERENCE)
