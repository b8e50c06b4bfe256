from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.common.constants import INDEX_DTYPE, OFFSET_DTYPE
from src.common.exceptions import VerificationFailed
from src.pair_expand.pair_list import AdjacencyMode


@dataclass(frozen=True, eq=False)
class CsrAdjacency:
    """
    Per-vertex neighbour lists in compressed sparse row layout: vertex v's neighbours (vertex ids in NodeNeighbors
    mode, element ids in ElementNeighbors mode) are indices[offsets[v]:offsets[v + 1]], ascending.
    """
    mode: AdjacencyMode
    vertex_count: int
    offsets: np.ndarray
    counts: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "offsets", np.asarray(self.offsets, dtype=OFFSET_DTYPE))
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=INDEX_DTYPE))
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=INDEX_DTYPE))

    @classmethod
    def from_offsets(cls, mode: AdjacencyMode, offsets: np.ndarray, indices: np.ndarray) -> "CsrAdjacency":
        offsets = np.asarray(offsets, dtype=OFFSET_DTYPE)

        return cls(mode=mode, vertex_count=len(offsets) - 1, offsets=offsets, counts=np.diff(offsets),
                   indices=indices)

    @property
    def total_neighbors(self) -> int:
        return int(self.offsets[-1])

    def neighbors(self, vertex: int) -> np.ndarray:
        return self.indices[self.offsets[vertex]:self.offsets[vertex + 1]]

    def to_lists(self) -> List[List[int]]:
        bounds = self.offsets.tolist()
        flat = self.indices.tolist()

        return [flat[start:stop] for start, stop in zip(bounds[:-1], bounds[1:])]

    def equals(self, other: "CsrAdjacency") -> bool:
        return self.first_divergence(other) is None

    def first_divergence(self, other: "CsrAdjacency") -> Optional[str]:
        """
        Describe the first difference between two adjacencies, None when they are identical.
        """
        if self.mode is not other.mode:
            return f"mode {self.mode.name} != {other.mode.name}"
        if self.vertex_count != other.vertex_count:
            return f"vertex_count {self.vertex_count} != {other.vertex_count}"

        differing = np.flatnonzero(self.counts != other.counts)
        if differing.size:
            vertex = int(differing[0])
            return (f"vertex {vertex}: {int(self.counts[vertex])} neighbours {self.neighbors(vertex).tolist()} != "
                    f"{int(other.counts[vertex])} neighbours {other.neighbors(vertex).tolist()}")
        if not np.array_equal(self.offsets, other.offsets):
            return "offsets differ while counts agree"

        differing = np.flatnonzero(self.indices != other.indices)
        if differing.size:
            position = int(differing[0])
            vertex = int(np.searchsorted(self.offsets, position, side='right')) - 1
            return f"vertex {vertex}: neighbours {self.neighbors(vertex).tolist()} != {other.neighbors(vertex).tolist()}"

        return None

    def check_invariants(self) -> None:
        """
        :raises VerificationFailed: naming the first broken invariant
        """
        offsets, counts, indices = self.offsets, self.counts, self.indices
        if len(offsets) != self.vertex_count + 1 or len(counts) != self.vertex_count:
            raise VerificationFailed(f"array lengths do not match vertex_count {self.vertex_count}")
        if offsets[0] != 0 or offsets[-1] != len(indices):
            raise VerificationFailed(f"offsets span [{offsets[0]}, {offsets[-1]}] but there are {len(indices)} indices")
        if not np.array_equal(np.diff(offsets), counts):
            raise VerificationFailed("counts disagree with consecutive offset differences")
        if not len(indices):
            return

        # ascending within every slice: a descent is only allowed where a new slice starts
        descents = np.flatnonzero(indices[1:] <= indices[:-1]) + 1
        slice_starts = offsets[:-1][counts > 0]
        bad = np.setdiff1d(descents, slice_starts)
        if bad.size:
            vertex = int(np.searchsorted(offsets, bad[0], side='right')) - 1
            raise VerificationFailed(f"vertex {vertex} neighbours are not strictly ascending")

        if self.mode is AdjacencyMode.NodeNeighbors:
            owners = np.repeat(np.arange(self.vertex_count, dtype=np.int64), counts)
            if (owners == indices).any():
                raise VerificationFailed(f"vertex {int(owners[owners == indices][0])} lists itself as a neighbour")
            if indices.min() < 0 or indices.max() >= self.vertex_count:
                raise VerificationFailed("neighbour index out of vertex range")
            forward = np.sort((owners << 32) | indices.astype(np.int64))
            reverse = np.sort((indices.astype(np.int64) << 32) | owners)
            if not np.array_equal(forward, reverse):
                raise VerificationFailed("node adjacency is not symmetric")
