from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.common.constants import INDEX_DTYPE, INDEX_MAX, OFFSET_DTYPE
from src.common.exceptions import (ArityMismatch, CapacityOverflow, DegenerateElement, IndexOutOfRange,
                                   MeshValidationError)

INT64_MIN, INT64_MAX = int(np.iinfo(np.int64).min), int(np.iinfo(np.int64).max)


class ElementKind(Enum):
    Triangle = "triangle"
    Quad = "quad"
    Tetrahedron = "tetrahedron"
    Polygon = "polygon"

    @property
    def arity(self) -> Optional[int]:
        """
        Fixed number of nodes per element, None for polygons.
        """
        return _ARITIES[self]

    @property
    def edge_table(self) -> Optional[Tuple[Tuple[int, int], ...]]:
        """
        Local node pairs forming the element's edges, in emission order. Surface kinds list their ring edges,
        tetrahedra all six edges. Polygons have no table, their ring is derived from the stored node order.
        """
        return _EDGE_TABLES[self]

    @classmethod
    def from_name(cls, name: str) -> "ElementKind":
        return cls(name.lower())


_ARITIES = {
    ElementKind.Triangle: 3,
    ElementKind.Quad: 4,
    ElementKind.Tetrahedron: 4,
    ElementKind.Polygon: None,
}

_EDGE_TABLES = {
    ElementKind.Triangle: ((0, 1), (1, 2), (2, 0)),
    ElementKind.Quad: ((0, 1), (1, 2), (2, 3), (3, 0)),
    ElementKind.Tetrahedron: ((0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)),
    ElementKind.Polygon: None,
}


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Topological mesh: a vertex count plus a flat element connectivity array split by element_offsets
    (element e owns connectivity[element_offsets[e]:element_offsets[e + 1]]). Vertex coordinates are carried when a
    file provides them and are never read by topology operations.
    """
    vertex_count: int
    connectivity: np.ndarray
    element_offsets: np.ndarray
    element_kind: ElementKind = ElementKind.Triangle
    vertices: Optional[np.ndarray] = None

    @classmethod
    def from_elements(cls, vertex_count: int, elements: Sequence[Sequence[int]],
                      kind: Optional[ElementKind] = None, vertices: Optional[np.ndarray] = None) -> "Mesh":
        """
        Build a mesh from per-element index sequences.

        :param vertex_count: number of vertices
        :param elements: element node index sequences
        :param kind: element kind, inferred when omitted (all arity 3 -> Triangle, anything else -> Polygon)
        :param vertices: optional (vertex_count, 3) coordinates
        :return: an unvalidated Mesh
        """
        arities = [len(element) for element in elements]
        if kind is None:
            kind = ElementKind.Triangle if all(arity == 3 for arity in arities) else ElementKind.Polygon

        flat = []
        for element_id, element in enumerate(elements):
            for position, index in enumerate(element):
                index = int(index)
                if not INT64_MIN <= index <= INT64_MAX:
                    raise IndexOutOfRange(element_id, position, index)
                flat.append(index)

        offsets = np.zeros(len(arities) + 1, dtype=OFFSET_DTYPE)
        np.cumsum(np.asarray(arities, dtype=OFFSET_DTYPE), out=offsets[1:])

        return cls(vertex_count=int(vertex_count),
                   connectivity=np.array(flat, dtype=np.int64),
                   element_offsets=offsets,
                   element_kind=kind,
                   vertices=vertices)

    @property
    def element_count(self) -> int:
        return len(self.element_offsets) - 1

    @property
    def arities(self) -> np.ndarray:
        return np.diff(self.element_offsets)

    @property
    def elements(self) -> List[Tuple[int, ...]]:
        return [tuple(element) for element in self.iter_elements()]

    def element(self, element_id: int) -> Tuple[int, ...]:
        start, stop = self.element_offsets[element_id], self.element_offsets[element_id + 1]

        return tuple(int(index) for index in self.connectivity[start:stop])

    def element_array(self) -> np.ndarray:
        """
        (element_count, arity) view of the connectivity. Only defined for fixed-arity kinds.
        """
        arity = self.element_kind.arity
        if arity is None:
            raise TypeError("Polygon meshes have no fixed arity, use element_offsets instead")

        return self.connectivity.reshape(self.element_count, arity)

    def iter_elements(self) -> Iterator[List[int]]:
        """
        Yield elements as plain lists of Python ints. The oracle walks meshes through this.
        """
        arity = self.element_kind.arity
        if arity is not None and len(self.connectivity) == arity * self.element_count:
            yield from self.connectivity.reshape(self.element_count, arity).tolist()
        else:
            flat = self.connectivity.tolist()
            bounds = self.element_offsets.tolist()
            for start, stop in zip(bounds[:-1], bounds[1:]):
                yield flat[start:stop]


@dataclass(frozen=True, eq=False)
class ValidatedMesh(Mesh):
    """
    A Mesh that passed validate_mesh: connectivity is INDEX_DTYPE, every index is in range, arities fit the kind and
    no element repeats a vertex.
    """


def validate_mesh(mesh: Mesh) -> ValidatedMesh:
    """
    Check every Mesh invariant and return the mesh marked valid. Validated meshes are returned unchanged.

    :param mesh: mesh to check
    :return: ValidatedMesh with INDEX_DTYPE connectivity
    """
    if isinstance(mesh, ValidatedMesh):
        return mesh

    vertex_count = int(mesh.vertex_count)
    if vertex_count < 0:
        raise MeshValidationError(f"Vertex count {vertex_count} is negative")
    if vertex_count > INDEX_MAX:
        raise CapacityOverflow("vertex_count", vertex_count, INDEX_MAX)
    if mesh.element_count > INDEX_MAX:
        raise CapacityOverflow("element_count", mesh.element_count, INDEX_MAX)

    offsets = np.asarray(mesh.element_offsets, dtype=OFFSET_DTYPE)
    connectivity = np.asarray(mesh.connectivity)
    kind = mesh.element_kind

    if connectivity.size and connectivity.dtype.kind not in "iu":
        raise MeshValidationError(f"Connectivity must hold integers, got dtype {connectivity.dtype}")
    if len(offsets) == 0 or offsets[0] != 0 or offsets[-1] != len(connectivity) or (np.diff(offsets) < 0).any():
        raise MeshValidationError("Element offsets must rise from 0 to the connectivity length")
    _check_arities(offsets, kind)
    _check_index_range(connectivity, offsets, vertex_count)
    connectivity = connectivity.astype(INDEX_DTYPE, copy=False)
    _check_degenerate(connectivity, offsets, kind)

    return ValidatedMesh(vertex_count=vertex_count,
                         connectivity=connectivity,
                         element_offsets=offsets,
                         element_kind=kind,
                         vertices=mesh.vertices)


def _check_arities(offsets: np.ndarray, kind: ElementKind) -> None:
    arities = np.diff(offsets)
    if kind.arity is None:
        bad = np.flatnonzero(arities < 3)
    else:
        bad = np.flatnonzero(arities != kind.arity)
    if bad.size:
        element_id = int(bad[0])
        raise ArityMismatch(element_id, int(arities[element_id]), kind.value)


def _check_index_range(connectivity: np.ndarray, offsets: np.ndarray, vertex_count: int) -> None:
    if not connectivity.size:
        return
    bad = np.flatnonzero((connectivity < 0) | (connectivity >= vertex_count))
    if bad.size:
        slot = int(bad[0])
        element_id = int(np.searchsorted(offsets, slot, side='right')) - 1
        raise IndexOutOfRange(element_id, slot - int(offsets[element_id]), int(connectivity[slot]))


def _check_degenerate(connectivity: np.ndarray, offsets: np.ndarray, kind: ElementKind) -> None:
    element_count = len(offsets) - 1
    if not element_count:
        return

    if kind.arity is not None:
        rows = np.sort(connectivity.reshape(element_count, kind.arity), axis=1)
        repeated = np.flatnonzero((rows[:, 1:] == rows[:, :-1]).any(axis=1))
        if repeated.size:
            raise DegenerateElement(int(repeated[0]))
        return

    # (element id, vertex) packed so a single sort brings repeats next to each other
    element_ids = np.repeat(np.arange(element_count, dtype=np.uint64), np.diff(offsets))
    packed = (element_ids << np.uint64(32)) | connectivity.view(np.uint32).astype(np.uint64)
    packed.sort()
    repeated = np.flatnonzero(packed[1:] == packed[:-1])
    if repeated.size:
        raise DegenerateElement(int(packed[repeated[0]] >> np.uint64(32)))
