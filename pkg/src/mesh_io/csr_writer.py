import struct

from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np

from loguru import logger

from src.common.constants import CSR_HEADER_FORMAT, CSR_MAGIC
from src.common.exceptions import CountMismatch, MeshSyntaxError
from src.csr_build.csr_adjacency import CsrAdjacency
from src.mesh_io.line_reader import parse_int, split_lines, split_tokens
from src.pair_expand.pair_list import AdjacencyMode

HEADER_SIZE = struct.calcsize(CSR_HEADER_FORMAT)


class CsrEncoding(Enum):
    Text = "text"
    Binary = "binary"


def emit_csr(adjacency: CsrAdjacency, encoding: CsrEncoding = CsrEncoding.Text) -> bytes:
    """
    Encode an adjacency as MESHCSR1.

    Text: a "MESHCSR1 <mode> <vertex_count> <total_neighbors>" header line, then "<vertex>: n0 n1 ..." per vertex.
    Binary: little-endian header (8-byte magic, u8 mode, u64 vertex count, u64 total), then u64 offsets and
    u32 indices.

    :param adjacency: adjacency to encode
    :param encoding: Text or Binary
    :return: encoded bytes
    """
    mode_code = adjacency.mode.value
    if encoding is CsrEncoding.Binary:
        header = struct.pack(CSR_HEADER_FORMAT, CSR_MAGIC, mode_code, adjacency.vertex_count,
                             adjacency.total_neighbors)
        return header + adjacency.offsets.astype('<u8').tobytes() + adjacency.indices.astype('<u4').tobytes()

    lines = [f"{CSR_MAGIC.decode()} {mode_code} {adjacency.vertex_count} {adjacency.total_neighbors}"]
    for vertex, neighbors in enumerate(adjacency.to_lists()):
        lines.append(" ".join([f"{vertex}:"] + [str(neighbor) for neighbor in neighbors]))

    return ("\n".join(lines) + "\n").encode("ascii")


def read_csr(data: bytes) -> CsrAdjacency:
    """
    Decode either MESHCSR1 encoding. Text files have a space right after the magic.

    :param data: encoded bytes
    :return: CsrAdjacency
    """
    if data[:len(CSR_MAGIC)] != CSR_MAGIC:
        raise MeshSyntaxError(1, "missing MESHCSR1 magic")
    if data[len(CSR_MAGIC):len(CSR_MAGIC) + 1] == b" ":
        return _read_text(data)

    return _read_binary(data)


def _mode_from_code(code: int, line_number: int = 1) -> AdjacencyMode:
    try:
        return AdjacencyMode(code)
    except ValueError:
        raise MeshSyntaxError(line_number, f"unknown adjacency mode {code}")


def _read_binary(data: bytes) -> CsrAdjacency:
    if len(data) < HEADER_SIZE:
        raise CountMismatch(f"binary CSR is {len(data)} bytes, shorter than its header")
    _, mode_code, vertex_count, total = struct.unpack_from(CSR_HEADER_FORMAT, data)
    mode = _mode_from_code(mode_code)

    expected_size = HEADER_SIZE + 8 * (vertex_count + 1) + 4 * total
    if len(data) != expected_size:
        raise CountMismatch(f"binary CSR is {len(data)} bytes, header implies {expected_size}")

    offsets = np.frombuffer(data, dtype='<u8', count=vertex_count + 1, offset=HEADER_SIZE)
    indices = np.frombuffer(data, dtype='<u4', count=total, offset=HEADER_SIZE + 8 * (vertex_count + 1))
    if offsets[0] != 0 or offsets[-1] != total or (np.diff(offsets.astype(np.int64)) < 0).any():
        raise CountMismatch("binary CSR offsets do not run from 0 to the neighbour total")

    return CsrAdjacency.from_offsets(mode, offsets.astype(np.int64), indices)


def _read_text(data: bytes) -> CsrAdjacency:
    try:
        lines = split_lines(data.decode("ascii"))
    except UnicodeDecodeError:
        raise MeshSyntaxError(1, "text CSR is not ASCII")
    if len(lines) > 1 and not lines[-1]:
        lines.pop()

    header = split_tokens(lines[0])
    if len(header) != 4:
        raise MeshSyntaxError(1, "header needs magic, mode, vertex count and total")
    mode_code, vertex_count, total = (parse_int(token, 1) for token in header[1:])
    mode = _mode_from_code(mode_code)

    body = lines[1:]
    if len(body) != vertex_count:
        raise CountMismatch(f"text CSR declares {vertex_count} vertices but has {len(body)} lines")

    counts = []
    indices = []
    for vertex, line in enumerate(body):
        line_number = vertex + 2
        label, _, neighbors = line.partition(":")
        if label.strip() != str(vertex):
            raise MeshSyntaxError(line_number, f"expected vertex {vertex}")
        row = [parse_int(token, line_number) for token in split_tokens(neighbors)]
        counts.append(len(row))
        indices.extend(row)
    if len(indices) != total:
        raise CountMismatch(f"text CSR declares {total} neighbours but lists {len(indices)}")

    offsets = np.zeros(vertex_count + 1, dtype=np.int64)
    np.cumsum(np.asarray(counts, dtype=np.int64), out=offsets[1:])

    return CsrAdjacency.from_offsets(mode, offsets, np.array(indices, dtype=np.int64))


def write_csr(adjacency: CsrAdjacency, path: Union[str, Path], binary: bool = False) -> Path:
    encoding = CsrEncoding.Binary if binary else CsrEncoding.Text
    path = Path(path)
    path.write_bytes(emit_csr(adjacency, encoding))
    logger.info(f"Wrote {adjacency.mode.name} adjacency ({adjacency.total_neighbors} entries) to {path}")

    return path
