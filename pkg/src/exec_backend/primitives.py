from typing import Optional, Tuple

import numpy as np

from loguru import logger

from src.common.constants import (INDEX_DTYPE, INDEX_MAX, OFFSET_DTYPE, PACKED_DTYPE, PACKED_KEY_HALF,
                                  PACKED_VALUE_HALF)
from src.common.exceptions import CapacityOverflow, MeshInputError, UnsortedInput
from src.exec_backend.backend import Backend
from src.pair_expand.pair_list import PairList

# below this many pairs the parallel sort falls back to one in-place sort
PARALLEL_SORT_THRESHOLD = 1 << 14


class SerialPrimitives:
    """
    Single-threaded reference implementations of the pipeline primitives. The parallel variants must return
    bitwise-identical arrays.
    """

    @staticmethod
    def pack_pairs(keys: np.ndarray, values: np.ndarray) -> np.ndarray:
        """
        Pack (key, value) into one uint64 per pair, key in the high half, so a plain integer sort orders pairs
        lexicographically. Both halves are written in place, no temporaries.
        """
        packed = np.empty(len(keys), dtype=PACKED_DTYPE)
        halves = packed.view(np.uint32)
        halves[PACKED_KEY_HALF::2] = keys.view(np.uint32)
        halves[PACKED_VALUE_HALF::2] = values.view(np.uint32)

        return packed

    @staticmethod
    def unpack_pairs(packed: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Strided INDEX_DTYPE views of the key and value halves. No copy is made.
        """
        halves = packed.view(np.uint32)

        return halves[PACKED_KEY_HALF::2].view(INDEX_DTYPE), halves[PACKED_VALUE_HALF::2].view(INDEX_DTYPE)

    @staticmethod
    def check_sorted(keys: np.ndarray, position_offset: int = 0) -> None:
        """
        :raises UnsortedInput: at the first position whose key is below its predecessor
        """
        if len(keys) < 2:
            return
        descending = np.flatnonzero(keys[1:] < keys[:-1])
        if descending.size:
            raise UnsortedInput(position_offset + int(descending[0]) + 1)

    @staticmethod
    def run_starts(keys: np.ndarray) -> np.ndarray:
        """
        Positions where a new run of equal keys begins. keys must be non-empty.
        """
        is_start = np.empty(len(keys), dtype=bool)
        is_start[0] = True
        np.not_equal(keys[1:], keys[:-1], out=is_start[1:])

        return np.flatnonzero(is_start)

    def sort_packed(self, packed: np.ndarray) -> np.ndarray:
        packed.sort()

        return packed

    def exclusive_scan(self, counts: np.ndarray) -> np.ndarray:
        result = np.zeros(len(counts) + 1, dtype=OFFSET_DTYPE)
        np.cumsum(counts, dtype=OFFSET_DTYPE, out=result[1:])

        return result

    def reduce_by_key_ones(self, keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if not len(keys):
            return np.empty(0, dtype=INDEX_DTYPE), np.empty(0, dtype=INDEX_DTYPE)
        self.check_sorted(keys)
        starts = self.run_starts(keys)
        ones = np.ones(len(keys), dtype=INDEX_DTYPE)

        # without dtype, add.reduceat widens int32 input to a full int64 copy
        return keys[starts], np.add.reduceat(ones, starts, dtype=INDEX_DTYPE)

    def first_positions_by_key(self, keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if not len(keys):
            return np.empty(0, dtype=INDEX_DTYPE), np.empty(0, dtype=INDEX_DTYPE)
        self.check_sorted(keys)
        starts = self.run_starts(keys)
        sequence = np.arange(len(keys), dtype=INDEX_DTYPE)

        return keys[starts], sequence[starts]


class ParallelPrimitives(SerialPrimitives):
    """
    Chunked implementations on a thread pool. Each primitive splits its input into one contiguous chunk per worker,
    runs the serial kernel per chunk and stitches the chunk results serially.
    """

    def __init__(self, backend: Backend):
        self.backend = backend

    def sort_packed(self, packed: np.ndarray) -> np.ndarray:
        """
        Sample sort: sort chunks in place, pick splitters from regular samples of the sorted chunks, gather every
        bucket into a fresh buffer and sort each bucket. Packed words are totally ordered, so the result equals
        the serial sort bit for bit.
        """
        chunks = self.backend.chunks(len(packed))
        if len(packed) < PARALLEL_SORT_THRESHOLD or len(chunks) < 2:
            return super().sort_packed(packed)

        self.backend.map(lambda bounds: packed[bounds[0]:bounds[1]].sort(), chunks)

        bucket_count = len(chunks)
        samples = np.concatenate([packed[start:stop][np.linspace(0, stop - start - 1, bucket_count, dtype=np.int64)]
                                  for start, stop in chunks])
        samples.sort()
        splitters = samples[bucket_count::bucket_count][:bucket_count - 1]

        # cuts[c, b] .. cuts[c, b + 1] is the part of chunk c that lands in bucket b
        cuts = np.empty((len(chunks), bucket_count + 1), dtype=np.int64)
        for row, (start, stop) in enumerate(chunks):
            cuts[row, 0] = start
            cuts[row, 1:-1] = start + np.searchsorted(packed[start:stop], splitters, side='left')
            cuts[row, -1] = stop
        bucket_sizes = (cuts[:, 1:] - cuts[:, :-1]).sum(axis=0)
        bucket_offsets = np.zeros(bucket_count + 1, dtype=np.int64)
        np.cumsum(bucket_sizes, out=bucket_offsets[1:])

        merged = np.empty_like(packed)

        def fill_bucket(bucket: int) -> None:
            position = bucket_offsets[bucket]
            for row in range(len(chunks)):
                start, stop = cuts[row, bucket], cuts[row, bucket + 1]
                merged[position:position + stop - start] = packed[start:stop]
                position += stop - start
            merged[bucket_offsets[bucket]:bucket_offsets[bucket + 1]].sort()

        self.backend.map(fill_bucket, range(bucket_count))
        logger.debug(f"Sample sort of {len(packed)} pairs into {bucket_count} buckets: {bucket_sizes.tolist()}")

        return merged

    def exclusive_scan(self, counts: np.ndarray) -> np.ndarray:
        chunks = self.backend.chunks(len(counts))
        if len(chunks) < 2:
            return super().exclusive_scan(counts)

        result = np.zeros(len(counts) + 1, dtype=OFFSET_DTYPE)
        self.backend.map(lambda bounds: np.cumsum(counts[bounds[0]:bounds[1]], dtype=OFFSET_DTYPE,
                                                  out=result[bounds[0] + 1:bounds[1] + 1]), chunks)

        carries = np.zeros(len(chunks), dtype=OFFSET_DTYPE)
        for index in range(1, len(chunks)):
            carries[index] = carries[index - 1] + result[chunks[index - 1][1]]

        def add_carry(index: int) -> None:
            start, stop = chunks[index]
            result[start + 1:stop + 1] += carries[index]

        self.backend.map(add_carry, range(1, len(chunks)))

        return result

    def _check_seams(self, keys: np.ndarray, chunks: list) -> None:
        for start, _ in chunks[1:]:
            if keys[start] < keys[start - 1]:
                raise UnsortedInput(start)

    def reduce_by_key_ones(self, keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        chunks = self.backend.chunks(len(keys))
        if len(chunks) < 2:
            return super().reduce_by_key_ones(keys)
        self._check_seams(keys, chunks)

        def reduce_chunk(bounds):
            start, stop = bounds
            try:
                return super(ParallelPrimitives, self).reduce_by_key_ones(keys[start:stop])
            except UnsortedInput as error:
                raise UnsortedInput(start + error.position)

        partial = self.backend.map(reduce_chunk, chunks)
        chunk_keys = np.concatenate([unique_keys for unique_keys, _ in partial])
        chunk_counts = np.concatenate([counts for _, counts in partial])

        # runs spanning a seam show up as repeated keys in the concatenation
        starts = self.run_starts(chunk_keys)

        return chunk_keys[starts], np.add.reduceat(chunk_counts, starts, dtype=INDEX_DTYPE)

    def first_positions_by_key(self, keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        chunks = self.backend.chunks(len(keys))
        if len(chunks) < 2:
            return super().first_positions_by_key(keys)
        self._check_seams(keys, chunks)

        def scan_chunk(bounds):
            start, stop = bounds
            try:
                unique_keys, first_index = super(ParallelPrimitives, self).first_positions_by_key(keys[start:stop])
            except UnsortedInput as error:
                raise UnsortedInput(start + error.position)
            first_index += start

            return unique_keys, first_index

        partial = self.backend.map(scan_chunk, chunks)
        chunk_keys = np.concatenate([unique_keys for unique_keys, _ in partial])
        chunk_first = np.concatenate([first_index for _, first_index in partial])
        starts = self.run_starts(chunk_keys)

        return chunk_keys[starts], chunk_first[starts]


def primitives_for(backend: Optional[Backend] = None) -> SerialPrimitives:
    if backend is None or not backend.is_parallel:
        return SerialPrimitives()

    return ParallelPrimitives(backend)


def sort_pairs(pairs: PairList, backend: Optional[Backend] = None) -> PairList:
    """
    Sort pairs by key, then by value within equal keys.

    :param pairs: pairs to sort (left untouched)
    :param backend: execution backend, serial when omitted
    :return: sorted PairList whose arrays are views into one packed buffer
    """
    primitives = primitives_for(backend)
    packed = primitives.sort_packed(primitives.pack_pairs(pairs.keys, pairs.values))
    keys, values = primitives.unpack_pairs(packed)

    return PairList(keys, values, pairs.mode)


def exclusive_scan(counts, backend: Optional[Backend] = None) -> np.ndarray:
    """
    Exclusive prefix sum with the grand total appended: output[0] = 0, output[i] = sum(counts[:i]).

    :param counts: non-negative integers
    :param backend: execution backend
    :return: OFFSET_DTYPE array of length len(counts) + 1
    """
    counts = np.asarray(counts)
    if counts.size and counts.min() < 0:
        raise MeshInputError("exclusive_scan expects non-negative counts")

    result = primitives_for(backend).exclusive_scan(counts)
    if result[-1] > INDEX_MAX:
        raise CapacityOverflow("total_neighbors", int(result[-1]), INDEX_MAX)

    return result


def reduce_by_key_ones(sorted_keys, backend: Optional[Backend] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Run-length encode sorted keys by summing a ones array per run.

    :param sorted_keys: non-decreasing keys
    :param backend: execution backend
    :return: (unique_keys, counts)
    """
    return primitives_for(backend).reduce_by_key_ones(np.asarray(sorted_keys))


def first_positions_by_key(sorted_keys, backend: Optional[Backend] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Position of the first occurrence of every distinct key.

    :param sorted_keys: non-decreasing keys
    :param backend: execution backend
    :return: (unique_keys, first_index)
    """
    return primitives_for(backend).first_positions_by_key(np.asarray(sorted_keys))
