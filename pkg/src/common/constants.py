import sys

from pathlib import Path

import numpy as np

from src.common.common import ensure_dir_exists


PARENT_DIRECTORY = ensure_dir_exists(Path(__file__).resolve().parent.parent.parent)
ARTIFACTS_DIRECTORY = ensure_dir_exists(PARENT_DIRECTORY / "artifacts")
RESULTS_DIRECTORY_PATH = ensure_dir_exists(ARTIFACTS_DIRECTORY / "results")
REPORTS_DIRECTORY_PATH = ensure_dir_exists(ARTIFACTS_DIRECTORY / "reports")
MESH_CACHE_DIRECTORY_PATH = ensure_dir_exists(ARTIFACTS_DIRECTORY / "mesh_cache")
EXAMPLE_CONFIGS_DIRECTORY_PATH = PARENT_DIRECTORY / "src" / "mesh_config" / "example_configs"

INDEX_DTYPE = np.int32
INDEX_WIDTH = np.dtype(INDEX_DTYPE).itemsize
INDEX_MAX = int(np.iinfo(INDEX_DTYPE).max)
OFFSET_DTYPE = np.int64
OFFSET_WIDTH = np.dtype(OFFSET_DTYPE).itemsize
PACKED_DTYPE = np.uint64
PACKED_WIDTH = np.dtype(PACKED_DTYPE).itemsize

# position of the high (key) and low (value) uint32 halves inside a packed uint64
PACKED_KEY_HALF, PACKED_VALUE_HALF = (1, 0) if sys.byteorder == "little" else (0, 1)

CSR_MAGIC = b"MESHCSR1"
CSR_HEADER_FORMAT = "<8sBQQ"

MODE_NAMES = {
    "nodes": "NodeNeighbors",
    "node": "NodeNeighbors",
    "elements": "ElementNeighbors",
    "element": "ElementNeighbors",
    "both": "Both",
}

MESH_FILE_SUFFIXES = {".off", ".obj"}

EXIT_SUCCESS = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CAPACITY_OVERFLOW = 3

DEFAULT_REPETITIONS = 5
MIN_REPETITIONS = 3
