import hashlib

from pathlib import Path
from typing import Optional, Union

from loguru import logger

from src.common.common import ensure_dir_exists, from_pickle, to_pickle
from src.common.constants import MESH_CACHE_DIRECTORY_PATH
from src.mesh_core.mesh import ValidatedMesh


class MeshCache:
    """
    Parsed meshes pickled next to the artifacts. An entry is valid while the source file keeps its size and
    modification time; anything else is reparsed and replaced.
    """

    def __init__(self, cache_dir: Union[str, Path] = MESH_CACHE_DIRECTORY_PATH):
        self.cache_dir = ensure_dir_exists(cache_dir)

    def cache_file_path(self, source: Path) -> Path:
        source = Path(source).resolve()
        path_hash = hashlib.sha1(str(source).encode("utf-8")).hexdigest()[:12]

        return self.cache_dir / f"{source.stem}_{path_hash}.pickle"

    @staticmethod
    def source_signature(source: Path) -> dict:
        stat = Path(source).stat()

        return {"size": stat.st_size, "mtime": stat.st_mtime_ns}

    def get(self, source: Union[str, Path]) -> Optional[ValidatedMesh]:
        cache_file = self.cache_file_path(source)
        if not cache_file.exists():
            return None

        try:
            entry = from_pickle(cache_file)
        except Exception as error:
            logger.warning(f"Discarding unreadable mesh cache {cache_file.name}: {error}")
            cache_file.unlink(missing_ok=True)
            return None

        if entry.get("signature") != self.source_signature(source):
            logger.debug(f"Mesh cache for {Path(source).name} is stale")
            return None

        logger.debug(f"Using cached mesh for {Path(source).name}")

        return entry["mesh"]

    def put(self, source: Union[str, Path], mesh: ValidatedMesh) -> None:
        to_pickle({"signature": self.source_signature(source), "mesh": mesh}, self.cache_file_path(source))
