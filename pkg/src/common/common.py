import sys

import dill

from datetime import datetime, timezone
from loguru import logger
from pathlib import Path
from typing import List, Tuple


def to_pickle(data, path: str, protocol: int = 3) -> None:
    """
    pickle data to a file

    :param data: data to pickle
    :param path: path to write data to
    :param protocol: pickle protocol level to be used (python's current default is 3)
    """

    with open(path, 'wb') as file:
        dill.dump(data, file, protocol=protocol)


def from_pickle(path: str):
    """
    load data from a pickle file

    :param path: path to load
    :return: unpickled data
    """

    with open(path, 'rb') as file:
        return dill.load(file)


def ensure_dir_exists(path):
    """
    Ensure a directory exists. Create it if it doesn't.

    :param path: path to check (string or Path object)
    :return: absolute path of the directory (Path object)
    """
    path_obj = Path(path)

    if not path_obj.exists():
        logger.debug(f'Path does not exist, creating: {path_obj}')
        try:
            path_obj.mkdir(parents=True)
        except FileExistsError:
            pass

    return path_obj.absolute()


def get_utc_time() -> str:
    """
    Get the current UTC time as a compact timestamp usable in file names, e.g. 20240301T120000
    """
    now_utc = datetime.now(timezone.utc)
    return now_utc.strftime('%Y%m%dT%H%M%S')


def configure_logging(level: str = "INFO") -> None:
    """
    Replace loguru's default sink with a stderr sink at the requested level.

    :param level: loguru level name
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


def chunk_bounds(length: int, chunk_count: int) -> List[Tuple[int, int]]:
    """
    Split range(length) into at most chunk_count contiguous, non-empty (start, stop) ranges.

    :param length: number of items
    :param chunk_count: requested number of chunks
    :return: list of (start, stop) pairs covering [0, length) in order
    """
    chunk_count = max(1, min(chunk_count, length))
    bounds = [(length * i) // chunk_count for i in range(chunk_count + 1)]

    return [(start, stop) for start, stop in zip(bounds[:-1], bounds[1:]) if stop > start]
