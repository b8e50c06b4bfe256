import re

from typing import Iterator, List, Tuple

from src.common.exceptions import MeshSyntaxError

INT_REGEX = re.compile(r"[+-]?[0-9]+", re.ASCII)
FLOAT_REGEX = re.compile(r"[+-]?(?:(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:e[+-]?[0-9]+)?|inf(?:inity)?|nan)",
                         re.ASCII | re.IGNORECASE)
# tokens are separated by ASCII blanks only
TOKEN_REGEX = re.compile(r"[^ \t\v\f]+", re.ASCII)


def split_lines(text: str) -> List[str]:
    """
    Split on "\\n" only, dropping one trailing "\\r" per line. Unlike str.splitlines, form feeds, ASCII separators
    and Unicode line breaks stay inside their line.
    """
    return [line[:-1] if line.endswith("\r") else line for line in text.split("\n")]


def split_tokens(line: str) -> List[str]:
    return TOKEN_REGEX.findall(line)


def iter_content_lines(data: bytes) -> Iterator[Tuple[int, List[str]]]:
    """
    Yield (1-based line number, tokens) for every line with content. Blank lines and "#" comments are skipped,
    "\\r\\n" line ends and tab separators are accepted.

    :param data: raw file bytes
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as error:
        raise MeshSyntaxError(data[:error.start].count(b"\n") + 1, "not valid UTF-8 text")

    for line_number, line in enumerate(split_lines(text), start=1):
        tokens = split_tokens(line.split("#", 1)[0])
        if tokens:
            yield line_number, tokens


def parse_int(token: str, line_number: int) -> int:
    if not INT_REGEX.fullmatch(token):
        raise MeshSyntaxError(line_number, f"expected an integer, got '{token[:32]}'")

    return int(token)


def parse_floats(tokens: List[str], line_number: int, count: int = 3) -> List[float]:
    if len(tokens) < count:
        raise MeshSyntaxError(line_number, f"expected {count} coordinates, got {len(tokens)}")
    if not all(FLOAT_REGEX.fullmatch(token) for token in tokens[:count]):
        raise MeshSyntaxError(line_number, "coordinate is not a number")

    return [float(token) for token in tokens[:count]]
