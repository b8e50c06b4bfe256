from typing import Optional

from src.common.constants import EXIT_CAPACITY_OVERFLOW, EXIT_INPUT_ERROR, EXIT_VERIFICATION_FAILED


class MeshAdjacencyError(Exception):
    """
    Root of every error this package raises on purpose. exit_code is what the CLI returns for it.
    """
    exit_code = EXIT_INPUT_ERROR


class MeshInputError(MeshAdjacencyError, ValueError):
    exit_code = EXIT_INPUT_ERROR


class ConfigurationError(MeshInputError):
    pass


class MeshValidationError(MeshInputError):
    pass


class IndexOutOfRange(MeshValidationError):

    def __init__(self, element_id: int, position: int, index: Optional[int] = None):
        self.element_id = element_id
        self.position = position
        self.index = index
        detail = f" (index {index})" if index is not None else ""
        super().__init__(f"Element {element_id} position {position} references a vertex out of range{detail}")


class DegenerateElement(MeshValidationError):

    def __init__(self, element_id: int):
        self.element_id = element_id
        super().__init__(f"Element {element_id} repeats a vertex index")


class ArityMismatch(MeshValidationError):

    def __init__(self, element_id: int, arity: Optional[int] = None, kind: Optional[str] = None):
        self.element_id = element_id
        self.arity = arity
        self.kind = kind
        super().__init__(f"Element {element_id} has arity {arity}, which does not fit element kind {kind}")


class MeshParseError(MeshInputError):
    pass


class MeshSyntaxError(MeshParseError):

    def __init__(self, line_number: int, reason: str = "malformed line"):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"Line {line_number}: {reason}")


class CountMismatch(MeshParseError):

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class ZeroIndex(MeshParseError):

    def __init__(self, line_number: int):
        self.line_number = line_number
        super().__init__(f"Line {line_number}: OBJ indices are 1-based, 0 is not a valid index")


class UnsortedInput(MeshInputError):

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"Keys descend between positions {position - 1} and {position}")


class BenchmarkConfigurationError(MeshInputError):
    pass


class CapacityOverflow(MeshAdjacencyError, OverflowError):
    exit_code = EXIT_CAPACITY_OVERFLOW

    def __init__(self, quantity: str, value: int, limit: int):
        self.quantity = quantity
        self.value = value
        self.limit = limit
        super().__init__(f"{quantity} = {value} exceeds the index type limit {limit}")


class VerificationFailed(MeshAdjacencyError):
    exit_code = EXIT_VERIFICATION_FAILED

    def __init__(self, divergence: str):
        self.divergence = divergence
        super().__init__(f"Adjacency outputs differ: {divergence}")
