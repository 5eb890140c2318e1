"""Exceptions raised by boxtron."""
from __future__ import annotations


class BoxtronError(Exception):
    """Parent class for all boxtron errors.

    Catch all boxtron errors:

    >>> try:
    >>>     fun() # raise FactorizationError or any other
    >>> except BoxtronError:
    >>>     print("Some boxtron error")

    Some children take arguments which can later be used in an except block e.g.:

    >>> try:
    >>>     parse_matpower(text) # raises CaseParseError
    >>> except CaseParseError as e:
    >>>     print(e.line, e.block)

    """


class ContractViolationError(BoxtronError, ValueError):
    """Exception is thrown when the inputs of an operation break its preconditions."""


class DimensionMismatchError(ContractViolationError):
    """Exception is thrown when vector or matrix dimensions do not conform."""

    def __init__(self, operation: str, *shapes: tuple):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            operation (str): name of the operation that rejected its operands
            *shapes (tuple): the shapes of the offending operands
        """
        super().__init__(
            f"{operation}: non-conforming dimensions " + " vs ".join(str(s) for s in shapes)
        )
        self.operation = operation
        self.shapes = shapes


class CapacityError(ContractViolationError):
    """Exception is thrown when a problem exceeds the configured dimension capacity."""

    def __init__(self, dim: int, capacity: int):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            dim (int): the requested problem dimension
            capacity (int): the configured maximum dimension (config key ``max_dimension``)
        """
        super().__init__(f"Problem dimension {dim} is outside of the supported range 1..{capacity}.")
        self.dim = dim
        self.capacity = capacity


class FactorizationError(BoxtronError):
    """Exception is thrown when the shifted Cholesky factorization gives up."""

    def __init__(self, shift: float, cap: float):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            shift (float): the last diagonal shift that was tried
            cap (float): the shift cap that was exceeded
        """
        super().__init__(f"Cholesky factorization failed: shift {shift:.3e} exceeds cap {cap:.3e}.")
        self.shift = shift
        self.cap = cap


class SingularFactorError(BoxtronError):
    """Exception is thrown when a triangular factor has a zero diagonal entry."""

    def __init__(self, index: int):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            index (int): position of the zero diagonal entry
        """
        super().__init__(f"Triangular factor is singular: zero diagonal at index {index}.")
        self.index = index


class NoIntersectionError(BoxtronError):
    """Exception is thrown when a ray cannot meet the trust-region boundary."""


class EvaluationError(BoxtronError):
    """Exception is thrown when an objective or model evaluation is not finite."""


class CaseParseError(BoxtronError):
    """Exception is thrown when a MATPOWER case file can not be parsed."""

    def __init__(self, message: str, line: int | None = None, block: str | None = None):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            message (str): what went wrong
            line (int | None): 1-based line number in the case file, if known
            block (str | None): name of the matrix block, e.g. ``mpc.branch``
        """
        where = []
        if block is not None:
            where.append(f"block {block}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))
        self.line = line
        self.block = block


class ZeroImpedanceError(BoxtronError):
    """Exception is thrown when a branch has r = x = 0."""

    def __init__(self, from_bus: int, to_bus: int):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            from_bus (int): id of the "from" bus
            to_bus (int): id of the "to" bus
        """
        super().__init__(f"Branch {from_bus}->{to_bus} has zero series impedance.")
        self.from_bus = from_bus
        self.to_bus = to_bus


class DegenerateBusError(BoxtronError):
    """Exception is thrown when a bus power-balance row has no coefficients."""

    def __init__(self, bus_id: int, row: str):
        """Pass parameters to constructor for later use and uniform error messages.

        Args:
            bus_id (int): the bus id
            row (str): ``"P"`` or ``"Q"``
        """
        super().__init__(f"Bus {bus_id} has an empty {row} balance row, no component can satisfy it.")
        self.bus_id = bus_id
        self.row = row
