"""Exception types shared across the package."""


class InputError(ValueError):
    """Bad user input: unknown vertex, non-edge, invalid parameter."""


class GraphFormatError(InputError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ConstructionError(ValueError):
    """No reduction set system exists for the requested parameters."""


class VerificationError(AssertionError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message} (witness: {witness!r})")


class BudgetExceededError(ValueError):
    """Exhaustive oracle refused: instance is beyond its budget."""


class NotAugmentingError(ValueError):
    """Structure has non-positive gain or does not alternate."""


class RadiusViolationError(RuntimeError):
    def __init__(self, node, probe):
        self.node = node
        self.probe = probe
        super().__init__(f"node {node}: probe {probe} escapes the collected ball")


class SimulationError(RuntimeError):
    def __init__(self, node, round_no, cause: BaseException):
        self.node = node
        self.round = round_no
        self.cause = cause
        super().__init__(f"handler fault at node {node}, round {round_no}: {cause!r}")
