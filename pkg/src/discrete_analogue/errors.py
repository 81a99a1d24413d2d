"""Exception hierarchy."""


class DiscreteAnalogueError(ArithmeticError):
    """Base class for numeric failures raised by this package."""


class ConvergenceFailure(DiscreteAnalogueError):
    """A root bracket could not be refined to tolerance (usually too few bits)."""


class StructureViolation(DiscreteAnalogueError):
    """The sign-change scan did not find the expected number of brackets."""


class NonConvergent(DiscreteAnalogueError):
    """A truncated infinite sum could not be bounded below the requested epsilon."""


class WindowTooSmall(DiscreteAnalogueError):
    """Sampled data is too short for the operator's support margin."""

    def __init__(self, message: str, required_margin: int):
        super().__init__(message)
        self.required_margin = required_margin
