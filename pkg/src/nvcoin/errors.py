"""Exception hierarchy shared by all modules."""


class NvCoinError(Exception):
    """Base class for every error raised by the package."""


class NotASublattice(NvCoinError, ValueError):
    pass


class InfiniteIndex(NvCoinError, ValueError):
    pass


class SingularMatrix(NvCoinError, ValueError):
    pass


class GroupMismatch(NvCoinError, ValueError):
    pass


class InvalidGroup(NvCoinError, ValueError):
    pass


class ImageNotTranslation(NvCoinError, ValueError):
    pass


class ArityMismatch(NvCoinError, ValueError):
    pass


class TargetHasHolonomy(NvCoinError, ValueError):
    pass


class InvalidMorphism(NvCoinError, ValueError):
    pass


class NonIntegralResult(NvCoinError, ArithmeticError):
    """A formula that must produce an integer did not; never rounded away."""


class NotEquivariant(NvCoinError, ValueError):
    def __init__(self, message, generator=None, branch=None):
        super().__init__(message)
        self.generator = generator
        self.branch = branch


class NotNValued(NvCoinError, ValueError):
    def __init__(self, message, pair=None, point=None):
        super().__init__(message)
        self.pair = pair
        self.point = point


class DegenerateBranch(NvCoinError, ValueError):
    def __init__(self, branch):
        super().__init__(f"det(G - M_{branch + 1}) = 0; coincidence set is not isolated")
        self.branch = branch


class MismatchDetected(NvCoinError, AssertionError):
    """Two independent routes disagree. Always indicates a bug or bad input."""

    def __init__(self, quantity, expected, observed):
        super().__init__(f"{quantity}: expected {expected}, observed {observed}")
        self.quantity = quantity
        self.expected = expected
        self.observed = observed
