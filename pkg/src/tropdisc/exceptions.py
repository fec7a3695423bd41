"""Exception classes raised across the package."""


class TropdiscError(Exception):
    """Base class for all package errors."""


class RankDeficient(TropdiscError, ValueError):
    pass


class NotSquare(TropdiscError, ValueError):
    pass


class SpanMismatch(TropdiscError, ValueError):
    pass


class DimensionMismatch(TropdiscError, ValueError):
    pass


class InvalidConfiguration(TropdiscError, ValueError):
    """The integer matrix violates one of the standing hypotheses.

    ``reason`` is a short machine-readable token such as ``"pyramid"``,
    ``"rank"``, ``"lattice"`` or ``"homogeneity"``.
    """

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or reason)


class PyramidInput(InvalidConfiguration):
    def __init__(self, message=None):
        super().__init__("pyramid", message or "configuration is a pyramid")


class LatticeTooLarge(TropdiscError, RuntimeError):
    pass


class GenericityFailure(TropdiscError, RuntimeError):
    """A weight vector turned out not to be generic.

    ``w`` is the offending vector and ``reason`` one of
    ``"boundary intersection"``, ``"non-transversal"`` or ``"w on fan"``.
    """

    def __init__(self, w, reason, report=None):
        self.w = tuple(w) if w is not None else ()
        self.reason = reason
        self.report = report
        where = f"non-generic weight vector {list(self.w)}" if self.w else "no generic weight found"
        super().__init__(f"{where}: {reason}")


class Defective(TropdiscError, ValueError):
    def __init__(self, codim):
        self.codim = codim
        super().__init__(f"configuration is defective (codimension {codim})")


class NotEssential(TropdiscError, ValueError):
    pass


class TooFewBlocks(TropdiscError, ValueError):
    pass


class KernelNotOneDimensional(TropdiscError, RuntimeError):
    def __init__(self, dim):
        self.dim = dim
        super().__init__(f"coefficient space has dimension {dim}, expected 1")


class DimensionTooLarge(TropdiscError, ValueError):
    pass


class NonPureFan(TropdiscError, ValueError):
    pass
