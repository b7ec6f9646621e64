"""Exception hierarchy shared by every module."""


class DeltaLensError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CategoryError(DeltaLensError):
    pass


class MissingComposite(CategoryError):
    pass


class EndpointMismatch(CategoryError):
    pass


class LawViolation(CategoryError):
    pass


class NotAFunctor(DeltaLensError):
    def __init__(self, law, message, witness=None):
        super().__init__(f"{law}: {message}", witness)
        self.law = law


class PreconditionViolated(DeltaLensError):
    pass


class ShapeError(DeltaLensError):
    pass


class AxiomViolation(DeltaLensError):
    """A cofunctor or Mealy axiom failed.

    ``axiom`` is 1, 2 or 3 for the numbered axioms and 0 for typing or
    totality failures of the tables themselves.
    """

    def __init__(self, axiom, message, witness=None):
        super().__init__(f"axiom ({axiom}): {message}", witness)
        self.axiom = axiom


class ObjectMismatch(DeltaLensError):
    pass


class PutGetViolation(DeltaLensError):
    pass


class AnchorMismatch(DeltaLensError):
    pass


class NotSaturated(DeltaLensError):
    def __init__(self, bound, word_counts, message=None):
        super().__init__(
            message or f"pushout not saturated at bound {bound} (word counts {word_counts})"
        )
        self.bound = bound
        self.word_counts = list(word_counts)


class LInapplicableAtBound(NotSaturated):
    pass


class GenerationFailed(DeltaLensError):
    pass
