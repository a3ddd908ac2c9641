"""Exception types shared across the package."""


class KappaWeylError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KappaWeylError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class CapacityError(DomainError):
    """A requested basis would exceed the configured state cap."""


class SingularParameterError(DomainError):
    """A parameter value at which the derived quantities are undefined."""


class NonUnitaryRepresentationError(KappaWeylError):
    """A squared ladder amplitude is negative, so the representation carries
    states of negative squared norm.

    Carries the offending ``(mode, state, radicand)`` triples.  Construction
    can be forced for diagnostic purposes, in which case entries hold the
    principal square roots and the resulting matrices are flagged invalid.
    """

    def __init__(self, kappa: float, d: int, offending):
        self.kappa = float(kappa)
        self.d = int(d)
        self.offending = tuple(offending)
        bound = d / (d + 1)
        mode, state, value = self.offending[0]
        super().__init__(
            f"non-unitary representation: {len(self.offending)} squared amplitude(s) "
            f"negative at kappa={kappa:g}, first at mode {mode}, state {state} "
            f"(radicand {value:g}); all amplitudes are non-negative only for "
            f"kappa >= d/(d+1) = {bound:g}"
        )


class InternalConsistencyError(KappaWeylError):
    """A computed representation violates a property it is guaranteed to have
    (for example a grade-dependent eigenvalue spreading within a grade)."""
