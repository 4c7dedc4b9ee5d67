"""Exception types shared across the engine."""


class EngineError(ValueError):
    """Base class for all engine-level errors."""


class DimensionError(EngineError):
    """Vector or matrix dimensions do not match."""


class NotAUnitError(EngineError):
    """A value vector has a nonzero head where a unit was required."""


class CenteringError(EngineError):
    """A generator or adjoined monomial has lex-negative value."""


class MembershipError(EngineError):
    """A monomial required to lie in a ring does not."""


class PivotError(EngineError):
    """A blowup pivot does not have minimal value in its ideal."""


class TrivialValuationError(EngineError):
    """The attached valuation vanishes on every generator."""


class RegularityError(EngineError):
    """An operation required a regular (localized) ring and got none."""


class InstanceError(EngineError):
    """An instance or trace file violates its schema."""
