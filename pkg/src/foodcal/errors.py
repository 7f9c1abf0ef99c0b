"""Exception hierarchy shared across the engine."""


class FoodCalError(Exception):
    """Base class for all engine errors."""


class ParseError(FoodCalError):
    """A data file could not be parsed."""


class ValidationError(FoodCalError):
    """Parsed data violates a structural constraint."""


class CoverageError(ValidationError):
    """A requirement table has holes in its (age, gender) coverage."""


class AgeOutOfRangeError(FoodCalError):
    """Requested age falls outside the requirement table's span."""


class UnwinnableCatalogError(FoodCalError):
    """Level generation exhausted its resample budget without a winnable pool set."""


class NoValidPlanError(FoodCalError):
    """No selection satisfies the minimum-items constraint."""


class IllegalPickError(FoodCalError):
    """A submission contains a pick outside the level's pools or constraints."""


class SampleTooSmallError(FoodCalError):
    """Statistic requires at least two observations."""


class PerfectSeparationError(FoodCalError):
    """Pooled variance is zero while the group means differ."""


class UnknownTokenError(FoodCalError):
    """Player token was never issued by this store."""


class VersionConflictError(FoodCalError):
    """Compare-and-set write lost the race; caller should re-read and retry."""


class StorageUnavailableError(FoodCalError):
    """Backing store cannot be reached or written."""
