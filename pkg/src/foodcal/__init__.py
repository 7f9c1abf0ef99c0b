"""FoodCalorie game engine: winnable level generation, star scoring, player
persistence, an HTTP API, and study analytics."""

from .catalog import (
    Catalog,
    FoodCategory,
    FoodItem,
    MeasurementUnit,
    items_by_category,
    load_catalog,
    save_catalog,
    validate_catalog,
)
from .errors import (
    AgeOutOfRangeError,
    CoverageError,
    FoodCalError,
    IllegalPickError,
    NoValidPlanError,
    ParseError,
    PerfectSeparationError,
    SampleTooSmallError,
    StorageUnavailableError,
    UnknownTokenError,
    UnwinnableCatalogError,
    ValidationError,
    VersionConflictError,
)
from .levelgen import Level, MealSlot, WindowPool, generate_all_levels, generate_level
from .requirements import (
    CalorieRequirementTable,
    Gender,
    RequirementRow,
    daily_target,
    load_requirement_table,
)
from .scoring import (
    LevelResult,
    PlayerProfile,
    StarAward,
    Submission,
    empty_profile,
    evaluate_submission,
    profile_summary,
    score_stars,
)
from .solver import (
    DayPlan,
    Pick,
    ReachableSet,
    SelectionConstraints,
    WindowChoice,
    best_plan,
    day_reachable,
    feasible,
    window_reachable,
)
from .store import FileStore, MemoryStore

__version__ = "0.1.0"
