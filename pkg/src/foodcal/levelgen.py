"""Deterministic level generation with a winnability guarantee.

Each level covers one age and carries six selection windows (male and female
breakfast/lunch/dinner). Window pools honor the staple rule and are
resampled until the solver certifies that both genders can land inside the
one-star band, so every shipped level is provably winnable.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .catalog import Catalog, FoodCategory, FoodItem
from .errors import UnwinnableCatalogError, ValidationError
from .prng import SplitMix64, derive_attempt_seed, derive_level_seed
from .requirements import CalorieRequirementTable, Gender, daily_target
from .solver import SelectionConstraints, feasible

LEVEL_COUNT = 96
WINNABILITY_TOL = 20  # one-star band half-width
DEFAULT_MAX_RESAMPLES = 1000

STAPLE_MODE_ONE_EACH = "one-each"
STAPLE_MODE_UNION = "union"

_NON_STAPLE_CATEGORIES = (
    FoodCategory.CURRY,
    FoodCategory.FRUIT,
    FoodCategory.DESSERT,
    FoodCategory.DAIRY,
    FoodCategory.OTHER,
)


class MealSlot(str, Enum):
    BREAKFAST = "breakfast"
    LUNCH = "lunch"
    DINNER = "dinner"


@dataclass(frozen=True)
class WindowPool:
    gender: Gender
    meal: MealSlot
    item_ids: tuple[str, ...]


@dataclass(frozen=True)
class Level:
    level_number: int
    age: int
    windows: tuple[WindowPool, ...]  # male B/L/D then female B/L/D
    male_target: int
    female_target: int
    seed: int

    def windows_for(self, gender: Gender) -> tuple[WindowPool, WindowPool, WindowPool]:
        offset = 0 if gender is Gender.MALE else 3
        return self.windows[offset], self.windows[offset + 1], self.windows[offset + 2]

    def target_for(self, gender: Gender) -> int:
        return self.male_target if gender is Gender.MALE else self.female_target


def _sample_window(rng: SplitMix64, catalog: Catalog, staple_mode: str) -> list[str]:
    rice = [item for item in catalog.items if item.category == FoodCategory.RICE]
    bread = [item for item in catalog.items if item.category == FoodCategory.BREAD]
    rest = [item for item in catalog.items if item.category in _NON_STAPLE_CATEGORIES]
    if staple_mode == STAPLE_MODE_ONE_EACH:
        if not rice or not bread:
            raise UnwinnableCatalogError("catalog lacks rice or bread items")
        staples = [rng.choice(rice), rng.choice(bread)]
    elif staple_mode == STAPLE_MODE_UNION:
        union = rice + bread
        if len(union) < 2:
            raise UnwinnableCatalogError("catalog lacks two staple items")
        staples = rng.sample_distinct(union, 2)
    else:
        raise ValueError(f"unknown staple mode {staple_mode!r}")
    if len(rest) < 4:
        raise UnwinnableCatalogError("catalog lacks four non-staple items")
    others = rng.sample_distinct(rest, 4)
    return [item.id for item in staples + others]


def _pools(catalog: Catalog, window_pools: Sequence[WindowPool]) -> list[list[FoodItem]]:
    return [[catalog.get(item_id) for item_id in w.item_ids] for w in window_pools]


def generate_level(
    catalog: Catalog,
    table: CalorieRequirementTable,
    age: int,
    seed: int,
    constraints: SelectionConstraints = SelectionConstraints(),
    *,
    staple_mode: str = STAPLE_MODE_ONE_EACH,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
) -> Level:
    """Generate one level; a pure function of its arguments.

    Windows are sampled male breakfast/lunch/dinner then female, all from
    one stream per attempt. An attempt is rejected unless both genders are
    certified feasible within the one-star band.
    """
    male_target = daily_target(table, age, Gender.MALE)
    female_target = daily_target(table, age, Gender.FEMALE)
    level_number = age - table.age_min + 1

    for attempt in range(max_resamples):
        rng = SplitMix64(derive_attempt_seed(seed, attempt))
        windows = []
        for gender in (Gender.MALE, Gender.FEMALE):
            for meal in MealSlot:
                item_ids = _sample_window(rng, catalog, staple_mode)
                windows.append(WindowPool(gender=gender, meal=meal, item_ids=tuple(item_ids)))
        level = Level(
            level_number=level_number,
            age=age,
            windows=tuple(windows),
            male_target=male_target,
            female_target=female_target,
            seed=seed,
        )
        male_ok = feasible(
            _pools(catalog, level.windows_for(Gender.MALE)), constraints,
            male_target, WINNABILITY_TOL,
        )
        if not male_ok:
            continue
        female_ok = feasible(
            _pools(catalog, level.windows_for(Gender.FEMALE)), constraints,
            female_target, WINNABILITY_TOL,
        )
        if female_ok:
            return level
    raise UnwinnableCatalogError(
        f"no winnable pools for age {age} after {max_resamples} resamples; "
        "catalog and requirement table are pathologically mismatched"
    )


def generate_all_levels(
    catalog: Catalog,
    table: CalorieRequirementTable,
    master_seed: int,
    constraints: SelectionConstraints = SelectionConstraints(),
    *,
    staple_mode: str = STAPLE_MODE_ONE_EACH,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
    allow_partial_span: bool = False,
) -> list[Level]:
    """All levels for the table's age span, one per age.

    The default contract is exactly 96 levels; a table spanning a different
    number of ages is rejected unless allow_partial_span is set.
    """
    if table.age_count != LEVEL_COUNT and not allow_partial_span:
        raise ValidationError(
            f"requirement table spans {table.age_count} ages, expected {LEVEL_COUNT}; "
            "pass allow_partial_span=True to generate anyway"
        )
    levels = []
    for level_number in range(1, table.age_count + 1):
        age = table.age_min + level_number - 1
        seed = derive_level_seed(master_seed, level_number)
        levels.append(
            generate_level(
                catalog, table, age, seed, constraints,
                staple_mode=staple_mode, max_resamples=max_resamples,
            )
        )
    return levels


def level_to_dict(level: Level) -> dict:
    """Wire format shared by the CLI and the HTTP API."""
    return {
        "level": level.level_number,
        "age": level.age,
        "seed": level.seed,
        "male_target": level.male_target,
        "female_target": level.female_target,
        "windows": [
            {
                "gender": w.gender.value,
                "meal": w.meal.value,
                "item_ids": list(w.item_ids),
            }
            for w in level.windows
        ],
    }


def level_from_dict(payload: dict) -> Level:
    try:
        windows = tuple(
            WindowPool(
                gender=Gender(w["gender"]),
                meal=MealSlot(w["meal"]),
                item_ids=tuple(w["item_ids"]),
            )
            for w in payload["windows"]
        )
        return Level(
            level_number=payload["level"],
            age=payload["age"],
            windows=windows,
            male_target=payload["male_target"],
            female_target=payload["female_target"],
            seed=payload["seed"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed level payload: {exc}") from exc
