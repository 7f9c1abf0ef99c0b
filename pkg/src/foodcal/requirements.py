"""Daily calorie requirement table keyed by (age, gender).

The game target for a level is the mean of the sedentary and moderately
active recommendations for that age and gender, rounded half-up to a whole
kilocalorie. The shipped table is synthetic but plausible; any table with
the same schema can replace it via ``FOODCAL_REQS`` or an explicit path.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import AgeOutOfRangeError, CoverageError, ParseError, ValidationError

REQUIREMENTS_ENV_VAR = "FOODCAL_REQS"

DEFAULT_AGE_MIN = 3
DEFAULT_AGE_MAX = 98


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"


@dataclass(frozen=True)
class RequirementRow:
    age: int
    gender: Gender
    sedentary_kcal: int
    moderate_kcal: int


@dataclass(frozen=True)
class CalorieRequirementTable:
    """One row per (age, gender) over a contiguous age span."""

    rows: dict[tuple[int, Gender], RequirementRow]
    age_min: int
    age_max: int

    @property
    def age_count(self) -> int:
        return self.age_max - self.age_min + 1

    def row(self, age: int, gender: Gender) -> RequirementRow:
        if age < self.age_min or age > self.age_max:
            raise AgeOutOfRangeError(
                f"age {age} outside table span {self.age_min}..{self.age_max}"
            )
        return self.rows[(age, gender)]


def daily_target(table: CalorieRequirementTable, age: int, gender: Gender) -> int:
    """Game target: mean of sedentary and moderate kcal, rounded half-up."""
    row = table.row(age, gender)
    return (row.sedentary_kcal + row.moderate_kcal + 1) // 2


def build_table(rows: list[RequirementRow]) -> CalorieRequirementTable:
    """Assemble and validate a table from rows; span is inferred from the data."""
    if not rows:
        raise ValidationError("requirement table has no rows")
    by_key: dict[tuple[int, Gender], RequirementRow] = {}
    for row in rows:
        key = (row.age, row.gender)
        if key in by_key:
            raise ValidationError(f"duplicate row for age {row.age} {row.gender.value}")
        if row.sedentary_kcal < 1 or row.moderate_kcal < 1:
            raise ValidationError(
                f"row age {row.age} {row.gender.value}: kcal values must be positive"
            )
        if row.moderate_kcal < row.sedentary_kcal:
            raise ValidationError(
                f"row age {row.age} {row.gender.value}: moderate_kcal "
                f"{row.moderate_kcal} < sedentary_kcal {row.sedentary_kcal}"
            )
        by_key[key] = row
    age_min = min(age for age, _ in by_key)
    age_max = max(age for age, _ in by_key)
    missing = [
        f"{gender.value} age {age} missing"
        for age in range(age_min, age_max + 1)
        for gender in Gender
        if (age, gender) not in by_key
    ]
    if missing:
        raise CoverageError("; ".join(missing))
    return CalorieRequirementTable(rows=by_key, age_min=age_min, age_max=age_max)


def default_requirements_path() -> Path:
    override = os.environ.get(REQUIREMENTS_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("foodcal").joinpath("data/requirements.json")))


def load_requirement_table(path: Union[str, Path, None] = None) -> CalorieRequirementTable:
    """Load a requirement table; coverage holes inside the span are fatal."""
    resolved = Path(path) if path is not None else default_requirements_path()
    try:
        raw = json.loads(resolved.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read requirement table {resolved}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"requirement table {resolved} is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"requirement table {resolved} must contain a JSON array")
    rows = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ParseError(f"row #{i}: expected an object")
        try:
            age = entry["age"]
            gender = entry["gender"]
            sed = entry["sedentary_kcal"]
            mod = entry["moderate_kcal"]
        except KeyError as exc:
            raise ParseError(f"row #{i}: missing field {exc.args[0]!r}") from None
        try:
            parsed_gender = Gender(gender)
        except ValueError:
            raise ParseError(f"row #{i}: unknown gender {gender!r}") from None
        for label, value in (("age", age), ("sedentary_kcal", sed), ("moderate_kcal", mod)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(f"row #{i}: {label} must be an integer")
        rows.append(
            RequirementRow(age=age, gender=parsed_gender, sedentary_kcal=sed, moderate_kcal=mod)
        )
    return build_table(rows)
