"""Food catalog: items, categories, measurement units, and kcal values.

The default catalog ships as a JSON data file. Calorie values in it are
configuration, not ground truth; any file with the same schema can be
swapped in via ``FOODCAL_CATALOG`` or an explicit path.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import ParseError, ValidationError

CATALOG_ENV_VAR = "FOODCAL_CATALOG"


class FoodCategory(str, Enum):
    RICE = "rice"
    BREAD = "bread"
    CURRY = "curry"
    FRUIT = "fruit"
    DESSERT = "dessert"
    DAIRY = "dairy"
    OTHER = "other"


class MeasurementUnit(str, Enum):
    GRAMS_100 = "g100"
    PIECE = "piece"
    GLASS = "glass"
    CUP = "cup"


# Item counts the shipped catalog must satisfy in strict mode.
EXPECTED_TOTAL_ITEMS = 72
EXPECTED_CATEGORY_COUNTS = {
    FoodCategory.RICE: 8,
    FoodCategory.BREAD: 5,
    FoodCategory.CURRY: 32,
    FoodCategory.FRUIT: 11,
    FoodCategory.DESSERT: 6,
    FoodCategory.DAIRY: 4,
    FoodCategory.OTHER: 6,
}


@dataclass(frozen=True)
class FoodItem:
    id: str
    name: str
    category: FoodCategory
    unit: MeasurementUnit
    kcal_per_unit: int


@dataclass(frozen=True)
class Catalog:
    """Immutable, ordered collection of food items."""

    items: tuple[FoodItem, ...]
    source_version: str = ""
    _by_id: dict[str, FoodItem] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {item.id: item for item in self.items})

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._by_id

    def get(self, item_id: str) -> FoodItem:
        try:
            return self._by_id[item_id]
        except KeyError:
            raise KeyError(f"unknown food item id {item_id!r}") from None


def items_by_category(catalog: Catalog, category: FoodCategory) -> list[FoodItem]:
    """All items of one category, in catalog order."""
    return [item for item in catalog.items if item.category == category]


def validate_catalog(catalog: Catalog, strict: bool = True) -> list[str]:
    """Return violation descriptions; an empty list means the catalog is valid.

    Lenient mode (custom catalogs) enforces only id uniqueness and positive
    kcal values; strict mode additionally pins the shipped item counts.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for item in catalog.items:
        if item.id in seen:
            violations.append(f"duplicate item id {item.id!r}")
        seen.add(item.id)
        if item.kcal_per_unit < 1:
            violations.append(
                f"item {item.id!r} has non-positive kcal_per_unit {item.kcal_per_unit}"
            )
    if strict:
        if len(catalog.items) != EXPECTED_TOTAL_ITEMS:
            violations.append(
                f"item count {len(catalog.items)} != {EXPECTED_TOTAL_ITEMS}"
            )
        for category, expected in EXPECTED_CATEGORY_COUNTS.items():
            actual = sum(1 for item in catalog.items if item.category == category)
            if actual != expected:
                violations.append(
                    f"{category.name.title()} count {actual} != {expected}"
                )
    return violations


def default_catalog_path() -> Path:
    """Shipped catalog file, unless ``FOODCAL_CATALOG`` points elsewhere."""
    override = os.environ.get(CATALOG_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("foodcal").joinpath("data/catalog.json")))


def _parse_item(raw: object, index: int) -> FoodItem:
    if not isinstance(raw, dict):
        raise ParseError(f"item #{index}: expected an object, got {type(raw).__name__}")
    try:
        item_id = raw["id"]
        name = raw["name"]
        category = raw["category"]
        unit = raw["unit"]
        kcal = raw["kcal_per_unit"]
    except KeyError as exc:
        raise ParseError(f"item #{index}: missing field {exc.args[0]!r}") from None
    if not isinstance(item_id, str) or not item_id:
        raise ParseError(f"item #{index}: id must be a non-empty string")
    try:
        cat = FoodCategory(category)
    except ValueError:
        raise ParseError(f"item {item_id!r}: unknown category {category!r}") from None
    try:
        parsed_unit = MeasurementUnit(unit)
    except ValueError:
        raise ParseError(f"item {item_id!r}: unknown unit {unit!r}") from None
    if not isinstance(kcal, int) or isinstance(kcal, bool):
        raise ParseError(f"item {item_id!r}: kcal_per_unit must be an integer")
    return FoodItem(id=item_id, name=str(name), category=cat, unit=parsed_unit, kcal_per_unit=kcal)


def load_catalog(path: Union[str, Path, None] = None, strict: bool | None = None) -> Catalog:
    """Load and validate a catalog file.

    With no path the shipped default is loaded in strict mode; explicit
    paths (and the env override) default to lenient validation.
    """
    if strict is None:
        strict = path is None and CATALOG_ENV_VAR not in os.environ
    resolved = Path(path) if path is not None else default_catalog_path()
    try:
        raw = json.loads(resolved.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read catalog file {resolved}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"catalog file {resolved} is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"catalog file {resolved} must contain a JSON array")
    items = tuple(_parse_item(entry, i) for i, entry in enumerate(raw))
    catalog = Catalog(items=items, source_version=str(resolved))
    violations = validate_catalog(catalog, strict=strict)
    if violations:
        raise ValidationError("; ".join(violations))
    return catalog


def catalog_to_dicts(catalog: Catalog) -> list[dict]:
    """Wire representation used by the API and the debug writer."""
    return [
        {
            "id": item.id,
            "name": item.name,
            "category": item.category.value,
            "unit": item.unit.value,
            "kcal_per_unit": item.kcal_per_unit,
        }
        for item in catalog.items
    ]


def save_catalog(catalog: Catalog, path: Union[str, Path]) -> None:
    """Debug writer; loading the written file preserves the item list."""
    Path(path).write_text(
        json.dumps(catalog_to_dicts(catalog), indent=2) + "\n", encoding="utf-8"
    )
