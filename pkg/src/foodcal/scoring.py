"""Star scoring, level pass rules, and player profile bookkeeping.

Stars depend only on the absolute deviation of a gender's day total from its
daily target: within 5 kcal earns 3 stars, within 10 earns 2, within 20
earns 1, otherwise none. A level is passed when both genders together reach
the pass threshold (4 of 6 stars by default).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .catalog import Catalog
from .errors import IllegalPickError, ValidationError
from .levelgen import Level
from .requirements import Gender
from .solver import DayPlan, SelectionConstraints

DEFAULT_PASS_THRESHOLD = 4

# (half-width of band, stars awarded), narrowest band first
STAR_BANDS = ((5, 3), (10, 2), (20, 1))


def score_stars(selected_kcal: int, required_kcal: int) -> int:
    """Stars for one gender: 0..3 by absolute kcal deviation."""
    if selected_kcal < 0 or required_kcal < 0:
        raise ValueError("kcal totals must be non-negative")
    deviation = abs(selected_kcal - required_kcal)
    for half_width, stars in STAR_BANDS:
        if deviation <= half_width:
            return stars
    return 0


@dataclass(frozen=True)
class StarAward:
    gender: Gender
    selected_kcal: int
    required_kcal: int
    stars: int


@dataclass(frozen=True)
class LevelResult:
    level_number: int
    male: StarAward
    female: StarAward
    total_stars: int
    passed: bool
    attempt_number: int


@dataclass(frozen=True)
class Submission:
    level_number: int
    male_plan: DayPlan
    female_plan: DayPlan


@dataclass(frozen=True)
class PlayerProfile:
    """Per-player progress; treated as immutable, updates build new values."""

    player_id: str
    levels_tried: frozenset[int] = frozenset()
    levels_passed: frozenset[int] = frozenset()
    attempt_counts: Mapping[int, int] = field(default_factory=dict)
    best_stars: Mapping[int, int] = field(default_factory=dict)


def empty_profile(player_id: str) -> PlayerProfile:
    return PlayerProfile(player_id=player_id)


@dataclass(frozen=True)
class ProfileSummary:
    total_levels: int
    levels_tried: int
    levels_passed: int
    total_attempts: int


def profile_summary(profile: PlayerProfile, total_levels: int) -> ProfileSummary:
    return ProfileSummary(
        total_levels=total_levels,
        levels_tried=len(profile.levels_tried),
        levels_passed=len(profile.levels_passed),
        total_attempts=sum(profile.attempt_counts.values()),
    )


def _validate_plan(
    level: Level, gender: Gender, plan: DayPlan, catalog: Catalog,
    constraints: SelectionConstraints,
) -> int:
    """Check a gender's plan against the level pools; return the day total."""
    c = constraints
    day_total = 0
    for window_pool, choice in zip(level.windows_for(gender), plan.windows):
        label = f"{gender.value} {window_pool.meal.value}"
        n = len(choice.picks)
        if n < c.min_items_per_window or n > c.max_items_per_window:
            raise IllegalPickError(
                f"{label}: {n} items outside "
                f"{c.min_items_per_window}..{c.max_items_per_window}"
            )
        seen: set[str] = set()
        window_total = 0
        for pick in choice.picks:
            if pick.item_id in seen:
                raise IllegalPickError(f"{label}: duplicate item {pick.item_id!r}")
            seen.add(pick.item_id)
            if pick.item_id not in window_pool.item_ids:
                raise IllegalPickError(
                    f"{label}: item {pick.item_id!r} is not in this window's pool"
                )
            if not 1 <= pick.quantity <= c.max_quantity_per_item:
                raise IllegalPickError(
                    f"{label}: quantity {pick.quantity} for {pick.item_id!r} outside "
                    f"1..{c.max_quantity_per_item}"
                )
            window_total += catalog.get(pick.item_id).kcal_per_unit * pick.quantity
        day_total += window_total
    return day_total


def evaluate_submission(
    level: Level,
    submission: Submission,
    profile: PlayerProfile,
    catalog: Catalog,
    constraints: SelectionConstraints = SelectionConstraints(),
    pass_threshold: int = DEFAULT_PASS_THRESHOLD,
) -> tuple[LevelResult, PlayerProfile]:
    """Score a six-window submission and fold it into the profile.

    Totals are recomputed from the catalog; the plans' declared totals are
    not trusted. An illegal pick rejects the submission before any profile
    change, so failed validation never counts as an attempt.
    """
    if submission.level_number != level.level_number:
        raise ValidationError(
            f"submission targets level {submission.level_number}, "
            f"got level {level.level_number}"
        )
    male_total = _validate_plan(level, Gender.MALE, submission.male_plan, catalog, constraints)
    female_total = _validate_plan(level, Gender.FEMALE, submission.female_plan, catalog, constraints)

    male = StarAward(
        gender=Gender.MALE, selected_kcal=male_total,
        required_kcal=level.male_target,
        stars=score_stars(male_total, level.male_target),
    )
    female = StarAward(
        gender=Gender.FEMALE, selected_kcal=female_total,
        required_kcal=level.female_target,
        stars=score_stars(female_total, level.female_target),
    )
    total_stars = male.stars + female.stars
    passed = total_stars >= pass_threshold

    n = level.level_number
    attempts = dict(profile.attempt_counts)
    attempts[n] = attempts.get(n, 0) + 1
    best = dict(profile.best_stars)
    best[n] = max(best.get(n, 0), total_stars)
    updated = PlayerProfile(
        player_id=profile.player_id,
        levels_tried=profile.levels_tried | {n},
        levels_passed=profile.levels_passed | ({n} if passed else frozenset()),
        attempt_counts=attempts,
        best_stars=best,
    )
    result = LevelResult(
        level_number=n, male=male, female=female,
        total_stars=total_stars, passed=passed,
        attempt_number=attempts[n],
    )
    return result, updated


def profile_to_dict(profile: PlayerProfile) -> dict:
    return {
        "player_id": profile.player_id,
        "levels_tried": sorted(profile.levels_tried),
        "levels_passed": sorted(profile.levels_passed),
        "attempt_counts": {str(k): v for k, v in sorted(profile.attempt_counts.items())},
        "best_stars": {str(k): v for k, v in sorted(profile.best_stars.items())},
    }


def profile_from_dict(payload: dict) -> PlayerProfile:
    try:
        return PlayerProfile(
            player_id=payload["player_id"],
            levels_tried=frozenset(payload["levels_tried"]),
            levels_passed=frozenset(payload["levels_passed"]),
            attempt_counts={int(k): v for k, v in payload["attempt_counts"].items()},
            best_stars={int(k): v for k, v in payload["best_stars"].items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed profile payload: {exc}") from exc


def profile_to_json(profile: PlayerProfile) -> str:
    """Canonical serialization: replaying the same submissions yields
    byte-identical output."""
    return json.dumps(profile_to_dict(profile), sort_keys=True, separators=(",", ":"))


def profile_from_json(text: str) -> PlayerProfile:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"profile is not valid JSON: {exc}") from exc
    return profile_from_dict(payload)


def result_to_dict(result: LevelResult) -> dict:
    return {
        "level": result.level_number,
        "male": _award_to_dict(result.male),
        "female": _award_to_dict(result.female),
        "total_stars": result.total_stars,
        "passed": result.passed,
        "attempt_number": result.attempt_number,
    }


def _award_to_dict(award: StarAward) -> dict:
    return {
        "gender": award.gender.value,
        "selected_kcal": award.selected_kcal,
        "required_kcal": award.required_kcal,
        "stars": award.stars,
    }
