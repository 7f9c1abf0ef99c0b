import json

import pytest

from foodcal.errors import AgeOutOfRangeError, CoverageError, ParseError, ValidationError
from foodcal.requirements import (
    CalorieRequirementTable,
    Gender,
    RequirementRow,
    build_table,
    daily_target,
    load_requirement_table,
)


def table_of(rows):
    return build_table(rows)


def row(age, gender, sed, mod):
    return RequirementRow(age=age, gender=gender, sedentary_kcal=sed, moderate_kcal=mod)


def minimal_table(sed=1800, mod=2000):
    return table_of([row(30, g, sed, mod) for g in Gender])


def test_target_is_mean_of_levels():
    assert daily_target(minimal_table(1800, 2000), 30, Gender.MALE) == 1900


def test_target_rounds_half_up():
    assert daily_target(minimal_table(2001, 2002), 30, Gender.FEMALE) == 2002


def test_target_between_endpoints(default_table):
    for (age, gender), r in default_table.rows.items():
        target = daily_target(default_table, age, gender)
        assert r.sedentary_kcal <= target <= r.moderate_kcal


def test_age_below_span_raises(default_table):
    with pytest.raises(AgeOutOfRangeError):
        daily_target(default_table, 2, Gender.MALE)


def test_age_above_span_raises(default_table):
    with pytest.raises(AgeOutOfRangeError):
        daily_target(default_table, 99, Gender.FEMALE)


def test_default_table_covers_96_ages_both_genders(default_table):
    assert default_table.age_min == 3
    assert default_table.age_max == 98
    assert len(default_table.rows) == (98 - 3 + 1) * 2 == 192
    for age in range(3, 99):
        for gender in Gender:
            assert (age, gender) in default_table.rows


def test_missing_pair_is_coverage_error():
    rows = [
        row(age, gender, 1000, 1200)
        for age in (39, 40, 41)
        for gender in Gender
        if not (age == 40 and gender is Gender.FEMALE)
    ]
    with pytest.raises(CoverageError, match="female age 40 missing"):
        table_of(rows)


def test_moderate_below_sedentary_is_validation_error():
    with pytest.raises(ValidationError, match="age 30 male"):
        table_of([row(30, Gender.MALE, 2000, 1900), row(30, Gender.FEMALE, 1800, 1900)])


def test_duplicate_row_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        table_of([row(30, Gender.MALE, 1000, 1100)] * 2 + [row(30, Gender.FEMALE, 1000, 1100)])


def test_changing_one_row_changes_exactly_one_target(default_table):
    rows = dict(default_table.rows)
    key = (40, Gender.FEMALE)
    old = rows[key]
    rows[key] = row(40, Gender.FEMALE, old.sedentary_kcal + 2, old.moderate_kcal + 2)
    altered = CalorieRequirementTable(
        rows=rows, age_min=default_table.age_min, age_max=default_table.age_max
    )
    changed = [
        (age, gender)
        for age in range(3, 99)
        for gender in Gender
        if daily_target(altered, age, gender) != daily_target(default_table, age, gender)
    ]
    assert changed == [key]


def test_load_rejects_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("[{]")
    with pytest.raises(ParseError):
        load_requirement_table(path)


def test_load_rejects_unknown_gender(tmp_path):
    path = tmp_path / "weird.json"
    path.write_text(json.dumps(
        [{"age": 30, "gender": "person", "sedentary_kcal": 1, "moderate_kcal": 2}]
    ))
    with pytest.raises(ParseError, match="person"):
        load_requirement_table(path)


def test_env_override(tmp_path, monkeypatch):
    path = tmp_path / "two_rows.json"
    path.write_text(json.dumps([
        {"age": 50, "gender": "male", "sedentary_kcal": 2000, "moderate_kcal": 2200},
        {"age": 50, "gender": "female", "sedentary_kcal": 1700, "moderate_kcal": 1900},
    ]))
    monkeypatch.setenv("FOODCAL_REQS", str(path))
    table = load_requirement_table()
    assert table.age_min == table.age_max == 50
    assert daily_target(table, 50, Gender.MALE) == 2100
