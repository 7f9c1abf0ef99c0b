"""Study analytics: descriptive statistics, the pooled two-sample t-test,
and group-level knowledge-enhancement and attempt summaries.

The two-tailed p-value comes from the Student t distribution evaluated
through the regularized incomplete beta function, implemented here with the
standard continued-fraction expansion so the package needs no numeric
dependencies.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

from .errors import ParseError, PerfectSeparationError, SampleTooSmallError, ValidationError

PROFESSIONS = ("student", "doctor", "service_holder", "teacher", "housewife")
PROFICIENCIES = ("beginner", "intermediate", "expert")
STUDY_LEVELS = (5, 20, 35, 46, 65)

GROUP_KEYS = ("profession", "proficiency", "age_bucket")


@dataclass(frozen=True)
class StudyRecord:
    participant_id: str
    age: int
    profession: str
    proficiency: str
    pre_score: float
    post_score: float
    attempts_per_level: Mapping[int, int]

    @property
    def total_attempts(self) -> int:
        return sum(self.attempts_per_level.values())


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    sd: float
    variance: float


@dataclass(frozen=True)
class StudySummary:
    mean_pre: float
    mean_post: float
    sd_pre: float
    sd_post: float
    var_pre: float
    var_post: float
    t_value: float
    degrees_of_freedom: int
    p_value_two_tailed: float


@dataclass(frozen=True)
class GroupEnhancement:
    mean_pre_pct: float
    mean_post_pct: float
    delta_pct: float


def descriptive_stats(sample: Sequence[float]) -> DescriptiveStats:
    """Sample mean, standard deviation, and variance (n - 1 denominator)."""
    if len(sample) < 2:
        raise SampleTooSmallError(f"need at least 2 observations, got {len(sample)}")
    variance = statistics.variance(sample)
    return DescriptiveStats(mean=statistics.mean(sample), sd=math.sqrt(variance), variance=variance)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz evaluation."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x < 0 or x > 1:
        raise ValueError("x must lie in [0, 1]")
    if x == 0:
        return 0.0
    if x == 1:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_p_value_two_tailed(t: float, df: int) -> float:
    """Two-tailed tail mass of the Student t distribution."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def pooled_t_test(a: Sequence[float], b: Sequence[float]) -> StudySummary:
    """Student's pooled (equal-variance) two-sample t-test, two-tailed.

    t is signed as (mean(b) - mean(a)) / se, so a positive value means the
    second sample scored higher.
    """
    if len(a) < 2 or len(b) < 2:
        raise SampleTooSmallError("both samples need at least 2 observations")
    stats_a = descriptive_stats(a)
    stats_b = descriptive_stats(b)
    n1, n2 = len(a), len(b)
    df = n1 + n2 - 2
    pooled_var = ((n1 - 1) * stats_a.variance + (n2 - 1) * stats_b.variance) / df
    diff = stats_b.mean - stats_a.mean
    if pooled_var == 0.0:
        if diff == 0.0:
            t = 0.0
        else:
            raise PerfectSeparationError(
                "zero pooled variance with distinct means; t is undefined"
            )
    else:
        t = diff / math.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    return StudySummary(
        mean_pre=stats_a.mean, mean_post=stats_b.mean,
        sd_pre=stats_a.sd, sd_post=stats_b.sd,
        var_pre=stats_a.variance, var_post=stats_b.variance,
        t_value=t, degrees_of_freedom=df,
        p_value_two_tailed=t_p_value_two_tailed(t, df),
    )


def age_bucket(age: int) -> str:
    if age < 20:
        return "under-20"
    if age < 30:
        return "20-30"
    if age < 40:
        return "30-40"
    if age < 50:
        return "40-50"
    return "50+"


def _group_fn(key: str) -> Callable[[StudyRecord], str]:
    if key == "profession":
        return lambda r: r.profession
    if key == "proficiency":
        return lambda r: r.proficiency
    if key == "age_bucket":
        return lambda r: age_bucket(r.age)
    raise ValueError(f"unknown group key {key!r}; expected one of {GROUP_KEYS}")


def _grouped(records: Sequence[StudyRecord], key: str) -> dict[str, list[StudyRecord]]:
    fn = _group_fn(key)
    groups: dict[str, list[StudyRecord]] = {}
    for record in records:
        groups.setdefault(fn(record), []).append(record)
    return groups


def group_enhancement(records: Sequence[StudyRecord], key: str) -> dict[str, GroupEnhancement]:
    """Per-group mean pre/post percentages and their delta."""
    if not records:
        raise ValueError("no records")
    out = {}
    for group, members in _grouped(records, key).items():
        pre = 100.0 * sum(r.pre_score for r in members) / len(members)
        post = 100.0 * sum(r.post_score for r in members) / len(members)
        out[group] = GroupEnhancement(mean_pre_pct=pre, mean_post_pct=post, delta_pct=post - pre)
    return out


def average_attempts(records: Sequence[StudyRecord], key: str) -> dict[str, float]:
    """Per-group mean of each member's total attempts over the study levels."""
    if not records:
        raise ValueError("no records")
    return {
        group: sum(r.total_attempts for r in members) / len(members)
        for group, members in _grouped(records, key).items()
    }


def default_study_fixture_path() -> Path:
    return Path(str(resources.files("foodcal").joinpath("data/study_fixture.csv")))


_CSV_COLUMNS = (
    "participant_id", "age", "profession", "proficiency", "pre_score", "post_score",
    *(f"attempts_l{level}" for level in STUDY_LEVELS),
)


def load_study_csv(path: Union[str, Path, None] = None) -> list[StudyRecord]:
    resolved = Path(path) if path is not None else default_study_fixture_path()
    try:
        with open(resolved, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise ParseError(f"{resolved}: empty CSV")
            missing = set(_CSV_COLUMNS) - set(reader.fieldnames)
            if missing:
                raise ParseError(f"{resolved}: missing columns {sorted(missing)}")
            rows = list(reader)
    except OSError as exc:
        raise ParseError(f"cannot read study CSV {resolved}: {exc}") from exc
    records = []
    for i, row in enumerate(rows):
        try:
            record = StudyRecord(
                participant_id=row["participant_id"],
                age=int(row["age"]),
                profession=row["profession"],
                proficiency=row["proficiency"],
                pre_score=float(row["pre_score"]),
                post_score=float(row["post_score"]),
                attempts_per_level={
                    level: int(row[f"attempts_l{level}"]) for level in STUDY_LEVELS
                },
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{resolved} row #{i + 1}: {exc}") from exc
        if record.profession not in PROFESSIONS:
            raise ValidationError(f"row #{i + 1}: unknown profession {record.profession!r}")
        if record.proficiency not in PROFICIENCIES:
            raise ValidationError(f"row #{i + 1}: unknown proficiency {record.proficiency!r}")
        if not 0.0 <= record.pre_score <= 1.0 or not 0.0 <= record.post_score <= 1.0:
            raise ValidationError(f"row #{i + 1}: scores must lie in [0, 1]")
        if any(v < 0 for v in record.attempts_per_level.values()):
            raise ValidationError(f"row #{i + 1}: attempts must be non-negative")
        records.append(record)
    return records


def summarize_study(records: Sequence[StudyRecord]) -> StudySummary:
    pre = [r.pre_score for r in records]
    post = [r.post_score for r in records]
    return pooled_t_test(pre, post)


def render_report(records: Sequence[StudyRecord]) -> str:
    """Plain-text study report: the t-test summary plus group breakdowns."""
    summary = summarize_study(records)
    lines = [
        "Pre/post knowledge test summary",
        "=" * 47,
        f"{'Values':<28}{'Pre-test':>9}{'Post-test':>10}",
        "-" * 47,
        f"{'Mean (M)':<28}{summary.mean_pre:>9.4f}{summary.mean_post:>10.4f}",
        f"{'Standard Deviation (SD)':<28}{summary.sd_pre:>9.6f}{summary.sd_post:>10.6f}",
        f"{'Variance (V)':<28}{summary.var_pre:>9.6f}{summary.var_post:>10.6f}",
        "-" * 47,
        f"t-value (two-tailed): {summary.t_value:.4f}",
        f"degrees of freedom:   {summary.degrees_of_freedom}",
        f"p-value:              {summary.p_value_two_tailed:.6g}",
        "",
    ]
    for key, title in (
        ("profession", "Knowledge enhancement by profession"),
        ("proficiency", "Knowledge enhancement by smartphone proficiency"),
        ("age_bucket", "Knowledge enhancement by age group"),
    ):
        lines.append(title)
        lines.append("-" * 47)
        enhancement = group_enhancement(records, key)
        for group in sorted(enhancement):
            e = enhancement[group]
            lines.append(
                f"  {group:<16} pre {e.mean_pre_pct:6.2f}%  post {e.mean_post_pct:6.2f}%  "
                f"delta {e.delta_pct:+6.2f}%"
            )
        lines.append("")
    for key, title in (
        ("profession", "Average attempts by profession"),
        ("proficiency", "Average attempts by smartphone proficiency"),
    ):
        lines.append(title)
        lines.append("-" * 47)
        attempts = average_attempts(records, key)
        for group in sorted(attempts):
            lines.append(f"  {group:<16} {attempts[group]:.2f}")
        lines.append("")
    return "\n".join(lines)


def write_plots(records: Sequence[StudyRecord], out_dir: Union[str, Path]) -> list[Path]:
    """SVG bar charts of group enhancements and attempts; needs matplotlib."""
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for key in ("profession", "proficiency", "age_bucket"):
        enhancement = group_enhancement(records, key)
        groups = sorted(enhancement)
        fig, ax = plt.subplots(figsize=(7, 4))
        xs = range(len(groups))
        width = 0.38
        ax.bar([x - width / 2 for x in xs], [enhancement[g].mean_pre_pct for g in groups],
               width, label="pre-test")
        ax.bar([x + width / 2 for x in xs], [enhancement[g].mean_post_pct for g in groups],
               width, label="post-test")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(groups, rotation=20, ha="right")
        ax.set_ylabel("mean score (%)")
        ax.set_title(f"Knowledge enhancement by {key.replace('_', ' ')}")
        ax.legend()
        fig.tight_layout()
        path = out / f"enhancement_{key}.svg"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    for key in ("profession", "proficiency"):
        attempts = average_attempts(records, key)
        groups = sorted(attempts)
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.bar(range(len(groups)), [attempts[g] for g in groups])
        ax.set_xticks(range(len(groups)))
        ax.set_xticklabels(groups, rotation=20, ha="right")
        ax.set_ylabel("average attempts (5 study levels)")
        ax.set_title(f"Average attempts by {key.replace('_', ' ')}")
        fig.tight_layout()
        path = out / f"attempts_{key}.svg"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written
