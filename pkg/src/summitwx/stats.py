"""Perceived-risk study pipeline: aggregation, ANOVA, post-hoc, regression.

Input is one response row per (participant, forecast) with six activity
ratings on a 0-100 scale, joined against a participant table carrying the
layout condition, a risk-propensity (GRIPS) score, and two free-text coding
flags. Analysis follows the between-subjects shape: responses aggregate to
one mean risk value per participant before any inference, so ANOVA degrees
of freedom are (groups - 1, participants - groups).

All statistics are computed from explicit sums of squares here, with tail
probabilities from :mod:`.distributions`; nothing defers to an external
statistics library. Missing or out-of-range data is a hard error, never
imputed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

from .distributions import f_sf, t_ppf, t_two_sided_p
from .layout import LayoutCondition, condition_from_token

#: Rated activities, in the fixed column order of the response file.
ACTIVITIES = (
    "car_trip",
    "day_hike",
    "mountaineering",
    "backcountry_skiing",
    "single_night_camping",
    "multi_night_camping",
)

RATING_MIN = 0.0
RATING_MAX = 100.0


class StudyDataError(ValueError):
    """Response or participant data violates the documented schema."""


@dataclass(frozen=True)
class ResponseRecord:
    """One participant's ratings for one forecast, with participant metadata."""

    participant_id: str
    condition: LayoutCondition
    forecast_id: str
    activity_ratings: tuple[float, ...]
    grips_score: float
    mentioned_per_day_info: bool
    mentioned_summary_only_info: bool


def _check_ratings(record: ResponseRecord) -> None:
    if len(record.activity_ratings) != len(ACTIVITIES):
        raise StudyDataError(
            f"participant {record.participant_id!r}, forecast {record.forecast_id!r}: "
            f"expected {len(ACTIVITIES)} ratings, found {len(record.activity_ratings)}"
        )
    for name, value in zip(ACTIVITIES, record.activity_ratings):
        if math.isnan(value) or not RATING_MIN <= value <= RATING_MAX:
            raise StudyDataError(
                f"participant {record.participant_id!r}, forecast {record.forecast_id!r}: "
                f"{name} rating {value} outside [{RATING_MIN:g}, {RATING_MAX:g}]"
            )


def aggregate_risk(record: ResponseRecord) -> float:
    """Sum of the six activity ratings: 0 (all safe) to 600 (all maximal)."""
    _check_ratings(record)
    return sum(record.activity_ratings)


def participant_mean_risk(records: Sequence[ResponseRecord]) -> float:
    """Mean aggregate risk over one participant's forecasts."""
    if not records:
        raise StudyDataError("no records for participant")
    ids = {r.participant_id for r in records}
    if len(ids) != 1:
        raise StudyDataError(f"records span multiple participants: {sorted(ids)}")
    return sum(aggregate_risk(r) for r in records) / len(records)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _sample_sd(values: Sequence[float]) -> float:
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / (len(values) - 1))


@dataclass(frozen=True)
class AnovaResult:
    f_statistic: float
    df_between: int
    df_within: int
    p_value: float


def one_way_anova(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way between-groups ANOVA from explicit sums of squares."""
    if len(groups) < 2:
        raise StudyDataError(f"ANOVA needs at least 2 groups, found {len(groups)}")
    for i, g in enumerate(groups):
        if len(g) < 2:
            raise StudyDataError(f"ANOVA group {i + 1} needs at least 2 values, found {len(g)}")
    all_values = [v for g in groups for v in g]
    n_total = len(all_values)
    grand = _mean(all_values)
    ss_between = sum(len(g) * (_mean(g) - grand) ** 2 for g in groups)
    ss_within = sum((v - _mean(g)) ** 2 for g in groups for v in g)
    df_between = len(groups) - 1
    df_within = n_total - len(groups)
    if ss_between == 0.0:
        return AnovaResult(0.0, df_between, df_within, 1.0)
    if ss_within == 0.0:
        return AnovaResult(math.inf, df_between, df_within, 0.0)
    f = (ss_between / df_between) / (ss_within / df_within)
    return AnovaResult(f, df_between, df_within, f_sf(f, df_between, df_within))


@dataclass(frozen=True)
class PairwiseResult:
    group_a: str
    group_b: str
    t_statistic: float
    df: int
    p_raw: float
    p_adjusted: float


def pairwise_t_tests(
    groups: Sequence[tuple[str, Sequence[float]]],
    correction_count: int | None = None,
) -> tuple[PairwiseResult, ...]:
    """Pooled-variance two-sample t test for every group pair.

    Groups are between-subjects, so the comparison is independent-samples.
    ``correction_count`` is the Bonferroni multiplier; it defaults to the
    number of pairs tested here, but callers running a wider family of
    comparisons should pass that family's size.
    """
    if len(groups) < 2:
        raise StudyDataError(f"pairwise tests need at least 2 groups, found {len(groups)}")
    for name, values in groups:
        if len(values) < 2:
            raise StudyDataError(f"group {name!r} needs at least 2 values, found {len(values)}")
    pairs = [
        (groups[i], groups[j])
        for i in range(len(groups))
        for j in range(i + 1, len(groups))
    ]
    m = correction_count if correction_count is not None else len(pairs)
    if m < 1:
        raise StudyDataError(f"correction count must be >= 1, got {m}")
    out = []
    for (name_a, a), (name_b, b) in pairs:
        n_a, n_b = len(a), len(b)
        df = n_a + n_b - 2
        diff = _mean(a) - _mean(b)
        pooled = (
            sum((v - _mean(a)) ** 2 for v in a) + sum((v - _mean(b)) ** 2 for v in b)
        ) / df
        if diff == 0.0:
            t = 0.0
            p = 1.0
        elif pooled == 0.0:
            t = math.copysign(math.inf, diff)
            p = 0.0
        else:
            t = diff / math.sqrt(pooled * (1.0 / n_a + 1.0 / n_b))
            p = t_two_sided_p(t, df)
        out.append(PairwiseResult(name_a, name_b, t, df, p, min(1.0, p * m)))
    return tuple(out)


def t_ci95(values: Sequence[float]) -> tuple[float, float]:
    """95% t confidence interval for the mean."""
    n = len(values)
    if n < 2:
        raise StudyDataError(f"confidence interval needs at least 2 values, found {n}")
    m = _mean(values)
    sd = _sample_sd(values)
    if sd == 0.0:
        return (m, m)
    half = t_ppf(0.975, n - 1) * sd / math.sqrt(n)
    return (m - half, m + half)


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    p_value: float


def grips_regression(pairs: Sequence[tuple[float, float]]) -> RegressionResult:
    """Least-squares regression of mean risk on risk propensity.

    Returns the slope, R squared (the squared correlation), and the slope's
    two-sided t-test p-value. A zero-variance predictor is rejected; a
    constant response gives a flat line with R squared 0 and p 1.
    """
    n = len(pairs)
    if n < 3:
        raise StudyDataError(f"regression needs at least 3 pairs, found {n}")
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    mx, my = _mean(xs), _mean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    if sxx == 0.0:
        raise StudyDataError("predictor has zero variance; slope is undefined")
    slope = sxy / sxx
    intercept = my - slope * mx
    if syy == 0.0:
        return RegressionResult(slope, intercept, 0.0, 1.0)
    ss_res = syy - slope * sxy
    r_squared = 1.0 - ss_res / syy
    df = n - 2
    if ss_res <= 0.0:
        return RegressionResult(slope, intercept, 1.0, 0.0)
    se = math.sqrt(ss_res / df / sxx)
    t = slope / se
    return RegressionResult(slope, intercept, r_squared, t_two_sided_p(t, df))


def percentage(count: int, total: int) -> str:
    """Percentage at two decimals, ties rounding up (124/128 -> '96.88')."""
    if total <= 0:
        raise StudyDataError(f"percentage of empty total: {count}/{total}")
    value = Decimal(count) * Decimal(100) / Decimal(total)
    return str(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class CodingCell:
    scope: str  # "overall" or a condition value
    count: int
    total: int
    percent: str


@dataclass(frozen=True)
class CodingTable:
    per_day: tuple[CodingCell, ...]
    summary_only: tuple[CodingCell, ...]


@dataclass(frozen=True)
class GroupSummary:
    condition: LayoutCondition
    n: int
    mean: float
    sd: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class StatsReport:
    groups: tuple[GroupSummary, ...]
    anova: AnovaResult
    pairwise: tuple[PairwiseResult, ...]
    regression: RegressionResult
    coding: CodingTable


@dataclass(frozen=True)
class _Participant:
    participant_id: str
    condition: LayoutCondition
    grips_score: float
    mentioned_per_day_info: bool
    mentioned_summary_only_info: bool
    mean_risk: float


def _collect_participants(records: Sequence[ResponseRecord]) -> list[_Participant]:
    if not records:
        raise StudyDataError("no records")
    by_participant: dict[str, list[ResponseRecord]] = {}
    for record in records:
        by_participant.setdefault(record.participant_id, []).append(record)
    out = []
    for pid, rows in by_participant.items():
        for field in ("condition", "grips_score", "mentioned_per_day_info",
                      "mentioned_summary_only_info"):
            if len({getattr(r, field) for r in rows}) != 1:
                raise StudyDataError(f"participant {pid!r}: {field} varies across records")
        first = rows[0]
        out.append(
            _Participant(
                participant_id=pid,
                condition=first.condition,
                grips_score=first.grips_score,
                mentioned_per_day_info=first.mentioned_per_day_info,
                mentioned_summary_only_info=first.mentioned_summary_only_info,
                mean_risk=participant_mean_risk(rows),
            )
        )
    return out


def _coding_cells(participants: list[_Participant], flag: str,
                  conditions: list[LayoutCondition]) -> tuple[CodingCell, ...]:
    cells = [
        CodingCell(
            scope="overall",
            count=sum(1 for p in participants if getattr(p, flag)),
            total=len(participants),
            percent=percentage(
                sum(1 for p in participants if getattr(p, flag)), len(participants)
            ),
        )
    ]
    for condition in conditions:
        members = [p for p in participants if p.condition is condition]
        count = sum(1 for p in members if getattr(p, flag))
        cells.append(
            CodingCell(
                scope=condition.value,
                count=count,
                total=len(members),
                percent=percentage(count, len(members)),
            )
        )
    return tuple(cells)


def build_report(
    records: Sequence[ResponseRecord],
    correction_count: int | None = None,
) -> StatsReport:
    """Run the full analysis over joined response records."""
    participants = _collect_participants(records)
    conditions = [c for c in LayoutCondition if any(p.condition is c for p in participants)]
    if len(conditions) < 2:
        raise StudyDataError(
            f"analysis needs at least 2 conditions, found {len(conditions)}"
        )
    values_by_condition = {
        c: [p.mean_risk for p in participants if p.condition is c] for c in conditions
    }

    groups = []
    for c in conditions:
        values = values_by_condition[c]
        if len(values) < 2:
            raise StudyDataError(f"condition {c.value!r} has fewer than 2 participants")
        low, high = t_ci95(values)
        groups.append(
            GroupSummary(
                condition=c,
                n=len(values),
                mean=_mean(values),
                sd=_sample_sd(values),
                ci_low=low,
                ci_high=high,
            )
        )

    anova = one_way_anova([values_by_condition[c] for c in conditions])
    pairwise = pairwise_t_tests(
        [(c.value, values_by_condition[c]) for c in conditions],
        correction_count=correction_count,
    )
    regression = grips_regression([(p.grips_score, p.mean_risk) for p in participants])
    coding = CodingTable(
        per_day=_coding_cells(participants, "mentioned_per_day_info", conditions),
        summary_only=_coding_cells(participants, "mentioned_summary_only_info", conditions),
    )
    return StatsReport(
        groups=tuple(groups),
        anova=anova,
        pairwise=pairwise,
        regression=regression,
        coding=coding,
    )


def _fmt2(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _fmt_stat(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return str(Decimal(repr(x)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def _fmt_p(p: float) -> str:
    if p >= 0.00005:
        text = f"{p:.4f}".rstrip("0")
        return text + "0" if text.endswith(".") else text
    return f"{p:.2e}"


def format_report(report: StatsReport) -> str:
    """Human-readable report text."""
    lines = ["Perceived-risk study report", ""]
    lines.append("Per-participant mean aggregate risk (0-600 scale):")
    for g in report.groups:
        lines.append(
            f"  {g.condition.value:<14} n={g.n:<4} M={_fmt2(g.mean):<8} SD={_fmt2(g.sd):<8} "
            f"95% CI [{_fmt2(g.ci_low)}, {_fmt2(g.ci_high)}]"
        )
    a = report.anova
    lines.append("")
    lines.append(
        f"One-way ANOVA: F({a.df_between}, {a.df_within}) = {_fmt_stat(a.f_statistic)}, "
        f"p = {_fmt_p(a.p_value)}"
    )
    lines.append("")
    lines.append(f"Pairwise comparisons (Bonferroni multiplier {len(report.pairwise)}):")
    for pw in report.pairwise:
        lines.append(
            f"  {pw.group_a} vs {pw.group_b}: t({pw.df}) = {_fmt_stat(pw.t_statistic)}, "
            f"raw p = {_fmt_p(pw.p_raw)}, adjusted p = {_fmt_p(pw.p_adjusted)}"
        )
    r = report.regression
    lines.append("")
    lines.append(
        f"Risk propensity regression: slope = {_fmt_stat(r.slope)}, "
        f"R^2 = {_fmt2(r.r_squared)}, p = {_fmt_p(r.p_value)}"
    )
    lines.append("")
    lines.append("Free-text coding:")
    for title, cells in (
        ("mentioned per-day information", report.coding.per_day),
        ("mentioned summary-only information", report.coding.summary_only),
    ):
        lines.append(f"  {title}:")
        for cell in cells:
            lines.append(f"    {cell.scope:<14} {cell.count}/{cell.total} = {cell.percent}%")
    return "\n".join(lines) + "\n"


def emit_report(report: StatsReport) -> str:
    """Machine-readable report, schema ``hsf-stats/1``, full float precision."""
    lines = ["schema: hsf-stats/1"]
    for g in report.groups:
        lines.append(
            f"group: {g.condition.value} | n={g.n} | mean={g.mean!r} | sd={g.sd!r} "
            f"| ci_low={g.ci_low!r} | ci_high={g.ci_high!r}"
        )
    a = report.anova
    lines.append(
        f"anova: F={a.f_statistic!r} | df_between={a.df_between} "
        f"| df_within={a.df_within} | p={a.p_value!r}"
    )
    for pw in report.pairwise:
        lines.append(
            f"pairwise: {pw.group_a} | {pw.group_b} | t={pw.t_statistic!r} "
            f"| df={pw.df} | p_raw={pw.p_raw!r} | p_adjusted={pw.p_adjusted!r}"
        )
    r = report.regression
    lines.append(
        f"regression: slope={r.slope!r} | intercept={r.intercept!r} "
        f"| r_squared={r.r_squared!r} | p={r.p_value!r}"
    )
    for name, cells in (("per_day", report.coding.per_day),
                        ("summary_only", report.coding.summary_only)):
        for cell in cells:
            lines.append(
                f"coding: {name} | {cell.scope} | count={cell.count} "
                f"| total={cell.total} | percent={cell.percent}"
            )
    return "\n".join(lines) + "\n"


def emit_plot_spec(report: StatsReport) -> str:
    """Group means and CI bounds for external plotting of the study figure."""
    lines = ["schema: hsf-plot/1", "# condition\tmean\tci_low\tci_high"]
    for g in report.groups:
        lines.append(f"{g.condition.value}\t{g.mean!r}\t{g.ci_low!r}\t{g.ci_high!r}")
    return "\n".join(lines) + "\n"


_RESPONSE_COLUMNS = ("participant_id", "forecast_id") + ACTIVITIES
_PARTICIPANT_COLUMNS = (
    "participant_id",
    "condition",
    "grips_score",
    "mentioned_per_day_info",
    "mentioned_summary_only_info",
)
_BOOL_TOKENS = {"true": True, "1": True, "false": False, "0": False}


def _check_header(actual: Sequence[str] | None, expected: Sequence[str], origin: str) -> None:
    if actual is None:
        raise StudyDataError(f"{origin}: empty file, expected header {','.join(expected)}")
    if tuple(actual) != tuple(expected):
        raise StudyDataError(
            f"{origin}: header mismatch; expected {','.join(expected)}, "
            f"found {','.join(actual)}"
        )


def _parse_float(text: str, what: str, origin: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise StudyDataError(f"{origin}: {what} is not a number: {text!r}") from None
    if math.isnan(value):
        raise StudyDataError(f"{origin}: {what} is NaN")
    return value


def load_study(responses_path: Path, participants_path: Path) -> tuple[ResponseRecord, ...]:
    """Load and join the response and participant files.

    Both are comma-separated with exact headers. Participant conditions use
    the command-line tokens (baseline, summary-last, icons, per-day-icons).
    Unknown references, duplicates, malformed numbers, and out-of-range
    ratings are hard errors.
    """
    participants: dict[str, dict] = {}
    with open(participants_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    _check_header(rows[0] if rows else None, _PARTICIPANT_COLUMNS, str(participants_path))
    for lineno, row in enumerate(rows[1:], start=2):
        origin = f"{participants_path}:{lineno}"
        if len(row) != len(_PARTICIPANT_COLUMNS):
            raise StudyDataError(
                f"{origin}: expected {len(_PARTICIPANT_COLUMNS)} fields, found {len(row)}"
            )
        pid, condition_token, grips_text, flag_a, flag_b = row
        if not pid:
            raise StudyDataError(f"{origin}: empty participant_id")
        if pid in participants:
            raise StudyDataError(f"{origin}: duplicate participant {pid!r}")
        try:
            condition = condition_from_token(condition_token)
        except ValueError as exc:
            raise StudyDataError(f"{origin}: {exc}") from None
        flags = []
        for name, text in (("mentioned_per_day_info", flag_a),
                           ("mentioned_summary_only_info", flag_b)):
            token = text.strip().lower()
            if token not in _BOOL_TOKENS:
                raise StudyDataError(f"{origin}: {name} must be true/false, found {text!r}")
            flags.append(_BOOL_TOKENS[token])
        participants[pid] = {
            "condition": condition,
            "grips_score": _parse_float(grips_text, "grips_score", origin),
            "mentioned_per_day_info": flags[0],
            "mentioned_summary_only_info": flags[1],
        }
    if not participants:
        raise StudyDataError(f"{participants_path}: no records")

    records: list[ResponseRecord] = []
    seen: set[tuple[str, str]] = set()
    with open(responses_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    _check_header(rows[0] if rows else None, _RESPONSE_COLUMNS, str(responses_path))
    for lineno, row in enumerate(rows[1:], start=2):
        origin = f"{responses_path}:{lineno}"
        if len(row) != len(_RESPONSE_COLUMNS):
            raise StudyDataError(
                f"{origin}: expected {len(_RESPONSE_COLUMNS)} fields, found {len(row)}"
            )
        pid, forecast_id = row[0], row[1]
        if pid not in participants:
            raise StudyDataError(f"{origin}: unknown participant {pid!r}")
        if (pid, forecast_id) in seen:
            raise StudyDataError(
                f"{origin}: duplicate response for participant {pid!r}, "
                f"forecast {forecast_id!r}"
            )
        seen.add((pid, forecast_id))
        ratings = tuple(
            _parse_float(text, name, origin) for name, text in zip(ACTIVITIES, row[2:])
        )
        meta = participants[pid]
        record = ResponseRecord(
            participant_id=pid,
            condition=meta["condition"],
            forecast_id=forecast_id,
            activity_ratings=ratings,
            grips_score=meta["grips_score"],
            mentioned_per_day_info=meta["mentioned_per_day_info"],
            mentioned_summary_only_info=meta["mentioned_summary_only_info"],
        )
        _check_ratings(record)
        records.append(record)
    if not records:
        raise StudyDataError(f"{responses_path}: no records")
    responded = {r.participant_id for r in records}
    silent = sorted(set(participants) - responded)
    if silent:
        raise StudyDataError(
            f"{participants_path}: participants with no responses: {', '.join(silent)}"
        )
    return tuple(records)
