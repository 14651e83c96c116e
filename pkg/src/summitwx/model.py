"""Structured representation of a 48-hour higher-summits forecast.

A :class:`ForecastDocument` holds a narrative summary plus exactly four
12-hour periods (day 1, night 1, day 2, night 2). All values are plain
frozen dataclasses: immutable after construction and safe to share across
threads. Internal units are fixed to degrees Fahrenheit and statute mph;
unit conversion, if any, belongs at parse/render boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum


class PrecipKind(Enum):
    SNOW = "snow"
    SLEET = "sleet"
    FREEZING_RAIN = "freezing_rain"
    RAIN = "rain"
    MIXED = "mixed"


class Certainty(Enum):
    """Qualitative certainty token preserved from the forecast wording."""

    MENTIONED = "mentioned"
    LIKELY = "likely"
    CHANCE = "chance"


#: Precipitation kinds that count as winter precipitation. Plain rain and
#: unspecified mixes do not qualify.
WINTER_PRECIP_KINDS = frozenset(
    {PrecipKind.SNOW, PrecipKind.SLEET, PrecipKind.FREEZING_RAIN}
)

COMPASS_POINTS = (
    "N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
    "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW",
)

WORST_CASE_LABEL = "Worst case (48 hours)"


@dataclass(frozen=True)
class ValueRange:
    """Closed numeric range with a unit tag (``F`` or ``mph``).

    Point values are expressed as low == high.
    """

    low: float
    high: float
    unit: str = "F"


@dataclass(frozen=True)
class PrecipEvent:
    kind: PrecipKind
    certainty: Certainty = Certainty.MENTIONED


@dataclass(frozen=True)
class WindPrediction:
    sustained: ValueRange
    direction: str | None = None
    gust_high: float | None = None


@dataclass(frozen=True)
class ForecastPeriod:
    label: str
    temperature: ValueRange
    wind: WindPrediction
    wind_chill: ValueRange | None = None
    precip_events: tuple[PrecipEvent, ...] = ()
    extra_hazard_notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ForecastDocument:
    issued_at: datetime
    summary_text: str
    periods: tuple[ForecastPeriod, ...]
    source_id: str = ""


@dataclass(frozen=True)
class Violation:
    """One broken invariant: which field, and which rule."""

    field_name: str
    rule: str


class InvalidDocument(ValueError):
    """Raised by operations that require a valid document or period."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        detail = "; ".join(f"{v.field_name}: {v.rule}" for v in violations)
        super().__init__(f"invalid forecast data: {detail}")


def _check_range(prefix: str, rng: ValueRange, unit: str, out: list[Violation]) -> None:
    if not (math.isfinite(rng.low) and math.isfinite(rng.high)):
        out.append(Violation(prefix, "values must be finite"))
    elif not (rng.low <= rng.high):
        out.append(Violation(prefix, f"low {rng.low} must be <= high {rng.high}"))
    if rng.unit != unit:
        out.append(Violation(prefix, f"unit must be {unit!r}, found {rng.unit!r}"))


def _check_single_line(prefix: str, value: str, out: list[Violation]) -> None:
    if "\n" in value or "\r" in value:
        out.append(Violation(prefix, "must not contain line breaks"))


def validate_period(period: ForecastPeriod, prefix: str = "period") -> list[Violation]:
    """Collect invariant violations for one period. Empty list means valid."""
    out: list[Violation] = []
    _check_single_line(f"{prefix}.label", period.label, out)
    _check_range(f"{prefix}.temperature", period.temperature, "F", out)
    if period.wind_chill is not None:
        _check_range(f"{prefix}.wind_chill", period.wind_chill, "F", out)
    _check_range(f"{prefix}.wind.sustained", period.wind.sustained, "mph", out)
    if period.wind.sustained.low < 0:
        out.append(Violation(f"{prefix}.wind.sustained", "wind speeds must be >= 0"))
    if period.wind.gust_high is not None and not math.isfinite(period.wind.gust_high):
        out.append(Violation(f"{prefix}.wind.gust_high", "values must be finite"))
    elif period.wind.gust_high is not None and period.wind.gust_high < period.wind.sustained.high:
        out.append(
            Violation(
                f"{prefix}.wind.gust_high",
                f"gust {period.wind.gust_high} must be >= sustained high "
                f"{period.wind.sustained.high}",
            )
        )
    if period.wind.direction is not None and period.wind.direction not in COMPASS_POINTS:
        out.append(
            Violation(f"{prefix}.wind.direction", f"unknown compass point {period.wind.direction!r}")
        )
    for i, ev in enumerate(period.precip_events):
        if not isinstance(ev.kind, PrecipKind):
            out.append(Violation(f"{prefix}.precip_events[{i}]", "kind outside the closed set"))
        if not isinstance(ev.certainty, Certainty):
            out.append(Violation(f"{prefix}.precip_events[{i}]", "certainty outside the closed set"))
    for i, note in enumerate(period.extra_hazard_notes):
        _check_single_line(f"{prefix}.extra_hazard_notes[{i}]", note, out)
    return out


def validate(doc: ForecastDocument) -> list[Violation]:
    """Collect all invariant violations. Violations are data, not failures."""
    out: list[Violation] = []
    if len(doc.periods) != 4:
        out.append(Violation("periods", f"expected exactly 4 periods, found {len(doc.periods)}"))
    if not doc.summary_text.strip():
        out.append(Violation("summary_text", "summary must be non-empty"))
    if "\r" in doc.summary_text:
        out.append(Violation("summary_text", "must use bare newlines, not carriage returns"))
    _check_single_line("source_id", doc.source_id, out)
    for i, period in enumerate(doc.periods):
        out.extend(validate_period(period, prefix=f"periods[{i}]"))
    return out


def require_valid(doc: ForecastDocument) -> ForecastDocument:
    violations = validate(doc)
    if violations:
        raise InvalidDocument(violations)
    return doc


def require_valid_period(period: ForecastPeriod) -> ForecastPeriod:
    violations = validate_period(period)
    if violations:
        raise InvalidDocument(violations)
    return period


def _dedup(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def worst_case_view(doc: ForecastDocument) -> ForecastPeriod:
    """Fold the document into one synthetic period of per-field extremes.

    "Worst" is per field: coldest temperatures and wind chills, highest
    sustained winds and gusts, the union of precipitation events and hazard
    notes. The result is itself a valid period. Deterministic, idempotent,
    and insensitive to period order for every numeric and set field.
    """
    require_valid(doc)
    periods = doc.periods

    temperature = ValueRange(
        low=min(p.temperature.low for p in periods),
        high=min(p.temperature.high for p in periods),
        unit="F",
    )
    sustained = ValueRange(
        low=max(p.wind.sustained.low for p in periods),
        high=max(p.wind.sustained.high for p in periods),
        unit="mph",
    )
    gusts = [p.wind.gust_high for p in periods if p.wind.gust_high is not None]
    # A period without a stated gust still gusts at least to its sustained
    # high; folding that floor in keeps gust >= sustained.high in the result.
    gust_high = max(gusts + [sustained.high]) if gusts else None

    chills = [p.wind_chill for p in periods if p.wind_chill is not None]
    wind_chill = None
    if chills:
        wind_chill = ValueRange(
            low=min(c.low for c in chills),
            high=min(c.high for c in chills),
            unit="F",
        )

    precip = sorted(
        {ev for p in periods for ev in p.precip_events},
        key=lambda ev: (ev.kind.value, ev.certainty.value),
    )
    notes = _dedup(note for p in periods for note in p.extra_hazard_notes)

    return ForecastPeriod(
        label=WORST_CASE_LABEL,
        temperature=temperature,
        wind=WindPrediction(sustained=sustained, direction=None, gust_high=gust_high),
        wind_chill=wind_chill,
        precip_events=tuple(precip),
        extra_hazard_notes=tuple(notes),
    )


def with_periods(doc: ForecastDocument, periods) -> ForecastDocument:
    return replace(doc, periods=tuple(periods))
