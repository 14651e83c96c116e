"""Cold-weather hazard classification driven by shipped scale tables.

Derives at most one icon per hazard kind (wind, wind chill, freezing
temperature, winter precipitation) from a forecast period, in a fixed
order, using only the period's own fields plus the packaged scale tables.
Nothing else -- no clock, network, or ambient configuration -- can affect
the result.

The scale tables ship as data files under ``summitwx/scales`` so the band
edges and colors can be audited or re-transcribed against the published
standards they come from; each file carries a provenance note. Tables are
integrity-checked at load time and immutable afterwards.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .model import (
    WINTER_PRECIP_KINDS,
    ForecastDocument,
    ForecastPeriod,
    ValueRange,
    require_valid,
    require_valid_period,
    worst_case_view,
)


class HazardKind(Enum):
    WIND = "wind"
    WIND_CHILL = "wind_chill"
    FREEZING_TEMP = "freezing_temp"
    WINTER_PRECIP = "winter_precip"


#: Icon emission order within a set. Fixed; never reordered by content.
KIND_ORDER = (
    HazardKind.WIND,
    HazardKind.WIND_CHILL,
    HazardKind.FREEZING_TEMP,
    HazardKind.WINTER_PRECIP,
)

GLYPH_IDS = {
    HazardKind.WIND: "wind",
    HazardKind.WIND_CHILL: "wind-chill",
    HazardKind.FREEZING_TEMP: "freezing-temp",
    HazardKind.WINTER_PRECIP: "winter-precip",
}

_TABLE_FILES = {
    HazardKind.WIND: "beaufort.table",
    HazardKind.WIND_CHILL: "wind_chill.table",
    HazardKind.FREEZING_TEMP: "freezing.table",
    HazardKind.WINTER_PRECIP: "winter_precip.table",
}

_COLOR_RE = re.compile(r"^#[0-9A-F]{6}$")


class ScaleTableError(ValueError):
    """A scale-table file is malformed or fails its integrity checks."""


@dataclass(frozen=True)
class ScaleBand:
    level: int
    low: float
    high: float
    color: str
    label: str


@dataclass(frozen=True)
class ScaleTable:
    kind: HazardKind
    scale_name: str
    unit: str
    domain_low: float
    domain_high: float
    closed_edge: str  # "low": bands are [low, high); "high": bands are (low, high]
    provenance: str
    bands: tuple[ScaleBand, ...]

    def band_for(self, value: float) -> ScaleBand:
        """Band containing ``value``; values beyond the domain take the end band."""
        x = min(max(value, self.domain_low), self.domain_high)
        if self.closed_edge == "low":
            for band in self.bands[:-1]:
                if band.low <= x < band.high:
                    return band
            return self.bands[-1]
        for band in self.bands[1:][::-1]:
            if band.low < x <= band.high:
                return band
        return self.bands[0]

    def level_for(self, value: float) -> int:
        return self.band_for(value).level

    def band_for_level(self, level: int) -> ScaleBand:
        for band in self.bands:
            if band.level == level:
                return band
        raise KeyError(f"{self.scale_name} scale has no level {level}")


def _parse_scale_table(text: str, origin: str) -> ScaleTable:
    fields: dict[str, str] = {}
    provenance: list[str] = []
    bands: list[ScaleBand] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ScaleTableError(f"{origin}:{lineno}: expected 'key: value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "provenance":
            provenance.append(value)
        elif key == "band":
            parts = [p.strip() for p in value.split("|")]
            if len(parts) != 5:
                raise ScaleTableError(f"{origin}:{lineno}: band needs 5 fields, got {len(parts)}")
            try:
                band = ScaleBand(
                    level=int(parts[0]), low=float(parts[1]), high=float(parts[2]),
                    color=parts[3], label=parts[4],
                )
            except ValueError as exc:
                raise ScaleTableError(f"{origin}:{lineno}: {exc}") from None
            bands.append(band)
        elif key in {"schema", "kind", "scale_name", "unit", "domain", "closed_edge"}:
            if key in fields:
                raise ScaleTableError(f"{origin}:{lineno}: duplicate key {key!r}")
            fields[key] = value
        else:
            raise ScaleTableError(f"{origin}:{lineno}: unknown key {key!r}")

    missing = {"schema", "kind", "scale_name", "unit", "domain", "closed_edge"} - fields.keys()
    if missing:
        raise ScaleTableError(f"{origin}: missing keys: {', '.join(sorted(missing))}")
    if fields["schema"] != "hazard-scale/1":
        raise ScaleTableError(f"{origin}: unsupported schema {fields['schema']!r}")
    try:
        kind = HazardKind(fields["kind"])
    except ValueError:
        raise ScaleTableError(f"{origin}: unknown hazard kind {fields['kind']!r}") from None
    if fields["closed_edge"] not in {"low", "high"}:
        raise ScaleTableError(f"{origin}: closed_edge must be 'low' or 'high'")
    domain_parts = [p.strip() for p in fields["domain"].split("|")]
    if len(domain_parts) != 2:
        raise ScaleTableError(f"{origin}: domain needs 'low | high'")
    domain_low, domain_high = float(domain_parts[0]), float(domain_parts[1])
    if not provenance:
        raise ScaleTableError(f"{origin}: provenance note is mandatory")

    table = ScaleTable(
        kind=kind,
        scale_name=fields["scale_name"],
        unit=fields["unit"],
        domain_low=domain_low,
        domain_high=domain_high,
        closed_edge=fields["closed_edge"],
        provenance=" ".join(provenance),
        bands=tuple(bands),
    )
    _check_integrity(table, origin)
    return table


def _check_integrity(table: ScaleTable, origin: str) -> None:
    if not table.bands:
        raise ScaleTableError(f"{origin}: no bands")
    if not table.domain_low < table.domain_high:
        raise ScaleTableError(f"{origin}: empty domain")
    if table.bands[0].low != table.domain_low or table.bands[-1].high != table.domain_high:
        raise ScaleTableError(f"{origin}: bands do not cover the declared domain")
    for band in table.bands:
        if not band.low < band.high:
            raise ScaleTableError(f"{origin}: level {band.level} band is empty or inverted")
        if not _COLOR_RE.match(band.color):
            raise ScaleTableError(f"{origin}: level {band.level} color {band.color!r} is not #RRGGBB")
    for a, b in zip(table.bands, table.bands[1:]):
        if a.high != b.low:
            raise ScaleTableError(
                f"{origin}: gap or overlap between levels {a.level} and {b.level}"
            )
    levels = [band.level for band in table.bands]
    if len(set(levels)) != len(levels):
        raise ScaleTableError(f"{origin}: duplicate levels")
    ascending = all(a < b for a, b in zip(levels, levels[1:]))
    descending = all(a > b for a, b in zip(levels, levels[1:]))
    if not (ascending or descending):
        raise ScaleTableError(f"{origin}: levels must be strictly monotone across the domain")


def load_scale_table(path: Path) -> ScaleTable:
    return _parse_scale_table(path.read_text(encoding="utf-8"), origin=str(path))


def load_tables(directory: Path | None = None) -> Mapping[HazardKind, ScaleTable]:
    """Load and integrity-check all four scale tables.

    With no argument, loads the packaged tables (cached, immutable). A
    directory argument loads re-transcribed tables from disk instead; the
    same integrity checks apply.
    """
    if directory is None:
        return _packaged_tables()
    tables = {}
    for kind, filename in _TABLE_FILES.items():
        table = load_scale_table(directory / filename)
        if table.kind is not kind:
            raise ScaleTableError(f"{directory / filename}: declares kind {table.kind.value!r}")
        tables[kind] = table
    return MappingProxyType(tables)


@lru_cache(maxsize=1)
def _packaged_tables() -> Mapping[HazardKind, ScaleTable]:
    tables = {}
    root = resources.files("summitwx") / "scales"
    for kind, filename in _TABLE_FILES.items():
        text = (root / filename).read_text(encoding="utf-8")
        tables[kind] = _parse_scale_table(text, origin=f"summitwx/scales/{filename}")
    return MappingProxyType(tables)


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (chart granularity)."""
    return math.floor(x + 0.5) if x >= 0 else math.ceil(x - 0.5)


def wind_chill(temperature_f: float, wind_mph: float) -> float:
    """Wind chill in degrees F per the national weather service model.

    Valid for temperatures at or below 50 F with wind above 3 mph; outside
    that envelope the model is undefined and the air temperature is
    returned unchanged. Coefficients are the published 2001 model constants.
    """
    if temperature_f > 50.0 or wind_mph <= 3.0:
        return temperature_f
    v16 = wind_mph ** 0.16
    return 35.74 + 0.6215 * temperature_f - 35.75 * v16 + 0.4275 * temperature_f * v16


def beaufort_force(sustained_high_mph: float, tables=None) -> int:
    """Beaufort force 0-12 for a sustained wind speed in mph."""
    if sustained_high_mph < 0:
        raise ValueError(f"wind speed must be >= 0, got {sustained_high_mph}")
    tables = tables or load_tables()
    return tables[HazardKind.WIND].level_for(sustained_high_mph)


def wind_chill_category(wc_f: float, tables=None) -> int:
    """Frostbite-time category 0-3 for a wind chill in degrees F.

    0: no frostbite hazard; 1: frostbite within 30 minutes; 2: within 10;
    3: within 5. The wind chill is rounded half-away-from-zero to a whole
    degree first, matching the hazard chart's granularity. A value exactly
    at a band threshold takes the more severe category.
    """
    tables = tables or load_tables()
    return tables[HazardKind.WIND_CHILL].level_for(round_half_away(wc_f))


@dataclass(frozen=True)
class HazardIcon:
    """One derived hazard icon: kind, severity level, and standard color.

    ``color`` is a pure function of (kind, level) through the scale tables.
    ``gust_annotation`` rides along on wind icons when gusts reach a higher
    Beaufort band than the sustained wind; it never changes the level.
    """

    kind: HazardKind
    level: int
    color: str
    scale_name: str
    glyph_id: str
    label: str
    gust_annotation: float | None = None


@dataclass(frozen=True)
class IconRuleConfig:
    """Display knobs for icon derivation.

    ``wind_display_floor``: minimum Beaufort force that shows a wind icon.
    Every force has a defined icon, but low forces are not hazards; the
    floor defaults to 6 (strong breeze) and is explicit configuration.
    """

    wind_display_floor: int = 6


DEFAULT_ICON_CONFIG = IconRuleConfig()


def _icon(table: ScaleTable, kind: HazardKind, level: int, gust: float | None = None) -> HazardIcon:
    band = table.band_for_level(level)
    return HazardIcon(
        kind=kind,
        level=level,
        color=band.color,
        scale_name=table.scale_name,
        glyph_id=GLYPH_IDS[kind],
        label=band.label,
        gust_annotation=gust,
    )


def period_wind_chill(period: ForecastPeriod) -> float:
    """Worst (lowest) wind chill for a period.

    Uses the forecaster's stated wind-chill range when present; otherwise
    computes from the period's coldest temperature and highest sustained
    wind. Forecast content is never second-guessed when stated.
    """
    if period.wind_chill is not None:
        return period.wind_chill.low
    return wind_chill(period.temperature.low, period.wind.sustained.high)


def derive_icons(
    period: ForecastPeriod,
    tables=None,
    config: IconRuleConfig = DEFAULT_ICON_CONFIG,
) -> tuple[HazardIcon, ...]:
    """Derive the icon set for one period, in fixed kind order.

    Consumes only the period's fields and the scale tables: wind icon at or
    above the configured Beaufort display floor; wind-chill icon for any
    frostbite-time category; freezing icon for a low strictly below 32 F;
    winter-precipitation icon for any snow, sleet, or freezing-rain event.
    At most one icon per kind.
    """
    require_valid_period(period)
    tables = tables or load_tables()
    icons: list[HazardIcon] = []

    wind_table = tables[HazardKind.WIND]
    force = wind_table.level_for(period.wind.sustained.high)
    if force >= config.wind_display_floor:
        gust = period.wind.gust_high
        annotation = None
        if gust is not None and wind_table.level_for(gust) > force:
            annotation = gust
        icons.append(_icon(wind_table, HazardKind.WIND, force, gust=annotation))

    chill_table = tables[HazardKind.WIND_CHILL]
    category = chill_table.level_for(round_half_away(period_wind_chill(period)))
    if category >= 1:
        icons.append(_icon(chill_table, HazardKind.WIND_CHILL, category))

    freezing_table = tables[HazardKind.FREEZING_TEMP]
    freeze_level = freezing_table.level_for(period.temperature.low)
    if freeze_level >= 1:
        icons.append(_icon(freezing_table, HazardKind.FREEZING_TEMP, freeze_level))

    winter_table = tables[HazardKind.WINTER_PRECIP]
    winter_kinds = {ev.kind for ev in period.precip_events if ev.kind in WINTER_PRECIP_KINDS}
    winter_level = winter_table.level_for(len(winter_kinds))
    if winter_level >= 1:
        icons.append(_icon(winter_table, HazardKind.WINTER_PRECIP, winter_level))

    return tuple(icons)


def effective_worst_case(doc: ForecastDocument) -> ForecastPeriod:
    """Worst-case fold with the wind chill resolved period by period.

    Starts from ``worst_case_view`` and replaces its wind chill with the
    minimum of each period's effective chill (stated when present, else
    computed from that period's own temperature and wind). Pairing one
    period's coldest temperature with another period's strongest wind would
    describe conditions the forecast never predicts; folding per period
    keeps the overall icon exactly as severe as the worst single period,
    never more, never less.
    """
    worst = worst_case_view(doc)
    low = min(period_wind_chill(p) for p in doc.periods)
    high = worst.wind_chill.high if worst.wind_chill is not None else low
    return replace(worst, wind_chill=ValueRange(low=low, high=max(low, high), unit="F"))


def derive_document_icons(
    doc: ForecastDocument,
    mode: str = "overall",
    tables=None,
    config: IconRuleConfig = DEFAULT_ICON_CONFIG,
) -> tuple[tuple[HazardIcon, ...], ...]:
    """Icon sets for a whole document.

    ``overall`` folds the document to its worst case first and yields one
    set; ``per_period`` yields one set per period, in order. The overall
    set carries, per hazard kind, exactly the highest level found in any
    single period.
    """
    require_valid(doc)
    if mode == "overall":
        return (derive_icons(effective_worst_case(doc), tables=tables, config=config),)
    if mode == "per_period":
        return tuple(derive_icons(p, tables=tables, config=config) for p in doc.periods)
    raise ValueError(f"mode must be 'overall' or 'per_period', got {mode!r}")


class TriadVerdict(Enum):
    GO = "go"
    CAUTION = "caution"
    NO_GO = "no_go"


@dataclass(frozen=True)
class TriadThresholds:
    """Danger cutoffs for the wind/visibility/temperature advisory.

    No defaults ship anywhere: the advisory encodes one workshop
    participant's rule of thumb, and the cutoffs are an explicit judgment
    call the caller must own.
    """

    wind_high_mph: float
    temperature_low_f: float


@dataclass(frozen=True)
class TriadAdvisory:
    factors_dangerous: frozenset[str]
    verdict: TriadVerdict


_VISIBILITY_NOTE_RE = re.compile(r"\b(fog|visibility|whiteout)\b", re.IGNORECASE)


def triad_advisory(period: ForecastPeriod, thresholds: TriadThresholds) -> TriadAdvisory:
    """Go / caution / no-go verdict from the wind-visibility-temperature triad.

    One factor at a dangerous level means caution; two or more mean no-go.
    Visibility counts as dangerous when a fog/visibility hazard note was
    parsed out of the forecast text.
    """
    if thresholds is None:
        raise ValueError("triad thresholds must be supplied explicitly")
    require_valid_period(period)
    dangerous = set()
    if period.wind.sustained.high >= thresholds.wind_high_mph:
        dangerous.add("wind")
    if period.temperature.low <= thresholds.temperature_low_f:
        dangerous.add("temperature")
    if any(_VISIBILITY_NOTE_RE.search(note) for note in period.extra_hazard_notes):
        dangerous.add("visibility")
    verdict = (
        TriadVerdict.GO if not dangerous
        else TriadVerdict.CAUTION if len(dangerous) == 1
        else TriadVerdict.NO_GO
    )
    return TriadAdvisory(factors_dangerous=frozenset(dangerous), verdict=verdict)
