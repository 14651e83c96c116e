"""Canonical line-oriented interchange format, schema ``hsf-canonical/1``.

One fact per line as ``key: value``. Top-level keys appear at column 0;
period keys are indented exactly two spaces under a ``period:`` marker.
Summary narrative lines carry a ``|`` sentinel after the key so leading and
trailing whitespace survive unchanged. Lines that are blank or start with
``#`` are skipped.

Emission is deterministic: fixed key order, numbers printed as integers
when integral and in shortest round-trip form otherwise. Parsing is strict:
unknown keys, duplicate scalar keys, malformed numbers, tokens outside the
closed enum sets, and a period count other than four are all errors, never
silently ignored. ``parse_canonical(emit_canonical(doc)) == doc`` for every
valid document.
"""

from __future__ import annotations

from datetime import datetime

from .model import (
    Certainty,
    ForecastDocument,
    ForecastPeriod,
    PrecipEvent,
    PrecipKind,
    ValueRange,
    WindPrediction,
    require_valid,
    validate,
)
from .textparse import Diagnostic, ParseResult, Severity

SCHEMA = "hsf-canonical/1"

_TOP_SCALARS = {"schema", "issued_at", "source_id"}
_PERIOD_SCALARS = {
    "label", "temp_low_f", "temp_high_f", "wind_dir",
    "wind_low_mph", "wind_high_mph", "gust_high_mph",
    "chill_low_f", "chill_high_f",
}
_PERIOD_REQUIRED = ("label", "temp_low_f", "temp_high_f", "wind_low_mph", "wind_high_mph")


def _fmt_num(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(x)


def emit_canonical(doc: ForecastDocument) -> str:
    """Serialize a valid document. Raises InvalidDocument otherwise."""
    require_valid(doc)
    lines = [f"schema: {SCHEMA}", f"issued_at: {doc.issued_at.isoformat()}"]
    if doc.source_id:
        lines.append(f"source_id: {doc.source_id}")
    for raw in doc.summary_text.split("\n"):
        lines.append(f"summary: | {raw}" if raw else "summary: |")
    for p in doc.periods:
        lines.append("period:")
        lines.append(f"  label: {p.label}")
        lines.append(f"  temp_low_f: {_fmt_num(p.temperature.low)}")
        lines.append(f"  temp_high_f: {_fmt_num(p.temperature.high)}")
        lines.append(f"  wind_low_mph: {_fmt_num(p.wind.sustained.low)}")
        lines.append(f"  wind_high_mph: {_fmt_num(p.wind.sustained.high)}")
        if p.wind.direction is not None:
            lines.append(f"  wind_dir: {p.wind.direction}")
        if p.wind.gust_high is not None:
            lines.append(f"  gust_high_mph: {_fmt_num(p.wind.gust_high)}")
        if p.wind_chill is not None:
            lines.append(f"  chill_low_f: {_fmt_num(p.wind_chill.low)}")
            lines.append(f"  chill_high_f: {_fmt_num(p.wind_chill.high)}")
        for ev in p.precip_events:
            lines.append(f"  precip: {ev.kind.value} | {ev.certainty.value}")
        for note in p.extra_hazard_notes:
            lines.append(f"  hazard_note: {note}")
    return "\n".join(lines) + "\n"


class _PeriodDraft:
    def __init__(self) -> None:
        self.scalars: dict[str, str] = {}
        self.precip: list[PrecipEvent] = []
        self.notes: list[str] = []


def _split_key(content: str) -> tuple[str, str] | None:
    """Split ``key: value`` / ``key:``; None when the shape is wrong."""
    colon = content.find(":")
    if colon <= 0:
        return None
    key = content[:colon]
    rest = content[colon + 1:]
    if rest == "":
        return key, ""
    if rest.startswith(" "):
        return key, rest[1:]
    return None


def parse_canonical(text: str) -> ParseResult:
    """Parse canonical text. Document present iff no error diagnostics."""
    diags: list[Diagnostic] = []
    top: dict[str, str] = {}
    summary_lines: list[str] = []
    drafts: list[_PeriodDraft] = []
    meaningful = 0
    recognized = 0

    def err(span: tuple[int, int], message: str) -> None:
        diags.append(Diagnostic(Severity.ERROR, span, message))

    offset = 0
    for raw_line in text.split("\n"):
        span = (offset, offset + len(raw_line))
        offset += len(raw_line) + 1
        if not raw_line.strip():
            continue
        if raw_line.lstrip().startswith("#"):
            continue
        meaningful += 1
        if "\r" in raw_line:
            err(span, "carriage return in input; expected bare newlines")
            continue

        in_period = raw_line.startswith("  ") and not raw_line[2:].startswith(" ")
        content = raw_line[2:] if in_period else raw_line
        parts = _split_key(content)
        if parts is None:
            err(span, f"expected 'key: value', found {content!r}")
            continue
        key, value = parts

        if not top and (in_period or key != "schema"):
            err(span, "first entry must be the schema declaration")
            continue

        if in_period:
            if not drafts:
                err(span, f"period key {key!r} before any 'period:' marker")
                continue
            draft = drafts[-1]
            if key in _PERIOD_SCALARS:
                if key in draft.scalars:
                    err(span, f"duplicate key {key!r} in period {len(drafts)}")
                    continue
                draft.scalars[key] = value
            elif key == "precip":
                pieces = value.split(" | ")
                if len(pieces) != 2:
                    err(span, f"expected 'kind | certainty', found {value!r}")
                    continue
                try:
                    draft.precip.append(
                        PrecipEvent(PrecipKind(pieces[0]), Certainty(pieces[1]))
                    )
                except ValueError:
                    err(span, f"unknown precipitation token in {value!r}")
                    continue
            elif key == "hazard_note":
                draft.notes.append(value)
            else:
                err(span, f"unknown key {key!r}")
                continue
        else:
            if key == "schema":
                if top:
                    err(span, "duplicate schema declaration")
                    continue
                if value != SCHEMA:
                    err(span, f"unsupported schema {value!r}; expected {SCHEMA!r}")
                    continue
                top["schema"] = value
            elif key in _TOP_SCALARS:
                if key in top:
                    err(span, f"duplicate key {key!r}")
                    continue
                top[key] = value
            elif key == "summary":
                if value == "|":
                    summary_lines.append("")
                elif value.startswith("| "):
                    summary_lines.append(value[2:])
                else:
                    err(span, f"summary value must start with '|', found {value!r}")
                    continue
            elif key == "period":
                if value != "":
                    err(span, f"'period:' takes no value, found {value!r}")
                    continue
                drafts.append(_PeriodDraft())
            else:
                err(span, f"unknown key {key!r}")
                continue
        recognized += 1

    whole = (0, len(text))
    if "schema" not in top:
        err(whole, "missing schema declaration")
    if "issued_at" not in top:
        err(whole, "missing issued_at")
    if len(drafts) != 4:
        err(whole, f"expected 4 periods, found {len(drafts)}")

    issued_at = None
    if "issued_at" in top:
        try:
            issued_at = datetime.fromisoformat(top["issued_at"])
        except ValueError:
            err(whole, f"unreadable issued_at {top['issued_at']!r}")

    periods = []
    for i, draft in enumerate(drafts):
        periods_ok = True
        for key in _PERIOD_REQUIRED:
            if key not in draft.scalars:
                err(whole, f"period {i + 1}: missing required key {key!r}")
                periods_ok = False
        nums: dict[str, float] = {}
        for key, value in draft.scalars.items():
            if key in ("label", "wind_dir"):
                continue
            try:
                nums[key] = float(value)
            except ValueError:
                err(whole, f"period {i + 1}: {key} is not a number: {value!r}")
                periods_ok = False
        if ("chill_low_f" in draft.scalars) != ("chill_high_f" in draft.scalars):
            err(whole, f"period {i + 1}: chill_low_f and chill_high_f must appear together")
            periods_ok = False
        if not periods_ok:
            continue
        wind_chill = None
        if "chill_low_f" in nums:
            wind_chill = ValueRange(nums["chill_low_f"], nums["chill_high_f"], "F")
        periods.append(
            ForecastPeriod(
                label=draft.scalars["label"],
                temperature=ValueRange(nums["temp_low_f"], nums["temp_high_f"], "F"),
                wind=WindPrediction(
                    sustained=ValueRange(nums["wind_low_mph"], nums["wind_high_mph"], "mph"),
                    direction=draft.scalars.get("wind_dir"),
                    gust_high=nums.get("gust_high_mph"),
                ),
                wind_chill=wind_chill,
                precip_events=tuple(draft.precip),
                extra_hazard_notes=tuple(draft.notes),
            )
        )

    coverage = recognized / meaningful if meaningful else 0.0
    if any(d.severity is Severity.ERROR for d in diags):
        return ParseResult(None, tuple(diags), coverage)

    doc = ForecastDocument(
        issued_at=issued_at,
        summary_text="\n".join(summary_lines),
        periods=tuple(periods),
        source_id=top.get("source_id", ""),
    )
    violations = validate(doc)
    for v in violations:
        err(whole, f"{v.field_name}: {v.rule}")
    if violations:
        return ParseResult(None, tuple(diags), coverage)
    return ParseResult(doc, tuple(diags), coverage)
