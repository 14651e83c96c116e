from datetime import datetime

import pytest

from summitwx.model import Certainty, PrecipEvent, PrecipKind
from summitwx.textparse import EPOCH, Severity, format_diagnostic, parse_forecast

MINI_HEADER = "Issued: 2026-01-01T00:00:00\nQuiet pattern overall.\n\n"


def mini(today: str, tonight: str = "Temperatures: 20-30F. Winds: NW 10-20 mph.") -> str:
    filler = "Temperatures: 20-30F. Winds: NW 10-20 mph."
    return (
        f"{MINI_HEADER}"
        f"Today: {today}\n"
        f"Tonight: {tonight}\n"
        f"Tomorrow: {filler}\n"
        f"Tomorrow night: {filler}\n"
    )


def parse_ok(text: str):
    result = parse_forecast(text)
    assert result.errors == (), [format_diagnostic(d, text) for d in result.errors]
    assert result.document is not None
    return result


def test_fixtures_parse_without_errors(fixture_texts):
    for name, text in fixture_texts.items():
        result = parse_forecast(text, source_id=name)
        assert result.errors == (), (name, [format_diagnostic(d, text) for d in result.errors])
        assert result.document is not None
        assert result.document.source_id == name
        assert len(result.document.periods) == 4


def test_severe_day_extraction(fixture_texts):
    doc = parse_ok(fixture_texts["severe-day"]).document
    assert doc.issued_at == datetime(2026, 1, 10, 4, 30)
    assert doc.summary_text.startswith("A dangerous arctic outbreak")
    assert doc.summary_text.endswith("strongly discouraged.")
    assert "Issued" not in doc.summary_text

    today, tonight, tomorrow, tomorrow_night = doc.periods
    assert [p.label for p in doc.periods] == [
        "Today", "Tonight", "Tomorrow", "Tomorrow night",
    ]

    assert (today.temperature.low, today.temperature.high) == (0, 10)
    assert today.wind.direction == "NW"
    assert (today.wind.sustained.low, today.wind.sustained.high) == (70, 90)
    assert today.wind.gust_high == 110
    assert (today.wind_chill.low, today.wind_chill.high) == (-50, -35)
    assert PrecipEvent(PrecipKind.SNOW, Certainty.LIKELY) in today.precip_events
    assert today.extra_hazard_notes == (
        "Blowing snow reducing visibility to near zero at times.",
    )

    assert (tonight.temperature.low, tonight.temperature.high) == (-15, -10)
    assert (tonight.wind.sustained.low, tonight.wind.sustained.high) == (85, 105)
    assert tonight.wind.gust_high is None
    assert tonight.wind_chill is None
    kinds = {ev.kind for ev in tonight.precip_events}
    assert kinds == {PrecipKind.SNOW, PrecipKind.SLEET}

    assert (tomorrow.temperature.low, tomorrow.temperature.high) == (-5, 5)
    assert tomorrow.wind.gust_high == 95
    assert tomorrow.extra_hazard_notes == (
        "Whiteout conditions possible in the morning.",
    )

    assert (tomorrow_night.temperature.low, tomorrow_night.temperature.high) == (0, 10)
    assert tomorrow_night.wind.direction == "W"
    assert tomorrow_night.precip_events == ()


def test_flood_day_extraction(fixture_texts):
    doc = parse_ok(fixture_texts["flood-day"]).document
    saturday, saturday_night, sunday, sunday_night = doc.periods
    assert saturday.label == "Saturday"
    assert saturday.wind.gust_high == 60
    assert PrecipEvent(PrecipKind.RAIN, Certainty.LIKELY) in saturday.precip_events
    assert any("flood watch" in n.lower() for n in saturday.extra_hazard_notes)
    assert any("fog" in n.lower() for n in saturday_night.extra_hazard_notes)
    assert {ev.kind for ev in sunday.precip_events} == {PrecipKind.RAIN}
    assert sunday_night.extra_hazard_notes == ("Patchy fog near the summits.",)
    assert all(p.wind_chill is None for p in doc.periods)


def test_freeze_snap_extraction(fixture_texts):
    doc = parse_ok(fixture_texts["freeze-snap"]).document
    assert [p.label for p in doc.periods] == [
        "This afternoon", "Overnight", "Tomorrow", "Tomorrow night",
    ]
    assert (doc.periods[0].temperature.low, doc.periods[0].temperature.high) == (-25, -15)
    assert (doc.periods[1].temperature.low, doc.periods[1].temperature.high) == (-28, -20)
    assert all(p.precip_events == () for p in doc.periods)


def test_mixed_precip_gust_warning(fixture_texts):
    result = parse_ok(fixture_texts["mixed-precip"])
    warnings = [d for d in result.diagnostics if d.severity is Severity.WARNING]
    assert len(warnings) == 1
    rendered = format_diagnostic(warnings[0], fixture_texts["mixed-precip"])
    assert rendered.startswith("warning:5:")
    assert "gusts mentioned without a numeric value" in rendered
    today, tonight, tomorrow, tomorrow_night = result.document.periods
    assert today.wind.gust_high is None
    assert tonight.wind.gust_high == 58
    assert {ev.kind for ev in tonight.precip_events} == {
        PrecipKind.SLEET, PrecipKind.FREEZING_RAIN,
    }
    assert {ev.kind for ev in tomorrow.precip_events} == {
        PrecipKind.MIXED, PrecipKind.RAIN,
    }
    assert tomorrow_night.precip_events == (
        PrecipEvent(PrecipKind.SNOW, Certainty.CHANCE),
    )


@pytest.mark.parametrize(
    "phrase, expected",
    [
        ("Temperatures: 0-10F.", (0, 10)),
        ("Temperatures: 35-50 below zero.", (-50, -35)),
        ("Temperatures: 5 below to 5F.", (-5, 5)),
        ("Temperatures: 10-15 below.", (-15, -10)),
        ("Temperatures: 5 below to 10 below.", (-10, -5)),
        ("Temperatures: 40 - 60.", (40, 60)),
        ("Temperatures: around 45F.", (45, 45)),
        ("Temperatures: in the 20s, near 25F.", (20, 25)),
    ],
)
def test_temperature_phrasings(phrase, expected):
    doc = parse_ok(mini(f"{phrase} Winds: NW 10-20 mph.")).document
    temp = doc.periods[0].temperature
    assert (temp.low, temp.high) == expected


@pytest.mark.parametrize(
    "phrase, sustained, direction, gust",
    [
        ("Winds: NW 70-90 mph with higher gusts 100-110 mph.", (70, 90), "NW", 110),
        ("Winds: NW 60-80 mph, gusts to 95 mph.", (60, 80), "NW", 95),
        ("Winds: 20-30 mph.", (20, 30), None, None),
        ("Winds: shifting SW 15-25 mph.", (15, 25), "SW", None),
        ("Winds: W 45 mph.", (45, 45), "W", None),
    ],
)
def test_wind_phrasings(phrase, sustained, direction, gust):
    doc = parse_ok(mini(f"Temperatures: 20-30F. {phrase}")).document
    wind = doc.periods[0].wind
    assert (wind.sustained.low, wind.sustained.high) == sustained
    assert wind.direction == direction
    assert wind.gust_high == gust


def test_gust_below_sustained_is_dropped_with_warning():
    result = parse_ok(mini("Temperatures: 20-30F. Winds: NW 40-60 mph, gusts to 50 mph."))
    assert result.document.periods[0].wind.gust_high is None
    warnings = [d for d in result.diagnostics if d.severity is Severity.WARNING]
    assert len(warnings) == 1
    assert "below the sustained high" in warnings[0].message


def test_stated_wind_chill_extraction():
    doc = parse_ok(
        mini("Temperatures: 0-10F. Winds: NW 40-60 mph. Wind chills: 25-40 below zero.")
    ).document
    chill = doc.periods[0].wind_chill
    assert (chill.low, chill.high) == (-40, -25)


def test_expected_period_count_error():
    text = f"{MINI_HEADER}Today: Temperatures: 20-30F. Winds: NW 10-20 mph.\nTonight: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
    result = parse_forecast(text)
    assert result.document is None
    assert any("expected 4 periods, found 2" in d.message for d in result.errors)


def test_too_many_periods_error():
    extra = "Today: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
    text = mini("Temperatures: 20-30F. Winds: NW 10-20 mph.") + extra
    result = parse_forecast(text)
    assert any("expected 4 periods, found 5" in d.message for d in result.errors)


def test_missing_temperature_error():
    result = parse_forecast(mini("Winds: NW 10-20 mph."))
    assert result.document is None
    assert any(
        "period 1 ('Today'): no temperature found" in d.message for d in result.errors
    )


def test_missing_wind_error():
    result = parse_forecast(mini("Temperatures: 20-30F."))
    assert result.document is None
    assert any(
        "period 1 ('Today'): no wind prediction found" in d.message
        for d in result.errors
    )


def test_empty_input_error():
    result = parse_forecast("")
    assert result.document is None
    assert result.errors[0].message == "empty input"
    assert result.coverage == 0.0


def test_missing_summary_error():
    text = (
        "Issued: 2026-01-01T00:00:00\n"
        "Today: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
        "Tonight: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
        "Tomorrow: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
        "Tomorrow night: Temperatures: 20-30F. Winds: NW 10-20 mph.\n"
    )
    result = parse_forecast(text)
    assert result.document is None
    assert any("no summary narrative" in d.message for d in result.errors)


def test_missing_issued_line_is_info_and_epoch():
    text = mini("Temperatures: 20-30F. Winds: NW 10-20 mph.").replace(
        "Issued: 2026-01-01T00:00:00\n", ""
    )
    result = parse_ok(text)
    infos = [d for d in result.diagnostics if d.severity is Severity.INFO]
    assert any("Issued" in d.message for d in infos)
    assert result.document.issued_at == EPOCH


def test_unreadable_issued_line_is_warning_and_epoch():
    text = mini("Temperatures: 20-30F. Winds: NW 10-20 mph.").replace(
        "2026-01-01T00:00:00", "sometime soon"
    )
    result = parse_ok(text)
    warnings = [d for d in result.diagnostics if d.severity is Severity.WARNING]
    assert any("unreadable issue timestamp" in d.message for d in warnings)
    assert result.document.issued_at == EPOCH


def test_period_headers_must_start_a_line():
    text = mini("Temperatures: 20-30F. Winds: NW 10-20 mph. More about today later.")
    doc = parse_ok(text).document
    assert doc.periods[0].label == "Today"


def test_coverage_bounds_and_fixture_floor(fixture_texts):
    for name, text in fixture_texts.items():
        result = parse_forecast(text, source_id=name)
        assert 0.0 <= result.coverage <= 1.0
        assert result.coverage >= 0.75, (name, result.coverage)


def test_coverage_drops_with_unrecognized_text():
    base = mini("Temperatures: 20-30F. Winds: NW 10-20 mph.")
    noisy = mini(
        "Temperatures: 20-30F. Winds: NW 10-20 mph. "
        "Entirely unrelated chatter about nothing weatherlike goes here."
    )
    assert parse_ok(noisy).coverage < parse_ok(base).coverage


def test_diagnostic_format_is_line_and_column():
    text = mini("Winds: NW 10-20 mph.")
    result = parse_forecast(text)
    rendered = [format_diagnostic(d, text) for d in result.errors]
    assert rendered
    assert all(r.split(" ")[0].count(":") == 2 for r in rendered)
    severity, line, col = rendered[0].split(" ")[0].split(":")
    assert severity == "error"
    assert line.isdigit() and col.isdigit()


def test_parse_is_deterministic(fixture_texts):
    text = fixture_texts["severe-day"]
    assert parse_forecast(text) == parse_forecast(text)
