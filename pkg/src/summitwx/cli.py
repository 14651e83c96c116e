"""Command-line pipeline: parse, classify, render, stimuli, stats, tables.

Exit codes: 0 success, 1 input error (bad flags, unreadable or invalid
input data), 2 internal invariant violation. Every failure path prints a
single-line diagnostic to stderr before exiting. All behavior is driven by
flags and input files; no environment variables, clock, or network.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .canonical import SCHEMA, emit_canonical, parse_canonical
from .hazards import (
    TriadThresholds,
    derive_document_icons,
    derive_icons,
    load_tables,
    triad_advisory,
)
from .layout import (
    CONDITION_TOKENS,
    FORMATS,
    condition_from_token,
    render,
    render_icon,
    render_stimulus_set,
)
from .model import WORST_CASE_LABEL, ForecastDocument
from .stats import build_report, emit_plot_spec, emit_report, format_report, load_study
from .textparse import Severity, format_diagnostic, parse_forecast


class _CliError(ValueError):
    """Input-level failure; maps to exit code 1."""


class _SingleLineParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _CliError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_document(path: str) -> ForecastDocument:
    """Read a forecast file, raw or canonical, into a valid document."""
    text = _read_text(path)
    if text.startswith("schema: " + SCHEMA):
        result = parse_canonical(text)
    else:
        result = parse_forecast(text, source_id=Path(path).stem)
    for diag in result.diagnostics:
        if diag.severity is not Severity.ERROR:
            print(f"{path}: {format_diagnostic(diag, text)}", file=sys.stderr)
    if result.document is None:
        for diag in result.errors:
            print(f"{path}: {format_diagnostic(diag, text)}", file=sys.stderr)
        raise _CliError(f"{path}: {len(result.errors)} error diagnostic(s); no document")
    return result.document


def _load_tables_arg(args):
    return load_tables(Path(args.tables)) if args.tables else load_tables()


def _write_or_print(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload, encoding="utf-8")


def _cmd_parse(args) -> int:
    text = _read_text(args.input)
    result = parse_forecast(text, source_id=args.source_id or Path(args.input).stem)
    for diag in result.diagnostics:
        print(f"{args.input}: {format_diagnostic(diag, text)}", file=sys.stderr)
    if result.document is None:
        raise _CliError(f"{args.input}: {len(result.errors)} error diagnostic(s); no document")
    _write_or_print(emit_canonical(result.document), args.out)
    return 0


def _icon_line(icons) -> str:
    return " ".join(render_icon(icon, "plain") for icon in icons) if icons else "(none)"


_THRESHOLD_KEYS = ("wind_high_mph", "temperature_low_f")


def _load_thresholds(path: str) -> TriadThresholds:
    values: dict[str, float] = {}
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in _THRESHOLD_KEYS:
            raise _CliError(f"{path}:{lineno}: expected one of {', '.join(_THRESHOLD_KEYS)}")
        if key in values:
            raise _CliError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise _CliError(f"{path}:{lineno}: {key} is not a number: {value.strip()!r}") from None
    missing = [k for k in _THRESHOLD_KEYS if k not in values]
    if missing:
        raise _CliError(f"{path}: missing threshold key(s): {', '.join(missing)}")
    return TriadThresholds(
        wind_high_mph=values["wind_high_mph"],
        temperature_low_f=values["temperature_low_f"],
    )


def _cmd_classify(args) -> int:
    doc = _load_document(args.input)
    tables = _load_tables_arg(args)
    lines: list[str] = []
    mode = args.mode or "both"
    if mode in ("per-period", "both"):
        lines.append("per-period:")
        for i, period in enumerate(doc.periods):
            icons = derive_icons(period, tables=tables)
            lines.append(f"  {i + 1}. {period.label}: {_icon_line(icons)}")
    if mode in ("overall", "both"):
        icons = derive_document_icons(doc, "overall", tables=tables)[0]
        lines.append("overall:")
        lines.append(f"  {WORST_CASE_LABEL}: {_icon_line(icons)}")
    if args.triad_thresholds:
        thresholds = _load_thresholds(args.triad_thresholds)
        lines.append("triad advisory:")
        for i, period in enumerate(doc.periods):
            advisory = triad_advisory(period, thresholds)
            factors = ", ".join(sorted(advisory.factors_dangerous)) or "none"
            lines.append(f"  {i + 1}. {period.label}: {advisory.verdict.value} ({factors})")
    _write_or_print("".join(f"{line}\n" for line in lines), args.out)
    return 0


def _cmd_render(args) -> int:
    doc = _load_document(args.input)
    tables = _load_tables_arg(args)
    condition = condition_from_token(args.condition)
    rendered = render(doc, condition, format=args.format, tables=tables)
    if args.out is None:
        sys.stdout.write(rendered.payload.decode("utf-8"))
    else:
        Path(args.out).write_bytes(rendered.payload)
        manifest_path = Path(args.out).with_name(Path(args.out).name + ".manifest")
        manifest_text = "".join(f"{eid}\t{source}\n" for eid, source in rendered.manifest)
        manifest_path.write_text(manifest_text, encoding="utf-8")
    return 0


_SLUG_RE = re.compile(r"[^a-z0-9]+")
_EXTENSIONS = {"svg": "svg", "html": "html", "plain": "txt"}


def _cmd_stimuli(args) -> int:
    docs = [_load_document(path) for path in args.inputs]
    tables = _load_tables_arg(args)
    condition = condition_from_token(args.condition)
    renders, index = render_stimulus_set(docs, condition, format=args.format, tables=tables)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = _EXTENSIONS[args.format]
    for i, (doc, rendered) in enumerate(zip(docs, renders)):
        slug = _SLUG_RE.sub("-", (doc.source_id or f"doc-{i + 1}").lower()).strip("-")
        (out_dir / f"{i + 1:02d}-{slug}.{ext}").write_bytes(rendered.payload)
    (out_dir / "index.tsv").write_text(index, encoding="utf-8")
    return 0


def _cmd_stats(args) -> int:
    records = load_study(Path(args.responses), Path(args.participants))
    report = build_report(records, correction_count=args.correction)
    sys.stdout.write(format_report(report))
    if args.out:
        Path(args.out).write_text(emit_report(report), encoding="utf-8")
    if args.plot_spec:
        Path(args.plot_spec).write_text(emit_plot_spec(report), encoding="utf-8")
    return 0


def _cmd_validate_tables(args) -> int:
    tables = _load_tables_arg(args)
    for kind in sorted(tables, key=lambda k: k.value):
        table = tables[kind]
        print(
            f"ok: {kind.value} ({table.scale_name}) bands={len(table.bands)} "
            f"domain=[{table.domain_low:g}, {table.domain_high:g}] {table.unit}"
        )
    print("all scale tables pass integrity checks")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _SingleLineParser(prog="summitwx", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="raw forecast text to canonical format")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--source-id", default=None)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("classify", help="hazard icon listing per period and overall")
    p.add_argument("input")
    p.add_argument("--mode", choices=("overall", "per-period"), default=None)
    p.add_argument("--tables", default=None)
    p.add_argument("--triad-thresholds", default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("render", help="render one document under one condition")
    p.add_argument("input")
    p.add_argument("--condition", required=True, choices=tuple(CONDITION_TOKENS))
    p.add_argument("--format", default="plain", choices=FORMATS)
    p.add_argument("--tables", default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("stimuli", help="render a stimulus set into a directory")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--condition", required=True, choices=tuple(CONDITION_TOKENS))
    p.add_argument("--format", default="plain", choices=FORMATS)
    p.add_argument("--tables", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stimuli)

    p = sub.add_parser("stats", help="run the study statistics pipeline")
    p.add_argument("--responses", required=True)
    p.add_argument("--participants", required=True)
    p.add_argument("--correction", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--plot-spec")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("validate-tables", help="integrity-check the scale tables")
    p.add_argument("--tables", default=None)
    p.set_defaults(func=_cmd_validate_tables)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except (OSError, ValueError) as exc:
        message = str(exc).replace("\n", " | ")
        print(f"error: {message}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - exercised via fault injection
        message = str(exc).replace("\n", " | ")
        print(f"internal: {type(exc).__name__}: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
