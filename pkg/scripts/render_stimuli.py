#!/usr/bin/env python3
"""Render a stimulus set for a presentation study.

Parses each input forecast, renders all of them under one layout condition
and format, and writes numbered files plus an index.tsv keyed by payload
checksum. Equivalent to `summitwx stimuli`, kept as a script so a study
run is reproducible from the repository alone.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from summitwx.layout import (
    CONDITION_TOKENS,
    FORMATS,
    condition_from_token,
    render_stimulus_set,
)
from summitwx.textparse import format_diagnostic, parse_forecast

REPO = Path(__file__).resolve().parent.parent

EXTENSIONS = {"plain": "txt", "svg": "svg", "html": "html"}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("inputs", nargs="*", type=Path)
    parser.add_argument("--condition", required=True, choices=sorted(CONDITION_TOKENS))
    parser.add_argument("--format", default="plain", choices=FORMATS)
    parser.add_argument("--out", required=True, type=Path)
    args = parser.parse_args(argv)

    paths = args.inputs or sorted((REPO / "tests" / "fixtures").glob("*.txt"))
    docs = []
    for path in paths:
        text = path.read_text(encoding="utf-8")
        result = parse_forecast(text, source_id=path.stem)
        if result.document is None:
            for diag in result.errors:
                print(f"{path.name}: {format_diagnostic(diag, text)}", file=sys.stderr)
            return 1
        docs.append(result.document)

    condition = condition_from_token(args.condition)
    renders, index = render_stimulus_set(docs, condition, format=args.format)
    args.out.mkdir(parents=True, exist_ok=True)
    ext = EXTENSIONS[args.format]
    for i, (doc, rendered) in enumerate(zip(docs, renders)):
        slug = re.sub(r"[^a-z0-9]+", "-", doc.source_id.lower()).strip("-") or "forecast"
        (args.out / f"{i + 1:02d}-{slug}.{ext}").write_bytes(rendered.payload)
    (args.out / "index.tsv").write_text(index, encoding="utf-8")
    print(f"wrote {len(renders)} stimuli and index.tsv to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
