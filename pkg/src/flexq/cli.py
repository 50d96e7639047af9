"""Command-line entry points: translate, run, repl, serve.

Exit codes: 0 success, 1 pipeline error (the query could not be handled),
2 configuration or file errors.
"""

from __future__ import annotations

import sys

import click

from .config import (ENV_CATALOG, ENV_DATA, ENV_KB, ENV_LEXICON, Settings)
from .engine import Engine, TranslateResult
from .errors import CatalogError, ConfigError, FlexqError, LexiconError
from .executor import ResultSet


@click.group()
@click.option("--workdir", default=".", show_default=True,
              help="Base directory for relative paths.")
@click.option("--catalog", envvar=ENV_CATALOG, default=None,
              help="Catalog JSON file (default: packaged fixture).")
@click.option("--data", envvar=ENV_DATA, default=None,
              help="Directory holding the CSV data files.")
@click.option("--lexicon", envvar=ENV_LEXICON, default=None,
              help="Lexicon JSON file (default: packaged fixture).")
@click.option("--kb", envvar=ENV_KB, default=None,
              help="Knowledge journal path (default: ./flexq_kb.jsonl).")
@click.option("--max-distance", default=2, show_default=True,
              help="Fuzzy match threshold for table/field fallback.")
@click.option("--damerau", is_flag=True,
              help="Allow adjacent transpositions in fuzzy matching.")
@click.pass_context
def main(ctx, workdir, catalog, data, lexicon, kb, max_distance, damerau):
    """Translate flexible natural-language queries into SQL and run them."""
    ctx.obj = Settings.with_defaults(
        workdir=workdir, catalog=catalog, data=data, lexicon=lexicon, kb=kb,
        max_distance=max_distance, use_damerau=damerau)


def _engine(settings: Settings) -> Engine:
    try:
        return Engine.from_settings(settings)
    except (CatalogError, LexiconError, ConfigError) as exc:
        click.echo(f"error: [{exc.stage}] {exc.code}: {exc}", err=True)
        sys.exit(2)


def _print_error(exc: FlexqError):
    click.echo(f"error: [{exc.stage}] {exc.code}: {exc}", err=True)
    for name, distance in exc.candidates:
        click.echo(f"  candidate: {name} (distance {distance})", err=True)
    if exc.remedy:
        click.echo(f"  hint: {exc.remedy['hint']} ({exc.remedy['cli']})",
                   err=True)


def _fail(exc: FlexqError):
    _print_error(exc)
    sys.exit(1)


def _print_translation(result: TranslateResult):
    click.echo(result.sql)
    click.echo(f"-- source: {result.source}")
    for step in result.trace:
        click.echo(f"-- [{step.stage}] {step.input} -> {step.outcome}")
    for warning in result.warnings:
        click.echo(f"-- warning: {warning}")


def _print_grid(rs: ResultSet):
    headers = [f"{t}.{f}" for t, f in rs.columns]
    cells = [["" if c is None else str(c) for c in row] for row in rs.rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    click.echo("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    click.echo("  ".join("-" * w for w in widths))
    for row in cells:
        click.echo("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    click.echo(f"({rs.row_count} row{'s' if rs.row_count != 1 else ''})")


@main.command()
@click.argument("query")
@click.pass_obj
def translate(settings: Settings, query: str):
    """Print the SQL and resolution trace for QUERY."""
    engine = _engine(settings)
    try:
        result = engine.translate(query)
    except FlexqError as exc:
        _fail(exc)
    _print_translation(result)


@main.command()
@click.argument("query")
@click.pass_obj
def run(settings: Settings, query: str):
    """Translate QUERY, execute it, and print the result grid."""
    engine = _engine(settings)
    try:
        result = engine.translate(query)
        rs = engine.execute_id(result.query_id)
    except FlexqError as exc:
        _fail(exc)
    _print_translation(result)
    _print_grid(rs)


@main.command()
@click.pass_obj
def repl(settings: Settings):
    """Interactive loop: query -> SQL -> results -> accept/reject."""
    engine = _engine(settings)
    click.echo("flexq repl; empty line or 'quit' to leave")
    while True:
        try:
            raw = click.prompt("flexq", prompt_suffix="> ", default="",
                               show_default=False)
        except (EOFError, click.Abort):
            break
        raw = raw.strip()
        if not raw or raw.lower() in ("quit", "exit"):
            break
        try:
            result = engine.translate(raw)
            _print_translation(result)
            rs = engine.execute_id(result.query_id)
            _print_grid(rs)
        except FlexqError as exc:
            _print_error(exc)
            continue
        try:
            verdict = click.prompt("accept/reject/skip", default="skip",
                                   show_default=False)
        except (EOFError, click.Abort):
            break
        verdict = verdict.strip().lower()
        if verdict in ("accept", "reject"):
            entry = engine.feedback_id(result.query_id, verdict)
            click.echo(f"recorded: {entry.status} "
                       f"(accepts={entry.accepts}, rejects={entry.rejects})")
    click.echo("bye")


@main.command("add-conjunction")
@click.argument("word")
@click.pass_obj
def add_conjunction(settings: Settings, word: str):
    """Teach the lexicon a new conjunction WORD and persist it."""
    engine = _engine(settings)
    try:
        lexicon = engine.add_conjunction_word(word)
    except FlexqError as exc:
        _fail(exc)
    click.echo("conjunctions: " + ", ".join(sorted(lexicon.conjunctions)))


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_obj
def serve(settings: Settings, port: int, host: str):
    """Start the HTTP API."""
    import uvicorn

    from .service import create_app

    engine = _engine(settings)
    uvicorn.run(create_app(engine), host=host, port=port)


if __name__ == "__main__":
    main()
