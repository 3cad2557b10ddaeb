import csv
import io
import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from rich.console import Console
from rich.table import Table
from typing_extensions import Annotated

from . import __version__
from ._config import AnalysisConfig
from ._dataset import find_knot, load_bundled, load_dataset
from ._engine import AnalysisReport, analyze
from ._exceptions import DomainError, UntwistError
from ._floer import upsilon_of
from ._forms import lens_spectrum
from ._knots import KnotRecord, torus_knot
from ._numeric import enumerate_forms, format_rational
from ._signatures import torus_signature_samples
from ._table import TableDiff, load_bundled_table, load_expected_table, reproduce_table

app = typer.Typer(
    name="untwist",
    help="Obstruct unknotting a knot with a single full twist.",
    no_args_is_help=True,
)

console = Console()
error_console = Console(stderr=True)


class OutputFormat(str, Enum):
    text = "text"
    json = "json"
    csv = "csv"


class Definite(str, Enum):
    pos = "pos"
    neg = "neg"
    indef = "indef"


class FormParity(str, Enum):
    even = "even"
    odd = "odd"


DEFINITENESS = {"pos": "positive", "neg": "negative", "indef": "indefinite"}


def _version(value: bool) -> None:
    if value:
        console.print(f"untwist {__version__}")
        raise typer.Exit(0)


@app.callback()
def main(
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Log debug output to stderr")
    ] = False,
    version: Annotated[
        Optional[bool],
        typer.Option("--version", callback=_version, is_eager=True),
    ] = None,
) -> None:
    if verbose:
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG,
            format="%(levelname)s [%(name)s] %(message)s",
        )


def _fail(message: str) -> typer.Exit:
    error_console.print(f"[red]{message}[/red]")
    return typer.Exit(1)


def _records(data: Optional[Path]) -> List[KnotRecord]:
    if data is None:
        return load_bundled()
    try:
        with data.open("rb") as stream:
            return load_dataset(stream)
    except OSError as exc:
        raise _fail(f"Cannot read {data}: {exc.strerror}")


def _print_json(document: Any) -> None:
    typer.echo(json.dumps(document, indent=2, ensure_ascii=False))


def _print_csv(header: List[str], rows: List[List[str]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    typer.echo(buffer.getvalue(), nl=False)


# analyze


def _render_report(report: AnalysisReport, output: OutputFormat) -> None:
    if output is OutputFormat.json:
        _print_json(report.as_dict())
        return
    if output is OutputFormat.csv:
        _print_csv(
            ["knot", "index", "status", "reasons"],
            [
                [
                    report.knot,
                    str(verdict.index),
                    verdict.status.value,
                    "; ".join(f"{name}: {detail}" for name, detail in verdict.reasons),
                ]
                for verdict in report.verdicts
            ],
        )
        return

    table = Table(title=f"Twist indices of {report.knot}")
    table.add_column("Index")
    table.add_column("Status")
    table.add_column("Reasons")
    styles = {"known": "green", "possible": "yellow", "obstructed": "red"}
    for verdict in report.verdicts:
        status = verdict.status.value
        reasons = "\n".join(f"{name}: {detail}" for name, detail in verdict.reasons)
        if not reasons and verdict.notes:
            reasons = "\n".join(f"({name}: {detail})" for name, detail in verdict.notes)
        table.add_row(
            verdict.index.pretty(), f"[{styles[status]}]{status}[/]", reasons
        )
    console.print(table)
    known = ", ".join(index.pretty() for index in report.known) or "none"
    possible = ", ".join(index.pretty() for index in report.possible) or "none"
    console.print(f"Known: {known}")
    console.print(f"Possible: {possible}")
    for note in report.notes:
        console.print(f"[dim]note: {note}[/dim]")
    console.print(f"[dim]convention: {report.convention_note}[/dim]")


@app.command(name="analyze")
def analyze_cmd(
    knot: Annotated[
        str,
        typer.Option("--knot", "-k", help="Knot name or construction, eg. 'T(2,3)'"),
    ],
    data: Annotated[
        Optional[Path], typer.Option("--data", help="Dataset file (bundled by default)")
    ] = None,
    max_l: Annotated[
        int, typer.Option("--max-l", min=1, help="Largest linking number examined")
    ] = 16,
    output: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="Output format")
    ] = OutputFormat.text,
    lenient: Annotated[
        bool,
        typer.Option("--lenient", help="Report obstructed known indices as notes"),
    ] = False,
) -> None:
    """
    Classify the candidate twist indices of one knot.
    """
    try:
        record = find_knot(_records(data), knot)
        report = analyze(record, AnalysisConfig(max_l=max_l, strict=not lenient))
    except UntwistError as exc:
        raise _fail(str(exc))
    _render_report(report, output)


# torus


def _torus_document(record: KnotRecord, samples: Dict[Any, int]) -> Dict[str, Any]:
    upsilon = upsilon_of(record)
    assert record.v_seq is not None and upsilon is not None
    return {
        "knot": record.name,
        "genus": record.genus,
        "determinant": record.determinant,
        "arf": record.arf,
        "signature": record.signature,
        "v_seq": list(record.v_seq.values),
        "nu_plus": record.v_seq.nu_plus,
        "upsilon": [
            [format_rational(t), format_rational(value)]
            for t, value in upsilon.breakpoints
        ],
        "signature_samples": {format_rational(x): v for x, v in samples.items()},
    }


@app.command()
def torus(
    p: Annotated[int, typer.Argument(help="First torus parameter")],
    q: Annotated[int, typer.Argument(help="Second torus parameter")],
    denominators: Annotated[
        int,
        typer.Option("--denominators", min=2, help="Largest sample denominator"),
    ] = 8,
    output: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="text, json or csv")
    ] = OutputFormat.text,
) -> None:
    """
    Show the invariants of the torus knot T(p,q).
    """
    try:
        record = torus_knot(p, q)
        samples = torus_signature_samples(record.torus.p, record.torus.q, denominators)  # type: ignore[union-attr]
    except UntwistError as exc:
        raise _fail(str(exc))
    document = _torus_document(record, samples)
    if output is OutputFormat.json:
        _print_json(document)
        return
    if output is OutputFormat.csv:
        fields = ("knot", "genus", "determinant", "arf", "signature", "nu_plus")
        rows = [[field, str(document[field])] for field in fields]
        rows += [[f"V_{k}", str(v)] for k, v in enumerate(document["v_seq"])]
        rows += [[f"upsilon({t})", value] for t, value in document["upsilon"]]
        rows += [
            [f"sigma({x})", str(value)]
            for x, value in document["signature_samples"].items()
        ]
        _print_csv(["field", "value"], rows)
        return

    console.print(f"[bold]{record.name}[/bold]")
    for field in ("genus", "determinant", "arf", "signature", "nu_plus"):
        console.print(f"{field}: {document[field]}")
    console.print(f"V: {', '.join(str(v) for v in document['v_seq'])}")
    upsilon = ", ".join(f"({t}, {value})" for t, value in document["upsilon"])
    console.print(f"Upsilon breakpoints: {upsilon}")
    table = Table(title="Tristram-Levine signatures")
    table.add_column("x")
    table.add_column("σ_x", justify="right")
    for x, value in document["signature_samples"].items():
        table.add_row(x, str(value))
    console.print(table)


# lens


@app.command()
def lens(
    p: Annotated[int, typer.Argument(help="Order of the lens space")],
    q: Annotated[int, typer.Argument(help="Second lens space parameter")],
    output: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="text, json or csv")
    ] = OutputFormat.text,
) -> None:
    """
    List the d-invariants of L(p,q).
    """
    try:
        spectrum = lens_spectrum(p, q)
    except DomainError as exc:
        raise _fail(str(exc))
    values = [format_rational(value) for value in spectrum]
    if output is OutputFormat.json:
        _print_json({"p": p, "q": q, "d": values})
    elif output is OutputFormat.csv:
        _print_csv(["d"], [[value] for value in values])
    else:
        console.print(f"d(L({p},{q})): {', '.join(values)}")


# forms


@app.command()
def forms(
    det: Annotated[int, typer.Option("--det", min=1, help="Determinant D")],
    parity: Annotated[
        FormParity, typer.Option("--parity", help="Parity of the diagonal entry")
    ],
    definite: Annotated[
        Definite, typer.Option("--definite", help="pos, neg or indef")
    ] = Definite.pos,
    output: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="text, json or csv")
    ] = OutputFormat.text,
) -> None:
    """
    List the symmetric forms [[a, b], [b, a]] of determinant ±D.
    """
    try:
        found = sorted(
            enumerate_forms(det, parity.value, DEFINITENESS[definite.value])  # type: ignore[arg-type]
        )
    except DomainError as exc:
        raise _fail(str(exc))
    if output is OutputFormat.json:
        _print_json([{"a": form.a, "b": form.b} for form in found])
    elif output is OutputFormat.csv:
        _print_csv(["a", "b"], [[str(form.a), str(form.b)] for form in found])
    else:
        for form in found:
            console.print(f"[[{form.a}, {form.b}], [{form.b}, {form.a}]]")


# table


def _render_diff(diff: TableDiff, output: OutputFormat) -> None:
    if output is OutputFormat.json:
        _print_json(
            {"matches": diff.ok, "rows": [row.as_dict() for row in diff.rows]}
        )
        return
    if output is OutputFormat.csv:
        _print_csv(
            ["knot", "known", "unknown", "matches"],
            [
                [
                    row.knot,
                    " ".join(map(str, row.known or [])),
                    " ".join(map(str, row.unknown or [])),
                    "yes" if row.matches else "no",
                ]
                for row in diff.rows
            ],
        )
        return

    table = Table(title="Known and unknown twist indices")
    table.add_column("Knot")
    table.add_column("Known")
    table.add_column("Unknown")
    table.add_column("")
    for row in diff.rows:
        known = ", ".join(index.pretty() for index in row.known or [])
        unknown = ", ".join(index.pretty() for index in row.unknown or [])
        mark = "[green]ok[/]" if row.matches else "[red]differs[/]"
        table.add_row(row.knot, known, unknown, mark)
    console.print(table)
    for row in diff.mismatches:
        console.print(f"[red]{row.describe()}[/red]")
    matched = len(diff.rows) - len(diff.mismatches)
    console.print(f"{matched}/{len(diff.rows)} rows match")


@app.command()
def table(
    data: Annotated[
        Optional[Path], typer.Option("--data", help="Dataset file (bundled by default)")
    ] = None,
    check: Annotated[
        Optional[Path],
        typer.Option("--check", help="Expected table (bundled by default)"),
    ] = None,
    max_workers: Annotated[
        int, typer.Option("--workers", min=1, help="Knots analysed at once")
    ] = 4,
    output: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="Output format")
    ] = OutputFormat.text,
) -> None:
    """
    Reproduce the table of known and unknown twist indices.
    """
    try:
        records = _records(data)
        if check is None:
            expected = load_bundled_table()
        else:
            with check.open("rb") as stream:
                expected = load_expected_table(stream)
        config = AnalysisConfig(max_workers=max_workers)
        diff = reproduce_table(records, expected, config)
    except OSError as exc:
        raise _fail(f"Cannot read {check}: {exc.strerror}")
    except UntwistError as exc:
        raise _fail(str(exc))
    _render_diff(diff, output)
    if not diff.ok:
        raise typer.Exit(2)
