"""Display and formatting functions for console, JSON and CSV output."""

import csv
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict
from typing import Any, Optional, TextIO

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from rainbow_mantel.config import Constants
from rainbow_mantel.graph_core import GraphTriple
from rainbow_mantel.models import (
    BenchRow,
    Certificate,
    ChainStep,
    DensityReport,
    LemmaResult,
    RainbowWitness,
    RunConfig,
    SearchOutcome,
)
from rainbow_mantel.utils import edge_lines

console = Console()
err_console = Console(stderr=True)

SEARCH_CSV_COLUMNS = ("n", "value", "exact", "nodes", "seconds")
BENCH_CSV_COLUMNS = ("kind", "n", "work", "seconds", "rate")


# === DISPLAY HELPERS ===


def json_text(data: Any) -> str:
    """Pretty JSON text with a trailing newline, for files."""
    return json.dumps(data, indent=2) + "\n"


def print_json(data: Any) -> None:
    """Machine-readable JSON on stdout, never wrapped or highlighted."""
    console.print(
        json.dumps(data, indent=2),
        markup=False,
        highlight=False,
        emoji=False,
        soft_wrap=True,
    )


def print_error(message: str) -> None:
    """Error line on stderr."""
    err_console.print(
        f"❌ {message}", style="red", markup=False, highlight=False, soft_wrap=True
    )


def _finite(value: float) -> Optional[float]:
    """None for infinities so the value stays valid JSON."""
    return value if math.isfinite(value) else None


def format_run_config(run: RunConfig) -> dict[str, Any]:
    """Settings of the invocation, echoed under "run" in every JSON payload."""
    return {
        "subcommand": run.subcommand,
        "seed": run.seed,
        "threads": run.threads,
        "output": run.output,
        "format": run.format.value,
    }


def format_triple_edges(t: GraphTriple) -> list[list[int]]:
    """Edges as [colour, u, v] in canonical order."""
    return [[int(x) for x in line.split()] for line in edge_lines(t)]


# === CONSTRUCT / CHECK ===


def format_density_json(
    report: DensityReport, predicted: tuple[float, float]
) -> dict[str, Any]:
    """JSON payload of construct: sizes, edge counts and density comparison."""
    size_a = report.n - 2 * report.block
    return {
        "n": report.n,
        "block": report.block,
        "sizes": {"A": size_a, "B": report.block, "C": report.block},
        "edges": list(report.edges),
        "predicted": [float(predicted[0]), float(predicted[1])],
        "rainbow_count": report.rainbow_count,
        "min_edges": report.min_edges,
        "min_density": report.min_density,
        "threshold": Constants.THRESHOLD,
        "quarter": report.n * report.n / 4,
        "beats_quarter": report.beats_quarter,
    }


def format_check_json(
    t: GraphTriple,
    rainbow_count: int,
    witness: Optional[RainbowWitness],
    digons: int,
) -> dict[str, Any]:
    """JSON payload of check, with the witness when one exists."""
    data: dict[str, Any] = {
        "n": t.n,
        "edges": list(t.edge_counts()),
        "min_edges": min(t.edge_counts()),
        "rainbow_count": rainbow_count,
        "digons": digons,
    }
    if witness is not None:
        data["witness"] = list(witness.as_tuple())
    return data


# === SEARCH ===


def format_search_json(outcome: SearchOutcome) -> dict[str, Any]:
    """JSON record of one search outcome, witness included."""
    return {
        "n": outcome.n,
        "mode": outcome.mode.value,
        "value": outcome.value,
        "exact": outcome.exact,
        "nodes": outcome.nodes_visited,
        "seconds": outcome.wall_time,
        "witness": {
            "edges": list(outcome.witness.edge_counts()),
            "lines": format_triple_edges(outcome.witness),
        },
    }


def write_search_csv(outcomes: Iterable[SearchOutcome], stream: TextIO) -> None:
    """Write n,value,exact,nodes,seconds rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SEARCH_CSV_COLUMNS)
    for o in outcomes:
        writer.writerow(
            [o.n, o.value, str(o.exact).lower(), o.nodes_visited, f"{o.wall_time:.6f}"]
        )


# === LEMMAS ===


def format_lemmas_json(results: Sequence[LemmaResult]) -> list[dict[str, Any]]:
    """Lemma results with their pass flag."""
    return [{**asdict(r), "passed": r.passed} for r in results]


def display_lemma_table(results: Sequence[LemmaResult]) -> None:
    """Rich table of lemma results on stdout."""
    table = Table(title="Lemma checks", show_header=True, header_style="bold cyan")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Checked", justify="right")
    table.add_column("Failures", justify="right")
    table.add_column("N/A", justify="right")
    table.add_column("Seconds", justify="right")
    table.add_column("Status")
    table.add_column("Scope", style="dim")
    for r in results:
        status = "✅ pass" if r.passed else "❌ FAIL"
        table.add_row(
            r.name,
            str(r.checked),
            str(r.failures),
            str(r.not_applicable) if r.not_applicable else "",
            f"{r.seconds:.2f}",
            status,
            r.detail,
        )
    console.print(table)


# === CERTIFY ===


def format_chain_json(steps: Sequence[ChainStep]) -> list[dict[str, Any]]:
    """Derived chain steps with their pass flag."""
    return [{**asdict(s), "passed": s.passed} for s in steps]


def format_certificate_json(
    cert: Certificate,
    chain: Sequence[ChainStep] = (),
    d_bound: Optional[float] = None,
) -> dict[str, Any]:
    """JSON form of a certificate, optionally with the chain and the final bound."""
    data: dict[str, Any] = {
        "resolution": cert.resolution,
        "max_depth": cert.max_depth,
        "boxes_total": cert.boxes_total,
        "boxes_excluded_by": dict(cert.boxes_excluded_by),
        "undecided": [
            {"lower": list(box.lower), "upper": list(box.upper)} for box in cert.undecided
        ],
        "tangent": {
            "point": list(cert.tangent_point),
            "slacks": list(cert.tangent_slacks),
            "radius": cert.tangent_radius,
            "boxes": cert.tangent_boxes,
            "samples": cert.tangent_samples,
            "violations": cert.tangent_violations,
        },
        "worst_margin": _finite(cert.worst_margin),
        "identities": dict(cert.identities),
        "tolerance": cert.tolerance,
        "complete": cert.complete,
        "seconds": cert.seconds,
    }
    if chain:
        data["chain"] = format_chain_json(chain)
    if d_bound is not None:
        data["final_d_bound"] = d_bound
    return data


def display_certificate_summary(cert: Certificate) -> None:
    """Human summary on stderr so stdout stays valid JSON."""
    excluded = ", ".join(f"{k}: {v}" for k, v in cert.boxes_excluded_by.items())
    lines = [
        f"📦 Boxes: {cert.boxes_total} ({excluded})",
        f"🎯 Tangent boxes: {cert.tangent_boxes}",
        f"❓ Undecided: {len(cert.undecided)}",
    ]
    style = "green" if cert.complete else "red"
    title = "✅ Certificate complete" if cert.complete else "❌ Certificate incomplete"
    err_console.print(Panel("\n".join(lines), title=title, border_style=style))


# === BENCH ===


def write_bench_csv(rows: Iterable[BenchRow], stream: TextIO) -> None:
    """Write kind,n,work,seconds,rate rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(BENCH_CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [row.kind, row.n, row.work, f"{row.seconds:.6f}", f"{row.rate:.1f}"]
        )
