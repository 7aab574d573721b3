"""Click CLI commands for rainbow Mantel experiments."""

import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from rainbow_mantel.bench import run_bench
from rainbow_mantel.certify import (
    certify_infeasible,
    derived_chain_checks,
    final_d_bound,
    identities_hold,
)
from rainbow_mantel.config import Config
from rainbow_mantel.constructions import (
    build_construction,
    construction_report,
    near_tau_block,
    predicted_counts,
    validate_params,
)
from rainbow_mantel.display import (
    console,
    display_certificate_summary,
    display_lemma_table,
    format_certificate_json,
    format_check_json,
    format_density_json,
    format_lemmas_json,
    format_run_config,
    format_search_json,
    json_text,
    print_error,
    print_json,
    write_bench_csv,
    write_search_csv,
)
from rainbow_mantel.graph_core import blow_up
from rainbow_mantel.lemma_lab import run_lemma_suite
from rainbow_mantel.models import (
    CertificationError,
    ConstructionParams,
    GraphFormatError,
    InitStrategy,
    OutputFormat,
    RunConfig,
    SearchMode,
    ValidationError,
)
from rainbow_mantel.rainbow import (
    count_rainbow_triangles,
    find_rainbow_triangle,
    list_digons,
)
from rainbow_mantel.search import run_search
from rainbow_mantel.utils import parse_int_list, read_triple, setup_logging, write_triple

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _seed_option(f):  # type: ignore[no-untyped-def]
    return click.option(
        "--seed",
        type=int,
        default=Config.default_seed,
        show_default=f"${Config.SEED_ENV} or {Config.DEFAULT_SEED}",
        help="Seed of the run's random generator",
    )(f)


def _threads_option(f):  # type: ignore[no-untyped-def]
    return click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=Config.default_threads,
        show_default=f"${Config.THREADS_ENV} or all cores",
        help="Worker threads for branch-and-bound jobs (results do not depend on it)",
    )(f)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
def cli(verbose: bool) -> None:
    """Rainbow Mantel toolkit: constructions, searches, lemma checks and certificates."""
    setup_logging(verbose)


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Number of vertices")
@click.option(
    "--block", type=int, default=None, help="|B| = |C| (default: round(tau * n))"
)
@click.option(
    "--blow-up", "factor", type=int, default=1, show_default=True,
    help="Replace each vertex by this many clones",
)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the triple here")
def construct(n: int, block: Optional[int], factor: int, out: Optional[str]) -> int:
    """Build the {A, B, C} construction and report its edge densities.

    Examples:
        rainbow-mantel construct --n 20 --block 3
        rainbow-mantel construct --n 900 --block 135 --out c900.txt
    """
    try:
        params = ConstructionParams(n, block if block is not None else near_tau_block(n))
        validate_params(params)
        report = construction_report(params)
        predicted = predicted_counts(n, Fraction(params.block, n))
        data = format_density_json(report, predicted)
        if factor != 1 or out:
            triple = blow_up(build_construction(params), factor)
            data["blow_up"] = {"k": factor, "n": triple.n, "edges": list(triple.edge_counts())}
            if out:
                write_triple(triple, out)
                data["out"] = out
        print_json(data)
        return EXIT_OK
    except ValidationError as e:
        print_error(f"Validation error: {e}")
        return EXIT_USAGE
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
def check(path: str) -> int:
    """Count rainbow triangles in a graph-triple file."""
    try:
        triple = read_triple(path)
        witness = find_rainbow_triangle(triple)
        print_json(
            format_check_json(
                triple,
                count_rainbow_triangles(triple),
                witness,
                len(list_digons(triple)),
            )
        )
        return EXIT_OK
    except GraphFormatError as e:
        print_error(f"Format error in {path}: {e}")
        return EXIT_USAGE
    except ValidationError as e:
        print_error(f"Validation error: {e}")
        return EXIT_USAGE
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


@cli.command()
@click.option("--n", "n_list", required=True, help='Vertex count, or a sweep like "2,3,4"')
@click.option(
    "--mode",
    type=click.Choice([m.value for m in SearchMode]),
    default=SearchMode.BNB.value,
    show_default=True,
)
@click.option("--budget", type=click.IntRange(min=1), default=Config.DEFAULT_BUDGET,
              show_default=True, help="Branch-and-bound node limit")
@click.option("--iterations", type=click.IntRange(min=0),
              default=Config.DEFAULT_ITERATIONS, show_default=True,
              help="Local search steps")
@click.option(
    "--init",
    type=click.Choice([s.value for s in InitStrategy]),
    default=InitStrategy.BIPARTITE.value,
    show_default=True,
    help="Local search starting triple",
)
@click.option("--block", type=int, default=None, help="Block size for --init construction")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False),
              help="Also write n,value,exact,nodes,seconds rows here")
@_seed_option
@_threads_option
def search(
    n_list: str,
    mode: str,
    budget: int,
    iterations: int,
    init: str,
    block: Optional[int],
    csv_path: Optional[str],
    seed: int,
    threads: int,
) -> int:
    """Compute R(n) exactly (exhaustive, bnb) or bound it from below (local).

    Examples:
        rainbow-mantel search --n 3 --mode exhaustive
        rainbow-mantel search --n 2,3,4,5 --mode bnb --csv r.csv
        rainbow-mantel search --n 20 --mode local --init construction
    """
    try:
        sizes = parse_int_list(n_list, "--n")
        if not sizes:
            raise ValidationError("--n needs at least one vertex count")
        run = RunConfig("search", seed, output=csv_path, threads=threads)
        outcomes = [
            run_search(
                n,
                SearchMode(mode),
                budget=budget,
                threads=threads,
                seed=seed,
                iterations=iterations,
                init=InitStrategy(init),
                block=block,
            )
            for n in sizes
        ]
        if csv_path:
            with open(csv_path, "w", encoding="utf-8", newline="") as stream:
                write_search_csv(outcomes, stream)
        results = [format_search_json(o) for o in outcomes]
        payload = results[0] if len(results) == 1 else {"results": results}
        print_json({**payload, "run": format_run_config(run)})
        return EXIT_OK
    except ValidationError as e:
        print_error(str(e))
        return EXIT_USAGE
    except CertificationError as e:
        print_error(f"Witness failed verification: {e}")
        return EXIT_FAILED
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


@cli.command()
@click.option("--exhaustive-max", type=click.IntRange(min=0),
              default=Config.LEMMA_EXHAUSTIVE_MAX, show_default=True,
              help="Enumerate every graph up to this n")
@click.option("--samples", type=click.IntRange(min=0), default=Config.LEMMA_SAMPLES,
              show_default=True, help="Random inputs per batch and density")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["table", OutputFormat.JSON.value]),
    default="table",
    show_default=True,
)
@_seed_option
def lemmas(exhaustive_max: int, samples: int, output_format: str, seed: int) -> int:
    """Check every counting lemma; exit 1 if any check fails."""
    try:
        results = run_lemma_suite(exhaustive_max, samples, seed)
        if output_format == OutputFormat.JSON.value:
            run = RunConfig("lemmas", seed, format=OutputFormat.JSON)
            print_json({"results": format_lemmas_json(results), "run": format_run_config(run)})
        else:
            display_lemma_table(results)
            console.print(f"🎲 seed {seed}", style="dim")
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    except ValidationError as e:
        print_error(str(e))
        return EXIT_USAGE
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


@cli.command()
@click.option("--resolution", type=click.IntRange(min=Config.MIN_RESOLUTION),
              default=Config.DEFAULT_RESOLUTION, show_default=True,
              help="Grid cells per unit on each axis")
@click.option("--max-depth", type=click.IntRange(min=0), default=Config.MAX_REFINE_DEPTH,
              show_default=True, help="Bisections allowed per undecided box")
@click.option("--chain-samples", type=click.IntRange(min=0),
              default=Config.CHAIN_SAMPLES, show_default=True,
              help="Sampled points for the derived inequality chain")
@click.option("--json", "json_path", type=click.Path(dir_okay=False),
              help="Also write the certificate here")
@_seed_option
def certify(
    resolution: int,
    max_depth: int,
    chain_samples: int,
    json_path: Optional[str],
    seed: int,
) -> int:
    """Certify that the density inequalities have no common solution."""
    try:
        cert = certify_infeasible(resolution, max_depth=max_depth, seed=seed)
        chain = derived_chain_checks(chain_samples, seed) if chain_samples else []
        d_bound = final_d_bound()
        run = RunConfig("certify", seed, output=json_path)
        data = {
            **format_certificate_json(cert, chain, d_bound),
            "run": format_run_config(run),
        }
        if json_path:
            Path(json_path).write_text(json_text(data), encoding="utf-8")
        print_json(data)
        display_certificate_summary(cert)
        passed = (
            cert.complete
            and identities_hold(cert.identities, cert.tolerance)
            and all(step.passed for step in chain)
        )
        return EXIT_OK if passed else EXIT_FAILED
    except ValidationError as e:
        print_error(str(e))
        return EXIT_USAGE
    except CertificationError as e:
        print_error(f"Certification failed: {e}")
        return EXIT_FAILED
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


@cli.command()
@click.option("--sizes", default=",".join(map(str, Config.BENCH_SIZES)), show_default=True,
              help="Vertex counts for rainbow counting (empty for none)")
@click.option("--bnb-sizes", default=",".join(map(str, Config.BENCH_BNB_SIZES)),
              show_default=True, help="Vertex counts for branch and bound (empty for none)")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the CSV here")
@_seed_option
def bench(sizes: str, bnb_sizes: str, out: Optional[str], seed: int) -> int:
    """Measure counting and branch-and-bound throughput as CSV."""
    try:
        rows = run_bench(
            parse_int_list(sizes, "--sizes"), parse_int_list(bnb_sizes, "--bnb-sizes"), seed
        )
        if out:
            with open(out, "w", encoding="utf-8", newline="") as stream:
                write_bench_csv(rows, stream)
        else:
            write_bench_csv(rows, sys.stdout)
        return EXIT_OK
    except ValidationError as e:
        print_error(str(e))
        return EXIT_USAGE
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        return EXIT_FAILED


def run(argv: Optional[list[str]] = None) -> int:
    """Invoke the CLI and map the outcome to an exit code.

    Returns:
        0 on success, 1 on a failed check or unexpected error, 2 on usage errors
    """
    try:
        result = cli.main(args=argv, prog_name="rainbow-mantel", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return EXIT_FAILED
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
