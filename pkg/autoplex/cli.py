"""
Command-line interface.

    autoplex word --k 3 --n 7
    autoplex complexity 0102010 --measure an
    autoplex tables --which 1
    autoplex rates --k 2 --max-len 40
    autoplex witness --family fib-japan --n 10 --dot japan.dot
    autoplex constants

Results go to stdout (JSON, text tables, CSV); logs go to stderr.
"""

import functools
import logging
import sys
import time
from pathlib import Path
from typing import Optional

import click

from autoplex import __version__
from autoplex.core.config import load_config
from autoplex.core.errors import AutoplexError, DomainError
from autoplex.core.logging_setup import configure_logging
from autoplex.core.schemas import ComplexityRecord, FamilyMember, SearchConfig
from autoplex.models.words import Word, infinite_prefix, kbonacci_word
from autoplex.services import constructions, tables
from autoplex.services.repetitions import an_lower_family
from autoplex.services.search import aminus_exact, an_exact
from autoplex.utils.results_cache import ResultsCache

logger = logging.getLogger(__name__)

MEASURES = {"an": "AN", "aminus": "AMINUS", "anlower": "ANLOWER"}


def handle_errors(func):
    """Map AutoplexError to its exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AutoplexError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
@click.version_option(version=__version__, prog_name="autoplex")
@click.pass_context
def cli(ctx, verbose: bool):
    """Automatic complexity of k-bonacci words."""
    config = load_config()
    configure_logging(config.log_dir, logging.DEBUG if verbose else config.get_log_level())
    config.log_config()
    ctx.obj = config


@cli.command()
@click.option("--k", "k", type=int, default=2, show_default=True, help="Alphabet size")
@click.option("--n", "n", type=int, default=None, help="Index of the k-bonacci word W_n")
@click.option("--prefix", type=int, default=None, help="Length of a prefix of the infinite word")
@handle_errors
def word(k: int, n: Optional[int], prefix: Optional[int]):
    """Print W_n or a prefix of the infinite k-bonacci word."""
    if (n is None) == (prefix is None):
        raise DomainError("give exactly one of --n and --prefix")
    w = kbonacci_word(k, n) if n is not None else infinite_prefix(k, prefix)
    click.echo(str(w))


def _anlower_record(w: Word) -> ComplexityRecord:
    started = time.perf_counter()
    value, family = an_lower_family(w)
    return ComplexityRecord(
        word=str(w),
        length=len(w),
        measure="ANLOWER",
        value=value,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        method="branch-and-bound",
        family=[FamilyMember(start=o.start, period=o.period, extent=o.extent) for o in family],
    )


@cli.command()
@click.argument("text", required=False)
@click.option("--file", "file_", type=click.Path(exists=True, dir_okay=False), help="Read the word from a file")
@click.option("--measure", type=click.Choice(sorted(MEASURES)), default="an", show_default=True)
@click.option("--budget", type=float, default=None, help="Time budget in seconds")
@click.option("--checkpoint", type=click.Path(dir_okay=False), default=None, help="Checkpoint file for resumable search")
@click.option("--cache", type=click.Path(dir_okay=False), default=None, help="JSONL results cache")
@click.option("--recompute", is_flag=True, help="Compute even when cached, and check against the cache")
@click.option("--threads", type=int, default=None, help="Worker processes for the search")
@click.pass_obj
@handle_errors
def complexity(config, text, file_, measure, budget, checkpoint, cache, recompute, threads):
    """Compute A_N, A- or A_N^lower of a word and print the JSON record."""
    if file_:
        text = Path(file_).read_text().strip()
    if text is None:
        raise DomainError("give a word or --file")
    w = Word.from_string(text)
    kind = MEASURES[measure]

    cache_path = config.resolve_cache_path(cache)
    store = ResultsCache(cache_path) if cache_path else None
    if store is not None and not recompute:
        hit = store.lookup(str(w), kind)
        if hit is not None:
            click.echo(store.as_record(hit).model_dump_json(indent=2))
            return

    if kind == "ANLOWER":
        record = _anlower_record(w)
    else:
        cfg = SearchConfig(
            time_budget=budget,
            checkpoint_path=checkpoint,
            threads=threads or config.threads,
            parallel_split_depth=config.split_depth,
        )
        record = an_exact(w, cfg) if kind == "AN" else aminus_exact(w, cfg)

    click.echo(record.model_dump_json(indent=2))
    if not record.complete:
        click.echo(f"Budget exhausted: value in [{record.lower}, {record.upper}]", err=True)
        sys.exit(3)
    if store is not None:
        store.store(record)


@cli.command("tables")
@click.option("--which", type=click.Choice(["1", "2", "both"]), default="both", show_default=True)
@click.option("--max-n", type=int, default=10, show_default=True)
@click.option("--slow", is_flag=True, help="Also compute the slow A- cells")
@click.option("--csv", "csv_dir", type=click.Path(file_okay=False), default=None, help="Also write CSV files here")
@click.pass_obj
@handle_errors
def tables_cmd(config, which, max_n, slow, csv_dir):
    """Reproduce the Tribonacci (1) and Fibonacci (2) tables."""
    frames = {}
    if which in ("1", "both"):
        cfg = SearchConfig(threads=config.threads, parallel_split_depth=config.split_depth)
        frames["tribonacci"] = tables.tribonacci_table(max_n, slow=slow, cfg=cfg)
    if which in ("2", "both"):
        frames["fibonacci"] = tables.fibonacci_table(max_n)
    for name, df in frames.items():
        click.echo(f"# {name}")
        click.echo(df.to_string(index=False))
        if csv_dir:
            out = Path(csv_dir)
            out.mkdir(parents=True, exist_ok=True)
            df.to_csv(out / f"{name}.csv", index=False)
            logger.info(f"Wrote {out / f'{name}.csv'}")


@cli.command()
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--max-len", type=int, default=40, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV file (stdout when omitted)")
@handle_errors
def rates(k, max_len, out):
    """Export the A_N^lower rate curve with the closed-form rate bounds."""
    df = tables.rate_curve(k, max_len)
    if out:
        df.to_csv(out, index=False)
        logger.info(f"Wrote {len(df)} rows to {out}")
    else:
        click.echo(df.to_csv(index=False), nl=False)


_BUILDERS = {
    "fib": constructions.fibonacci_witness,
    "fib-japan": constructions.fibonacci_japan_witness,
    # Table numbering T_n; the builder works in the shifted context n - 3
    "trib": lambda n: constructions.tribonacci_witness(n - 3),
}


@cli.command()
@click.option("--family", type=click.Choice(sorted(_BUILDERS)), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--dot", type=click.Path(dir_okay=False), default=None, help="Write the automaton as DOT")
@handle_errors
def witness(family, n, dot):
    """Build and verify a witness automaton, print its record."""
    built = _BUILDERS[family](n)
    if dot:
        Path(dot).write_text(built.dot)
        logger.info(f"Wrote {built.automaton.q}-state automaton to {dot}")
    click.echo(built.record.model_dump_json(indent=2))


@cli.command()
@handle_errors
def constants():
    """Print the algebraic constants and rate bounds."""
    df = tables.constants_table()
    click.echo(df.to_string(index=False, float_format=lambda x: f"{x:.12g}"))


def main():
    cli()


if __name__ == "__main__":
    main()
