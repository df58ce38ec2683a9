import sys
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

from spatialdensity.config import ConfigManager, RunConfig
from spatialdensity.constants import (
    EXIT_IO,
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_USAGE,
    SMOOTHER_CHOICES,
)
from spatialdensity.exceptions import (
    InputFileError,
    InvalidConfigError,
    SolverError,
    SpatialDensityError,
)
from spatialdensity.helpers.filemanager import DefaultFileManager
from spatialdensity.helpers.logger import Logger
from spatialdensity.runner import RUNNERS


class ExitCodeGroup(click.Group):
    """Click group that maps failures onto the documented exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.UsageError as e:
            e.show()
            return self._finish(EXIT_USAGE, standalone_mode)
        except click.Abort:
            click.echo("Aborted!", err=True)
            return self._finish(1, standalone_mode)
        except click.ClickException as e:
            e.show()
            return self._finish(e.exit_code, standalone_mode)
        except SolverError as e:
            click.echo(f"Error: {e}", err=True)
            return self._finish(EXIT_SOLVER, standalone_mode)
        except (InputFileError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            return self._finish(EXIT_IO, standalone_mode)
        except (ValidationError, InvalidConfigError, SpatialDensityError) as e:
            click.echo(f"Error: {e}", err=True)
            return self._finish(EXIT_USAGE, standalone_mode)
        code = rv if isinstance(rv, int) else EXIT_OK
        return self._finish(code, standalone_mode)

    @staticmethod
    def _finish(code: int, standalone_mode: bool):
        if standalone_mode:
            sys.exit(code)
        return code


def _parse_grid(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        rows, cols = (int(v) for v in value.lower().split("x"))
    except ValueError:
        raise click.BadParameter("expected ROWSxCOLS, e.g. 25x25") from None
    if rows < 1 or cols < 1:
        raise click.BadParameter("grid dimensions must be positive")
    return {"rows": rows, "cols": cols}


def _run(ctx: click.Context, subcommand: str, overrides: Dict[str, Any]) -> None:
    options = ctx.obj
    config_path = options["config"]
    if config_path is not None:
        ConfigManager.set(RunConfig.from_yaml(config_path).model_dump(by_alias=True))
    else:
        ConfigManager.set({})
    ConfigManager.update(
        {
            "subcommand": subcommand,
            "seed": options["seed"],
            "workers": options["workers"],
            "out": options["out"],
            "verbose": True if options["verbose"] else None,
            **overrides,
        }
    )
    config = ConfigManager.get()

    file_manager = DefaultFileManager(config.out)
    file_manager.mkdir(".")
    logger = Logger(save_logs=config.save_logs, verbose=config.verbose, log_dir=file_manager.base_path)
    logger.debug(f"Running '{subcommand}' with seed={config.seed}, workers={config.workers}")
    try:
        RUNNERS[subcommand](config, file_manager)
        logger.info(f"'{subcommand}' finished; artifacts in {file_manager.base_path}")
    finally:
        logger.close()


@click.group(cls=ExitCodeGroup)
@click.option("--config", "config_path", type=str, default=None, help="YAML run configuration.")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=None, help="Master seed.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes.")
@click.option("--out", type=str, default=None, help="Output directory.")
@click.option("--verbose", is_flag=True, default=False, help="Debug logging.")
@click.pass_context
def cli(ctx, config_path, seed, workers, out, verbose):
    """sds - spatially smoothed density estimation and anomaly detection"""
    ctx.obj = {
        "config": config_path,
        "seed": seed,
        "workers": workers,
        "out": out,
        "verbose": verbose,
    }


@cli.command()
@click.option("--histograms", type=str, default=None, help="Histogram matrix file.")
@click.option("--records", type=str, default=None, help="One-second record file.")
@click.option("--graph", type=str, default=None, help="Edge-list file.")
@click.option("--grid", callback=_parse_grid, default=None, help="Grid as ROWSxCOLS.")
@click.option("--smoother", type=click.Choice(SMOOTHER_CHOICES), default=None)
@click.option("--depth", type=click.IntRange(min=1), default=None, help="Tree depth.")
@click.option("--lambda", "lam", type=click.FloatRange(min=0), default=None, help="Fixed penalty.")
@click.pass_context
def fit(ctx, histograms, records, graph, grid, smoother, depth, lam):
    """Estimate the spatial density field and write density.txt."""
    _run(
        ctx,
        "fit",
        {
            "inputs": {"histograms": histograms, "records": records, "graph": graph},
            "grid": grid,
            "smoother": smoother,
            "tree": {"depth": depth},
            "solver": {"lambda": lam},
        },
    )


@cli.command()
@click.option("--spectra-dir", type=str, default=None, help="Directory of spectrum CSVs.")
@click.pass_context
def simulate(ctx, spectra_dir):
    """Simulate the configured radiological scenario."""
    _run(ctx, "simulate", {"inputs": {"spectra_dir": spectra_dir}})


@cli.command()
@click.option("--records", type=str, default=None, help="One-second record file.")
@click.pass_context
def inject(ctx, records):
    """Write one bootstrap + anomaly observation per site."""
    _run(ctx, "inject", {"inputs": {"records": records}})


@cli.command()
@click.option("--records", type=str, default=None, help="One-second record file.")
@click.option("--density", type=str, default=None, help="Local reference density.")
@click.option("--graph", type=str, default=None, help="Edge-list file.")
@click.option("--grid", callback=_parse_grid, default=None, help="Grid as ROWSxCOLS.")
@click.pass_context
def detect(ctx, records, density, graph, grid):
    """Run the KS detection protocol and write ROC artifacts."""
    _run(
        ctx,
        "detect",
        {"inputs": {"records": records, "density": density, "graph": graph}, "grid": grid},
    )


@cli.command()
@click.option("--stats", type=str, default=None, help="stats.csv from a detect run.")
@click.pass_context
def roc(ctx, stats):
    """Recompute ROC curves and AUCs from detection statistics."""
    _run(ctx, "roc", {"inputs": {"stats": stats}})


@cli.command()
@click.option("--kind", type=click.Choice(["gaussian", "radiological"]), default=None)
@click.pass_context
def bench(ctx, kind):
    """Benchmark reconstruction error across smoothers."""
    _run(ctx, "bench", {"bench": {"kind": kind}})


@cli.command()
@click.option("--histograms", type=str, default=None, help="Histogram matrix file.")
@click.option("--graph", type=str, default=None, help="Edge-list file.")
@click.option("--grid", callback=_parse_grid, default=None, help="Grid as ROWSxCOLS.")
@click.option("--node", type=str, default=None, help="Tree node as a binary string.")
@click.option("--order", type=click.IntRange(min=0), default=None, help="Trend filtering order.")
@click.option("--depth", type=click.IntRange(min=1), default=None, help="Tree depth.")
@click.pass_context
def bayes(ctx, histograms, graph, grid, node, order, depth):
    """Bayesian trend filtering of one node; writes posterior.csv."""
    _run(
        ctx,
        "bayes",
        {
            "inputs": {"histograms": histograms, "graph": graph},
            "grid": grid,
            "tree": {"depth": depth},
            "bayes": {"node": node, "order": order},
        },
    )


def main():
    cli()


if __name__ == "__main__":
    main()
