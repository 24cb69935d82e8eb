"""Command-line front end.

Every command writes one JSON report (stdout or ``--output``) and exits with
0 when the analysis passed, 2 when it ran but did not pass and 1 on bad input.
"""

from __future__ import annotations

import functools
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.table import Table

from trickle_hdx import __version__
from trickle_hdx.complex import WeightedComplex
from trickle_hdx.complex_io import dump_complex, load_complex, parse_complex, to_json
from trickle_hdx.config import AnalysisConfig
from trickle_hdx.decorators import exception_handler
from trickle_hdx.errors import BadParams, ConditionUnsatisfiable, TrickleError
from trickle_hdx.log_system import RunContext, UnifiedLogger
from trickle_hdx.logging_config import setup_logging
from trickle_hdx.partite import (
    dependency_graph,
    epsilon_report,
    epsilon_table,
    product_decomposition,
)
from trickle_hdx.spectra import spectral_profile
from trickle_hdx.trickledown import (
    SCENARIOS,
    Ordering,
    Variant,
    bound_profile,
    build_f_vectors,
    check_conditions,
    coloring_scenario,
    delta_sweep,
    f_vectors_report,
    family_scenario,
    inequality_diagnostics,
    max_feasible_delta,
    minimal_passing_p,
    per_link_conditions,
    scenario_calculator,
    verify_matrix_conditions,
    verify_scalar_conditions,
)
from trickle_hdx.zoo import GeneratorSpec, generate as generate_complex

PROG_NAME = "trickle-hdx"


@dataclass
class RunConfig:
    """Settings shared by every command of one invocation."""

    config: AnalysisConfig
    output: Optional[Path] = None
    command: Optional[str] = None

    def emit(self, report: Any) -> None:
        text = report if isinstance(report, str) else to_json(report)
        if self.output is None:
            click.echo(text, nl=False)
        else:
            self.output.parent.mkdir(parents=True, exist_ok=True)
            self.output.write_text(text)

    def load(self, source: str) -> WeightedComplex:
        if source == "-":
            return parse_complex(click.get_text_stream("stdin").read())
        return load_complex(source)


def _command(func: Callable[..., int]) -> Callable[..., None]:
    """Run a command body, mapping library errors to exit codes."""
    handled = exception_handler(func)

    @functools.wraps(func)
    @click.pass_context
    def wrapper(ctx: click.Context, **kwargs: Any) -> None:
        state: RunConfig = ctx.obj
        state.command = ctx.info_name
        try:
            code = handled(state, **kwargs)
        except TrickleError as e:
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            ctx.exit(e.exit_code)
        ctx.exit(code or 0)

    return wrapper


def _csv_ints(value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise BadParams(f"expected comma-separated integers, got {value!r}") from None


def _edges(value: Optional[str]) -> List[Tuple[int, int]]:
    if not value:
        return []
    edges = []
    for item in value.split(","):
        try:
            u, v = item.split("-")
            edges.append((int(u), int(v)))
        except ValueError:
            raise BadParams(f"edges look like '0-1,1-2', got {item!r}") from None
    return edges


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="YAML configuration file (default: the platform config directory)",
)
@click.option("--workers", type=int, default=None, help="Threads for face sweeps")
@click.option("--log-level", default=None, help="Overrides the config and LOG_LEVEL")
@click.option("--quiet", is_flag=True, help="No log output on stderr")
@click.option("--log-file/--no-log-file", default=None, help="Rotating run log")
@click.option("--zero-tol", type=float, default=None, help="Dependency edge threshold")
@click.option("--eig-tol", type=float, default=None, help="Eigensolver tolerance")
@click.option("--psd-tol", type=float, default=None, help="Loewner-check tolerance")
@click.option("--margin-tol", type=float, default=None, help="Margin tolerance")
@click.option(
    "--max-sweep-types", type=int, default=None, help="Type cap for full sweeps"
)
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the report here instead of stdout",
)
@click.version_option(__version__, prog_name=PROG_NAME)
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[Path],
    workers: Optional[int],
    log_level: Optional[str],
    quiet: bool,
    log_file: Optional[bool],
    zero_tol: Optional[float],
    eig_tol: Optional[float],
    psd_tol: Optional[float],
    margin_tol: Optional[float],
    max_sweep_types: Optional[int],
    output: Optional[Path],
) -> None:
    """Spectral trickle-down analysis of weighted simplicial complexes."""
    try:
        config = AnalysisConfig.load(config_path)
        overrides: Dict[str, Any] = {
            "workers": workers,
            "log_level": log_level.upper() if log_level else None,
            "log_to_file": log_file,
            "zero_tolerance": zero_tol,
            "eig_tolerance": eig_tol,
            "psd_tolerance": psd_tol,
            "margin_tolerance": margin_tol,
            "max_sweep_types": max_sweep_types,
        }
        for key, value in overrides.items():
            if value is not None:
                setattr(config, key, value)
        config.validate()
    except TrickleError as e:
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        ctx.exit(e.exit_code)

    setup_logging(config, quiet=quiet)
    ctx.call_on_close(UnifiedLogger.close)
    ctx.obj = RunConfig(config=config, output=output)


@cli.command()
@click.argument(
    "family",
    type=click.Choice(
        ["coloring", "hardcore", "barbell", "complete_partite", "random_partite"]
    ),
    required=False,
)
@click.option(
    "--spec",
    "spec_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="GeneratorSpec JSON file (any family, including product)",
)
@click.option("--d", "d", type=int, default=None, help="Dimension parameter")
@click.option("--lambda", "lam", type=float, default=None, help="Hardcore activity")
@click.option("--n", type=int, default=None, help="Coloring: number of graph vertices")
@click.option("--edges", default=None, help="Coloring: edges as '0-1,1-2'")
@click.option("--colors", type=int, default=None, help="Coloring: colors 0..q-1")
@click.option("--part-sizes", default=None, help="complete_partite: sizes as '2,2,3'")
@click.option("--part-size", type=int, default=None, help="random_partite: part size")
@click.option("--density", type=float, default=None)
@click.option("--coupling-prob", type=float, default=None)
@click.option("--strength", type=float, default=None)
@click.option("--seed", type=int, default=None)
@_command
def generate(
    state: RunConfig,
    family: Optional[str],
    spec_path: Optional[str],
    d: Optional[int],
    lam: Optional[float],
    n: Optional[int],
    edges: Optional[str],
    colors: Optional[int],
    part_sizes: Optional[str],
    part_size: Optional[int],
    density: Optional[float],
    coupling_prob: Optional[float],
    strength: Optional[float],
    seed: Optional[int],
) -> int:
    """Generate a complex and print it in the complex JSON format."""
    if spec_path is not None:
        spec = GeneratorSpec.model_validate_json(Path(spec_path).read_text())
    elif family is None:
        raise BadParams("give a FAMILY or --spec")
    else:
        params: Dict[str, Any] = {
            "d": d,
            "lambda": lam,
            "n": n,
            "edges": _edges(edges),
            "colors": colors,
            "part_sizes": _csv_ints(part_sizes),
            "part_size": part_size,
            "density": density,
            "coupling_prob": coupling_prob,
            "strength": strength,
        }
        spec = GeneratorSpec(
            family=family,
            params={k: v for k, v in params.items() if v is not None},
            seed=seed,
        )
    X = generate_complex(spec, budget=state.config.enumeration_budget)
    state.emit(dump_complex(X))
    return 0


def _epsilon_table(X: WeightedComplex, cfg: AnalysisConfig):
    return epsilon_table(
        X,
        workers=cfg.workers,
        dense_limit=cfg.dense_limit,
        tol=cfg.eig_tolerance,
        max_types=cfg.max_sweep_types,
        memoize=cfg.memoize_links,
    )


@cli.command()
@click.argument("input", default="-")
@click.option("--per-face", is_flag=True, help="Include every face's lambda2")
@_command
def analyze(state: RunConfig, input: str, per_face: bool) -> int:
    """Worst link eigenvalue per codimension."""
    X = state.load(input)
    cfg = state.config
    profile = spectral_profile(
        X,
        per_face=per_face,
        workers=cfg.workers,
        dense_limit=cfg.dense_limit,
        tol=cfg.eig_tolerance,
        max_types=cfg.max_sweep_types,
        memoize=cfg.memoize_links,
    )
    state.emit(profile)
    return 0 if profile.totally_connected else 2


@cli.command()
@click.argument("input", default="-")
@click.option("--product", is_flag=True, help="Also check the product decomposition")
@_command
def epsilon(state: RunConfig, input: str, product: bool) -> int:
    """Epsilon table and dependency graph of a partite complex."""
    X = state.load(input)
    cfg = state.config
    eps = _epsilon_table(X, cfg)
    G = dependency_graph(eps, cfg.zero_tolerance)
    report = epsilon_report(eps, G)
    if not product:
        state.emit(report)
        return 0
    decomposition = product_decomposition(
        X, tol=cfg.zero_tolerance, strict=True, eps=eps
    )
    state.emit({"epsilon": report, "product": decomposition})
    return 0 if decomposition.is_product else 2


def _analysis_inputs(state: RunConfig, input: str):
    X = state.load(input)
    cfg = state.config
    eps = _epsilon_table(X, cfg)
    return X, eps, dependency_graph(eps, cfg.zero_tolerance)


_ordering_option = click.option(
    "--ordering",
    type=click.Choice([o.value for o in Ordering]),
    default=Ordering.DECREASING.value,
    show_default=True,
    help="Which epsilon takes the largest harmonic weight",
)


@cli.command()
@click.argument("input", default="-")
@click.option("--delta", type=float, default=None, help="Check at this delta")
@click.option("--sweep", type=(float, float, int), default=None,
              help="START STOP COUNT: check on an evenly spaced delta grid")
@click.option("--per-link", is_flag=True, help="Also check every link's own graph")
@click.option("--variant", type=click.Choice([v.value for v in Variant]),
              default=Variant.MAIN.value, show_default=True)
@_ordering_option
@_command
def conditions(
    state: RunConfig,
    input: str,
    delta: Optional[float],
    sweep: Optional[Tuple[float, float, int]],
    per_link: bool,
    variant: str,
    ordering: str,
) -> int:
    """Trickle-down conditions, the largest feasible delta and optional sweeps."""
    _, eps, G = _analysis_inputs(state, input)
    cfg = state.config
    delta_star = max_feasible_delta(
        eps,
        G,
        Variant(variant),
        Ordering(ordering),
        cfg.delta_precision,
        cfg.margin_tolerance,
    )
    out: Dict[str, Any] = {
        "delta_star": delta_star,
        "precision": cfg.delta_precision,
        "variant": variant,
    }
    passed = delta_star is not None

    if sweep is not None:
        start, stop, count = sweep
        if count < 1:
            raise BadParams("a sweep needs at least one point")
        step = (stop - start) / (count - 1) if count > 1 else 0.0
        grid = [start + n * step for n in range(count)]
        out["sweep"] = delta_sweep(
            eps, G, grid, Variant(variant), Ordering(ordering), cfg.margin_tolerance
        )
    at = delta if delta is not None else delta_star
    if at is not None:
        report = check_conditions(
            Variant(variant), eps, G, at, Ordering(ordering), cfg.margin_tolerance
        )
        out["report"] = report
        passed = report.passed
        if per_link:
            out["per_link"] = per_link_conditions(
                eps,
                G,
                at,
                Ordering(ordering),
                cfg.margin_tolerance,
                max_types=cfg.max_sweep_types,
            )
    state.emit(out)
    return 0 if passed else 2


def _certificate(state: RunConfig, eps, G, delta: Optional[float], ordering: str):
    cfg = state.config
    if delta is None:
        delta = max_feasible_delta(
            eps,
            G,
            Variant.MAIN,
            Ordering(ordering),
            cfg.delta_precision,
            cfg.margin_tolerance,
        )
        if delta is None:
            raise ConditionUnsatisfiable("no delta in (0, 1) passes the conditions")
    return build_f_vectors(
        eps, G, delta, Ordering(ordering), max_types=cfg.max_sweep_types
    )


@cli.command()
@click.argument("input", default="-")
@click.option("--delta", type=float, default=None, help="Default: largest feasible")
@_ordering_option
@_command
def certify(state: RunConfig, input: str, delta: Optional[float], ordering: str) -> int:
    """Build the f-vector certificate with its inequality diagnostics."""
    _, eps, G = _analysis_inputs(state, input)
    fv = _certificate(state, eps, G, delta, ordering)
    diagnostics = inequality_diagnostics(fv, eps, G)
    state.emit({"f_vectors": f_vectors_report(fv), "diagnostics": diagnostics})
    return 0 if diagnostics.passed else 2


@cli.command()
@click.argument("input", default="-")
@click.option("--delta", type=float, default=None, help="Default: largest feasible")
@click.option("--per-face", is_flag=True, help="List every face's matrix checks")
@_ordering_option
@_command
def verify(
    state: RunConfig, input: str, delta: Optional[float], per_face: bool, ordering: str
) -> int:
    """Scalar and matrix verification of the certificate."""
    X, eps, G = _analysis_inputs(state, input)
    cfg = state.config
    fv = _certificate(state, eps, G, delta, ordering)
    scalar = verify_scalar_conditions(X, fv, eps=eps, tol=cfg.psd_tolerance)
    matrix = verify_matrix_conditions(
        X,
        fv,
        tol=cfg.psd_tolerance,
        workers=cfg.workers,
        per_face=per_face,
        max_types=cfg.max_sweep_types,
        memoize=cfg.memoize_links,
    )
    state.emit({"scalar": scalar, "matrix": matrix})
    return 0 if scalar.passed and matrix.passed else 2


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


def _bounds_table(profile) -> Table:
    table = Table(title=f"Bounds at delta = {profile.delta:.6g}")
    for name in ("k", "exact", "certified", "main", "classical", "max_degree"):
        table.add_column(name, justify="right")
    for row in profile.rows:
        table.add_row(
            str(row.k),
            _fmt(row.exact),
            _fmt(row.certified),
            _fmt(row.main),
            _fmt(row.classical),
            _fmt(row.max_degree),
        )
    return table


@cli.command()
@click.argument("input", default="-")
@click.option("--delta", type=float, default=None, help="Default: largest feasible")
@click.option("--table", is_flag=True, help="Render the exact-vs-bound table on stderr")
@_ordering_option
@_command
def bounds(
    state: RunConfig, input: str, delta: Optional[float], table: bool, ordering: str
) -> int:
    """Exact gamma_k against certified, main, classical and max-degree bounds."""
    X, eps, G = _analysis_inputs(state, input)
    cfg = state.config
    fv = _certificate(state, eps, G, delta, ordering)
    profile = bound_profile(
        X,
        fv,
        eps=eps,
        workers=cfg.workers,
        tol=cfg.psd_tolerance,
        max_types=cfg.max_sweep_types,
        memoize=cfg.memoize_links,
    )
    if table:
        Console(stderr=True).print(_bounds_table(profile))
    state.emit(profile)
    return 0


@cli.command()
@click.option("--Delta", "Delta", type=int, default=None, help="Max dependency degree")
@click.option("--eps", "eps_value", type=float, default=None, help="Uniform epsilon")
@click.option("--eps-from-p", type=float, default=None, help="eps = sqrt(scale / p)")
@click.option("--eps-scale", type=float, default=1.0, show_default=True)
@click.option("--delta", type=float, default=None, help="Check at this delta")
@click.option("--delta-from-p", type=float, default=None,
              help="delta = 1 - coeff * sqrt(scale / p)")
@click.option("--delta-coeff", type=float, default=2.0, show_default=True)
@click.option("--family", type=click.Choice(sorted(SCENARIOS)), default=None)
@click.option("--p", "p", type=float, default=None, help="Field size for --family")
@click.option("--minimal", is_flag=True, help="Search the smallest passing p")
@click.option("--eta", type=float, default=None, help="List-coloring slack")
@_command
def scenario(
    state: RunConfig,
    Delta: Optional[int],
    eps_value: Optional[float],
    eps_from_p: Optional[float],
    eps_scale: float,
    delta: Optional[float],
    delta_from_p: Optional[float],
    delta_coeff: float,
    family: Optional[str],
    p: Optional[float],
    minimal: bool,
    eta: Optional[float],
) -> int:
    """Condition arithmetic for uniform epsilon patterns."""
    margin_tol = state.config.margin_tolerance
    if family is not None:
        out: Dict[str, Any] = {}
        if p is not None:
            out["report"] = family_scenario(family, p, margin_tol)
        if minimal:
            out["minimal_p"] = minimal_passing_p(family, margin_tol=margin_tol)
            out["stated_threshold"] = SCENARIOS[family].stated_threshold
        if not out:
            raise BadParams("--family needs --p or --minimal")
        state.emit(out)
        report = out.get("report")
        return 0 if report is None or report.passed else 2

    if Delta is None:
        raise BadParams("--Delta is required without --family")
    if eta is not None:
        result = coloring_scenario(Delta, eta, margin_tol)
        state.emit(result)
        return 0 if result.scenario.passed else 2

    if eps_from_p is not None:
        eps_value = math.sqrt(eps_scale / eps_from_p)
    if eps_value is None:
        raise BadParams("give --eps or --eps-from-p")
    if delta_from_p is not None:
        delta = 1.0 - delta_coeff * math.sqrt(eps_scale / delta_from_p)
    report = scenario_calculator(Delta, eps_value, delta, margin_tol)
    state.emit(report)
    return 0 if report.passed else 2


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        with RunContext():
            result = cli.main(args=args, prog_name=PROG_NAME, standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except TrickleError as e:
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        return e.exit_code
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
