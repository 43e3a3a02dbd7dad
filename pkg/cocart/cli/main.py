"""Main CLI entry point for cocart."""

from __future__ import annotations

import shlex
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError
from rich.console import Console

from cocart import __version__
from cocart.cli import commands
from cocart.cli.report import Report, error_report
from cocart.cli.workspace import Workspace, load_workspace
from cocart.config import Settings
from cocart.core.exceptions import CocartError, DerivedMissing, NotCertified, NotConverged
from cocart.derived.models import Side
from cocart.utils.logging import configure_logging, get_logger

logger = get_logger(__name__)

METHODS = click.Choice(["auto", "fractions", "zigzag"])

depth_option = click.option(
    "--depth",
    "depth",
    type=click.IntRange(min=1),
    default=None,
    help="Zig-zag depth for this command (overrides the global --depth)",
)


@click.group()
@click.version_option(version=__version__, prog_name="cocart")
@click.option(
    "-w",
    "--workspace",
    "sources",
    multiple=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Workspace source file (repeatable)",
)
@click.option("--budget", type=int, default=None, help="Morphism budget for presentations (COCART_BUDGET)")
@click.option("--depth", type=int, default=None, help="Zig-zag exploration depth (COCART_DEPTH)")
@click.option("--seed", type=int, default=None, help="Seed for randomized searches (COCART_SEED)")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["structured", "text"]),
    default=None,
    help="Report format (COCART_FORMAT)",
)
@click.option("--timing", is_flag=True, help="Record wall-clock time in reports")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    envvar="COCART_LOG_LEVEL",
    help="Set the logging level",
)
@click.option(
    "--log-format",
    type=click.Choice(["human", "json"], case_sensitive=False),
    default="human",
    envvar="COCART_LOG_FORMAT",
    help="Set the logging format",
)
@click.pass_context
def cli(
    ctx: click.Context,
    sources: tuple[Path, ...],
    budget: int | None,
    depth: int | None,
    seed: int | None,
    output_format: str | None,
    timing: bool,
    log_level: str,
    log_format: str,
) -> None:
    """cocart - derived functors of finite categories.

    \b
    Examples:
      # Check a workspace
      cocart -w workspaces/arrow.cat validate

      # Localize [1] at its arrow
      cocart -w workspaces/arrow.cat localize I --w U

      # Left derived functor
      cocart -w workspaces/arrow.cat derive-left f --wc U

      # Derived adjoint pair with a searched right adjoint
      cocart -w workspaces/galois.cat adjoint f --wc W
    """
    ctx.ensure_object(dict)
    overrides = {"budget": budget, "depth": depth, "seed": seed, "format": output_format}
    try:
        if "SETTINGS" in ctx.obj:
            # embedded callers (run_command, tests) pass base settings; flags still win
            ctx.obj["SETTINGS"] = ctx.obj["SETTINGS"].merged(**overrides)
        else:
            ctx.obj["SETTINGS"] = Settings.from_env(**overrides)
            configure_logging(level=log_level, format=log_format)
    except ValidationError as e:
        raise click.UsageError(f"invalid settings: {e.errors()[0]['msg']}") from e
    ctx.obj["SOURCES"] = sources
    ctx.obj["TIMING"] = timing or ctx.obj.get("TIMING", False)
    logger.debug("cli_started", version=__version__, sources=[str(s) for s in sources])


def _workspace(ctx: click.Context) -> Workspace:
    if "WORKSPACE" not in ctx.obj:
        sources = ctx.obj.get("SOURCES", ())
        if not sources:
            raise click.UsageError("no workspace given (use -w PATH)")
        ctx.obj["WORKSPACE"] = load_workspace(sources, ctx.obj["SETTINGS"])
    workspace: Workspace = ctx.obj["WORKSPACE"]
    return workspace


def _status_for(error: CocartError) -> str:
    if isinstance(error, NotCertified | NotConverged):
        return "not_certified"
    if isinstance(error, DerivedMissing):
        return "fails_cocartesian"
    return "error"


def _run(
    ctx: click.Context,
    command: str,
    args: dict[str, Any],
    action: Callable[[Settings], Report],
) -> None:
    """Run one command, turn errors into reports and emit the result."""
    settings: Settings = ctx.obj["SETTINGS"].merged(depth=args.get("depth"))
    echo = {k: v for k, v in args.items() if v is not None and v is not False}
    started = time.perf_counter()
    try:
        report = action(settings)
    except CocartError as e:
        logger.info("command_failed", command=command, error=type(e).__name__, message=str(e))
        report = error_report(command, echo, e)
        report.status = _status_for(e)  # type: ignore[assignment]
    report.command = command
    report.args = echo
    if ctx.obj["TIMING"]:
        report.timing = round(time.perf_counter() - started, 6)

    captured = ctx.obj.get("CAPTURE")
    if captured is not None:
        captured.append(report)
        return
    if settings.format == "text":
        report.render_text(Console())
    else:
        click.echo(report.to_json(), nl=False)
    ctx.exit(report.exit_code)


def _with_workspace(ctx: click.Context, action: Callable[[Workspace, Settings], Report]) -> Callable[[Settings], Report]:
    return lambda settings: action(_workspace(ctx), settings)


@cli.command()
@click.pass_context
def validate(ctx: click.Context) -> None:
    """Validate every category, functor, marking and family."""
    _run(ctx, "validate", {}, _with_workspace(ctx, lambda ws, _: commands.validate_command(ws)))


@cli.command()
@click.pass_context
def parse(ctx: click.Context) -> None:
    """Print the workspace in canonical form."""
    try:
        workspace = _workspace(ctx)
    except CocartError as e:
        _run(ctx, "parse", {}, lambda _: error_report("parse", {}, e))
        return
    click.echo(workspace.to_source(), nl=False)


@cli.command()
@click.argument("category")
@click.option("--w", "marking", help="Marking to invert (default: isomorphisms only)")
@click.option("--method", type=METHODS, default="auto", show_default=True)
@depth_option
@click.pass_context
def localize(ctx: click.Context, category: str, marking: str | None, method: str, depth: int | None) -> None:
    """Localize CATEGORY at a marking."""
    _run(
        ctx,
        "localize",
        {"category": category, "w": marking, "method": method, "depth": depth},
        _with_workspace(ctx, lambda ws, s: commands.localize_command(ws, s, category, marking, method)),  # type: ignore[arg-type]
    )


@cli.command()
@click.argument("functor")
@click.option("--cartesian", is_flag=True, help="Build F_f instead of E_f")
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False, path_type=Path), help="Also write DOT here")
@click.pass_context
def grothendieck(ctx: click.Context, functor: str, cartesian: bool, dot_path: Path | None) -> None:
    """Grothendieck construction of FUNCTOR over [1]."""
    _run(
        ctx,
        "grothendieck",
        {"functor": functor, "cartesian": cartesian},
        _with_workspace(ctx, lambda ws, _: commands.grothendieck_command(ws, functor, cartesian, dot_path)),
    )


def _derive(side: Side) -> Callable[..., None]:
    @click.argument("functor")
    @click.option("--wc", help="Marking of the source")
    @click.option("--wd", help="Marking of the target")
    @click.option("--method", type=METHODS, default="auto", show_default=True)
    @click.option("--preserving", is_flag=True, help="Use the factorization of a W-preserving functor")
    @click.option("--resolution", help="Resolving functor i: C0 -> C (left only)")
    @depth_option
    @click.pass_context
    def command(
        ctx: click.Context,
        functor: str,
        wc: str | None,
        wd: str | None,
        method: str,
        preserving: bool,
        resolution: str | None,
        depth: int | None,
    ) -> None:
        _run(
            ctx,
            f"derive-{side.value}",
            {
                "functor": functor,
                "wc": wc,
                "wd": wd,
                "method": method,
                "preserving": preserving,
                "resolution": resolution,
                "depth": depth,
            },
            _with_workspace(
                ctx,
                lambda ws, s: commands.derive_command(
                    ws, s, functor, wc, wd, side, method, preserving, resolution  # type: ignore[arg-type]
                ),
            ),
        )

    command.__doc__ = f"{side.value.capitalize()} derived functor of FUNCTOR."
    return command


cli.command("derive-left")(_derive(Side.LEFT))
cli.command("derive-right")(_derive(Side.RIGHT))


@cli.command()
@click.argument("left")
@click.option("--right", help="Right adjoint (searched when omitted)")
@click.option("--wc", help="Marking of the source of LEFT")
@click.option("--wd", help="Marking of the target of LEFT")
@click.option("--method", type=METHODS, default="auto", show_default=True)
@depth_option
@click.pass_context
def adjoint(
    ctx: click.Context,
    left: str,
    right: str | None,
    wc: str | None,
    wd: str | None,
    method: str,
    depth: int | None,
) -> None:
    """Derive the adjoint pair LEFT ⊣ RIGHT."""
    _run(
        ctx,
        "adjoint",
        {"left": left, "right": right, "wc": wc, "wd": wd, "method": method, "depth": depth},
        _with_workspace(ctx, lambda ws, s: commands.adjoint_command(ws, s, left, right, wc, wd, method)),  # type: ignore[arg-type]
    )


@cli.command()
@click.argument("functor")
@click.option("--along", help="Functor q to extend along (default: localization of the source)")
@click.option("--wc", help="Marking of the source")
@click.option("--wd", help="Marking of the target")
@click.option("--method", type=METHODS, default="auto", show_default=True)
@click.option("--absolute", is_flag=True, help="Test preservation by functors into [1]")
@depth_option
@click.pass_context
def kan(
    ctx: click.Context,
    functor: str,
    along: str | None,
    wc: str | None,
    wd: str | None,
    method: str,
    absolute: bool,
    depth: int | None,
) -> None:
    """Right Kan extension of FUNCTOR."""
    _run(
        ctx,
        "kan",
        {"functor": functor, "along": along, "wc": wc, "wd": wd, "method": method, "absolute": absolute, "depth": depth},
        _with_workspace(
            ctx, lambda ws, s: commands.kan_command(ws, s, functor, along, wc, wd, method, absolute)  # type: ignore[arg-type]
        ),
    )


@cli.command()
@click.argument("functor")
@click.option("--wc", help="Marking of the source")
@click.pass_context
def deligne(ctx: click.Context, functor: str, wc: str | None) -> None:
    """Compare the Deligne correspondence of FUNCTOR with E_f."""
    _run(
        ctx,
        "deligne",
        {"functor": functor, "wc": wc},
        _with_workspace(ctx, lambda ws, _: commands.deligne_command(ws, functor, wc)),
    )


def _chain_options(func: Callable[..., None]) -> Callable[..., None]:
    for name in ("w2", "w1", "w0"):
        func = click.option(f"--{name}", help=f"Marking of level {name[1]}")(func)
    return func


@cli.command()
@click.argument("f")
@click.argument("g")
@_chain_options
@click.option("--method", type=METHODS, default="auto", show_default=True)
@depth_option
@click.pass_context
def compose(
    ctx: click.Context,
    f: str,
    g: str,
    w0: str | None,
    w1: str | None,
    w2: str | None,
    method: str,
    depth: int | None,
) -> None:
    """Compare the derived functors of F, G and G∘F."""
    _run(
        ctx,
        "compose",
        {"f": f, "g": g, "w0": w0, "w1": w1, "w2": w2, "method": method, "depth": depth},
        _with_workspace(ctx, lambda ws, s: commands.compose_command(ws, s, f, g, (w0, w1, w2), method)),  # type: ignore[arg-type]
    )


@cli.command()
@click.argument("f")
@click.argument("g")
@_chain_options
@click.option("--method", type=METHODS, default="auto", show_default=True)
@depth_option
@click.pass_context
def flat(
    ctx: click.Context,
    f: str,
    g: str,
    w0: str | None,
    w1: str | None,
    w2: str | None,
    method: str,
    depth: int | None,
) -> None:
    """Flatness over [2] of the chain F, G."""
    _run(
        ctx,
        "flat",
        {"f": f, "g": g, "w0": w0, "w1": w1, "w2": w2, "method": method, "depth": depth},
        _with_workspace(ctx, lambda ws, s: commands.flat_command(ws, s, f, g, (w0, w1, w2), method)),  # type: ignore[arg-type]
    )


@cli.command()
@click.argument("name")
@click.option("--adjoint", "with_adjoints", is_flag=True, help="Also derive adjoint pairs")
@click.option("--method", type=METHODS, default="auto", show_default=True)
@depth_option
@click.pass_context
def family(ctx: click.Context, name: str, with_adjoints: bool, method: str, depth: int | None) -> None:
    """Derive the family NAME arrow by arrow."""
    _run(
        ctx,
        "family",
        {"name": name, "adjoint": with_adjoints, "method": method, "depth": depth},
        _with_workspace(ctx, lambda ws, s: commands.family_command(ws, s, name, with_adjoints, method)),  # type: ignore[arg-type]
    )


@cli.command()
@click.option("--attempts", type=int, default=200, show_default=True)
@depth_option
@click.pass_context
def separate(ctx: click.Context, attempts: int, depth: int | None) -> None:
    """Search for a Kan extension that is not a derived functor."""
    seed = ctx.obj["SETTINGS"].seed
    _run(ctx, "separate", {"seed": seed, "attempts": attempts, "depth": depth}, lambda s: commands.separate_command(s, attempts))


@cli.command()
@click.argument("name")
@click.option("--w", "marking", help="Marking to highlight")
@click.option("--cartesian", is_flag=True, help="Draw F_f instead of E_f for a functor")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write to a file")
@click.pass_context
def dot(ctx: click.Context, name: str, marking: str | None, cartesian: bool, output: Path | None) -> None:
    """DOT graph of a category, or of the correspondence of a functor."""
    try:
        text = commands.dot_command(_workspace(ctx), name, marking, cartesian)
    except CocartError as e:
        _run(ctx, "dot", {"name": name}, lambda _: error_report("dot", {}, e))
        return
    if output is not None:
        output.write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
def run(ctx: click.Context, script: Path) -> None:
    """Run one command per line of SCRIPT against the workspace."""
    settings: Settings = ctx.obj["SETTINGS"]
    workspace = _workspace(ctx)
    reports = [
        run_command(workspace, line, settings, timing=ctx.obj["TIMING"])
        for line in script.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    click.echo("[\n" + ",\n".join(r.to_json().rstrip("\n") for r in reports) + "\n]")
    ctx.exit(max((r.exit_code for r in reports), default=0))


def run_command(
    workspace: Workspace, line: str, settings: Settings | None = None, timing: bool = False
) -> Report:
    """Execute one command line (without the program name) against a workspace.

    Usage errors are reported with status ``error``.
    """
    obj: dict[str, Any] = {
        "SETTINGS": settings or Settings(),
        "WORKSPACE": workspace,
        "TIMING": timing,
        "CAPTURE": [],
    }
    args = shlex.split(line)
    try:
        cli.main(args=args, obj=obj, standalone_mode=False, prog_name="cocart")
    except click.ClickException as e:
        return Report(command=args[0] if args else "", status="error", error={"type": "UsageError", "message": e.format_message()})
    captured: list[Report] = obj["CAPTURE"]
    if not captured:
        return Report(command=args[0] if args else "", status="error", error={"type": "UsageError", "message": "no report produced"})
    return captured[-1]
