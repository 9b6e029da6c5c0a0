"""Command-line front end for the verification experiments.

One subcommand per verified identity; outputs are static result tables in
CSV or JSON.  Exit code 0 means every check in the run stayed within
tolerance, 1 means a check or quadrature certification failed, 2 means the
invocation itself was invalid.  A key=value config file can stand in for
flags; explicit flags win.  The HEATLINE_BUDGET environment variable
overrides the quadrature node budget.
"""

from __future__ import annotations

from pathlib import Path

import click

from .experiments import ExperimentSpec, export, run
from .quadrature import QuadratureError


def _floats(text: str) -> list[float]:
    try:
        return [float(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError as exc:
        raise click.UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


_KEY_PARSERS = {
    "dim": int,
    "points": int,
    "xi_count": int,
    "tol": float,
    "radius": float,
    "alpha": float,
    "a": float,
    "b": float,
    "xi_max": float,
    "alphas": _floats,
    "xs": _floats,
    "shifts": _floats,
    "etas": _floats,
    "preset": str,
    "measure": str,
    "h": str,
    "format": str,
    "out": str,
}


def _load_config(path: str | None) -> dict:
    """Parse a key = value config file (one pair per line, '#' comments)."""
    if path is None:
        return {}
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise click.UsageError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, value = body.split("=", 1)
        raw[key.strip().lower().replace("-", "_")] = value.strip()
    return raw


def _gather(config_path: str | None, **flags) -> dict:
    """Merge flag values over config-file values; flags win on conflict."""
    cfg = _load_config(config_path)
    merged = {}
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
        elif key in cfg:
            parser = _KEY_PARSERS.get(key, str)
            try:
                merged[key] = parser(cfg[key])
            except ValueError as exc:
                raise click.UsageError(f"bad config value for {key}: {cfg[key]!r}") from exc
    return merged


def _measure_text(value: str | None) -> str | None:
    if value is None:
        return None
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def _alphas_param(merged: dict) -> list[float] | None:
    if merged.get("alphas") is not None:
        return merged["alphas"]
    if merged.get("alpha") is not None:
        return [merged["alpha"]]
    return None


def _print_table(table) -> None:
    status = "PASS" if table.passed else "FAIL"
    click.echo(f"{status} {table.name}: {table.summary} [{len(table.rows)} rows, {table.wall_time_s:.2f}s]")
    click.echo("  " + ",".join(table.columns))
    head = table.rows[:12]
    for row in head:
        click.echo("  " + ",".join(str(c) for c in row))
    if len(table.rows) > len(head):
        click.echo(f"  ... {len(table.rows) - len(head)} more rows")


def _execute(name: str, merged: dict, params: dict) -> None:
    dim = int(merged.get("dim", 1))
    out = merged.get("out")
    fmt = merged.get("format", "csv")
    spec = ExperimentSpec(name=name, dim=dim, params=params)
    try:
        table = run(spec)
    except QuadratureError as exc:
        click.echo(f"error running {name}: {exc}", err=True)
        raise SystemExit(1)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _print_table(table)
    if out:
        data = export(table, fmt)
        Path(out).write_bytes(data)
        click.echo(f"wrote {out} ({len(data)} bytes)")
    raise SystemExit(0 if table.passed else 1)


def _common(fn):
    decorators = [
        click.option("--dim", type=int, default=None, help="Ambient dimension n (default 1)."),
        click.option("--tol", type=float, default=None, help="Check tolerance."),
        click.option("--radius", type=float, default=None, help="Quadrature cube radius."),
        click.option("--points", type=int, default=None, help="Simpson intervals per axis."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the table to this path."),
        click.option("--format", "format_", type=click.Choice(["csv", "json"]), default=None, help="Export format (default csv)."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="key = value config file; flags win."),
    ]
    for dec in reversed(decorators):
        fn = dec(fn)
    return fn


@click.group()
def main() -> None:
    """Numerical verification of the Gauss-Weierstrass transform calculus."""


@main.command("verify-kernels")
@_common
@click.option("--alpha", type=float, default=None, help="Single kernel scale.")
@click.option("--alphas", type=_floats, default=None, help="Comma-separated kernel scales.")
def verify_kernels(alpha, alphas, dim, tol, radius, points, out, format_, config_path):
    """Check the kernel transform pair on a frequency grid."""
    merged = _gather(config_path, dim=dim, tol=tol, alpha=alpha, alphas=alphas, out=out, format=format_)
    _execute("verify-kernels", merged, {"alphas": _alphas_param(merged), "tol": merged.get("tol")})


@main.command("integrate")
@_common
@click.option("--f", "preset", default=None, help="Integrand preset, e.g. weierstrass:0.1.")
def integrate_cmd(preset, dim, tol, radius, points, out, format_, config_path):
    """Integrate a preset over R^n with certified error terms."""
    merged = _gather(config_path, dim=dim, tol=tol, preset=preset, radius=radius, points=points, out=out, format=format_)
    _execute("integrate", merged, {
        "preset": merged.get("preset"),
        "tol": merged.get("tol"),
        "radius": merged.get("radius"),
        "points": merged.get("points"),
    })


@main.command("fourier")
@_common
@click.option("--f", "preset", default=None, help="Function preset to transform.")
@click.option("--xi-max", type=float, default=None, help="Frequency grid half-width.")
@click.option("--xi-count", type=int, default=None, help="Number of frequency samples.")
def fourier_cmd(preset, xi_max, xi_count, dim, tol, radius, points, out, format_, config_path):
    """Tabulate the transform of a preset along the first frequency axis."""
    merged = _gather(config_path, dim=dim, tol=tol, preset=preset, xi_max=xi_max, xi_count=xi_count, out=out, format=format_)
    _execute("fourier", merged, {
        "preset": merged.get("preset"),
        "tol": merged.get("tol"),
        "xi_max": merged.get("xi_max"),
        "xi_count": merged.get("xi_count"),
    })


@main.command("invert")
@_common
@click.option("--f", "preset", default=None, help="Function preset to invert.")
@click.option("--alpha", type=float, default=None, help="Single summability scale.")
@click.option("--alphas", type=_floats, default=None, help="Summability ladder.")
@click.option("--xs", type=_floats, default=None, help="Sample points.")
def invert_cmd(preset, alpha, alphas, xs, dim, tol, radius, points, out, format_, config_path):
    """Gauss-summable inversion against direct smoothing, along a ladder."""
    merged = _gather(config_path, dim=dim, tol=tol, preset=preset, alpha=alpha, alphas=alphas, xs=xs, out=out, format=format_)
    _execute("invert", merged, {
        "preset": merged.get("preset"),
        "alphas": _alphas_param(merged),
        "xs": merged.get("xs"),
        "tol": merged.get("tol"),
    })


@main.command("mollify")
@_common
@click.option("--f", "preset", default=None, help="Function preset to smooth.")
@click.option("--alpha", type=float, default=None, help="Smoothing scale.")
@click.option("--xs", type=_floats, default=None, help="Sample points.")
def mollify_cmd(preset, alpha, xs, dim, tol, radius, points, out, format_, config_path):
    """Smooth a preset and check both contraction inequalities."""
    merged = _gather(config_path, dim=dim, tol=tol, preset=preset, alpha=alpha, xs=xs, out=out, format=format_)
    _execute("mollify", merged, {
        "preset": merged.get("preset"),
        "alpha": merged.get("alpha"),
        "xs": merged.get("xs"),
        "tol": merged.get("tol"),
    })


@main.command("multiplication")
@_common
@click.option("--a", type=float, default=None, help="First kernel scale.")
@click.option("--b", type=float, default=None, help="Second kernel scale.")
def multiplication_cmd(a, b, dim, tol, radius, points, out, format_, config_path):
    """Both sides of the transform duality for a pair of kernels."""
    merged = _gather(config_path, dim=dim, tol=tol, a=a, b=b, out=out, format=format_)
    _execute("multiplication", merged, {"a": merged.get("a"), "b": merged.get("b"), "tol": merged.get("tol")})


@main.command("modulate")
@_common
@click.option("--f", "preset", default=None, help="Function preset to modulate.")
@click.option("--shifts", type=_floats, default=None, help="Modulation frequencies a.")
@click.option("--etas", type=_floats, default=None, help="Evaluation frequencies eta.")
def modulate_cmd(preset, shifts, etas, dim, tol, radius, points, out, format_, config_path):
    """Check the shift rule for modulated transforms on an (a, eta) grid."""
    merged = _gather(config_path, dim=dim, tol=tol, preset=preset, shifts=shifts, etas=etas, out=out, format=format_)
    _execute("modulate", merged, {
        "preset": merged.get("preset"),
        "shifts": merged.get("shifts"),
        "etas": merged.get("etas"),
        "tol": merged.get("tol"),
    })


@main.command("measure-ft")
@_common
@click.option("--measure", default=None, help='Measure JSON literal, or @file.')
@click.option("--xi-max", type=float, default=None, help="Frequency grid half-width.")
@click.option("--xi-count", type=int, default=None, help="Number of frequency samples.")
def measure_ft_cmd(measure, xi_max, xi_count, dim, tol, radius, points, out, format_, config_path):
    """Tabulate the transform of a bounded measure."""
    merged = _gather(config_path, dim=dim, tol=tol, measure=measure, xi_max=xi_max, xi_count=xi_count, out=out, format=format_)
    _execute("measure-ft", merged, {
        "measure": _measure_text(merged.get("measure")),
        "tol": merged.get("tol"),
        "xi_max": merged.get("xi_max"),
        "xi_count": merged.get("xi_count"),
    })


@main.command("measure-invert")
@_common
@click.option("--measure", default=None, help='Measure JSON literal, or @file.')
@click.option("--alphas", type=_floats, default=None, help="Summability ladder.")
@click.option("--xs", type=_floats, default=None, help="Sample points along the first axis.")
def measure_invert_cmd(measure, alphas, xs, dim, tol, radius, points, out, format_, config_path):
    """Measure inversion against direct measure smoothing."""
    merged = _gather(config_path, dim=dim, tol=tol, measure=measure, alphas=alphas, xs=xs, out=out, format=format_)
    _execute("measure-invert", merged, {
        "measure": _measure_text(merged.get("measure")),
        "alphas": merged.get("alphas"),
        "xs": merged.get("xs"),
        "tol": merged.get("tol"),
    })


@main.command("weak-convergence")
@_common
@click.option("--measure", default=None, help='Measure JSON literal, or @file.')
@click.option("--h", "h_preset", default=None, help="Bounded pairing preset.")
@click.option("--alphas", type=_floats, default=None, help="Smoothing ladder.")
def weak_convergence_cmd(measure, h_preset, alphas, dim, tol, radius, points, out, format_, config_path):
    """Pair the smoothed measure against h along a ladder of scales."""
    merged = _gather(
        config_path, dim=dim, tol=tol, measure=measure, h=h_preset, alphas=alphas,
        radius=radius, points=points, out=out, format=format_,
    )
    _execute("weak-convergence", merged, {
        "measure": _measure_text(merged.get("measure")),
        "h": merged.get("h"),
        "alphas": merged.get("alphas"),
        "radius": merged.get("radius"),
        "points": merged.get("points"),
        "tol": merged.get("tol"),
    })


if __name__ == "__main__":
    main()
