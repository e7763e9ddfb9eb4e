"""Batch command-line driver: calibrate, measure, fit, serve.

Exit codes: 0 success, 1 usage error, 2 schema/IO error, 3 domain error
(degenerate calibration, incomplete feature, ...). Failed commands never
leave a partially written session file; all writes go through the atomic
save in the session module.
"""

from __future__ import annotations

import csv
import dataclasses
import sys
from pathlib import Path

import click

from . import boundary as boundary_mod
from . import reporting, session as session_mod
from .calibration import apply_transform, invert
from .errors import (
    CartometerError,
    InsufficientDataError,
    InvalidInputError,
    SchemaViolationError,
    UncalibratedSessionError,
)

# warn when calibration residual exceeds this fraction of the map diagonal
RESIDUAL_WARN_FRACTION = 0.005


def _parse_inline_pair(text: str):
    try:
        left, right = text.split("=")
        u, v = (float(x) for x in left.split(","))
        a, b = (float(x) for x in right.split(","))
    except ValueError:
        raise click.UsageError(f"bad control pair {text!r}; expected u,v=x,y")
    return (u, v), (a, b)


def _read_pairs_file(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["u", "v", "x", "y"]:
            raise SchemaViolationError(f"{path}: pairs CSV must have header u,v,x,y")
        rows = []
        for i, row in enumerate(reader):
            try:
                rows.append(
                    ((float(row["u"]), float(row["v"])), (float(row["x"]), float(row["y"])))
                )
            except (TypeError, ValueError):
                raise SchemaViolationError(f"{path}: row {i + 2}: non-numeric value")
    return rows


def _build_control_points(raw_pairs, projection: str):
    cps = []
    for pixel, world in raw_pairs:
        if projection == session_mod.PROJECTION_WEB_MERCATOR:
            cps.append(session_mod.make_control_point(pixel, geo=world))
        else:
            cps.append(session_mod.make_control_point(pixel, world=world))
    return cps


@click.group()
def cli():
    """Cartometric measurement over calibrated raster map sessions."""


@cli.command("calibrate")
@click.argument("session_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--pair", "pairs", multiple=True, help="Control pair u,v=x,y (or u,v=lat,lon).")
@click.option("--pairs-file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", type=click.Choice(["similarity", "affine"]), default="similarity")
def cmd_calibrate(session_path: Path, pairs, pairs_file, kind):
    """Fit the pixel-to-world transform from control points and store it."""
    raw = [_parse_inline_pair(p) for p in pairs]
    if pairs_file is not None:
        raw += _read_pairs_file(pairs_file)
    if len(raw) < 2:
        raise InsufficientDataError("insufficient control points (need >= 2)")
    sess = session_mod.load_session(session_path)
    cps = _build_control_points(raw, sess.projection)
    sess = session_mod.set_calibration(sess, cps, kind=kind)
    session_mod.save_session(sess, session_path)

    transform = sess.calibration.transform
    residual = session_mod.convert_display(transform.rms_residual, sess.display_unit, "length")
    click.echo(f"residual {residual:#.6g} {sess.display_unit}")
    corners = [
        (0, 0),
        (sess.image.width_px, 0),
        (sess.image.width_px, sess.image.height_px),
        (0, sess.image.height_px),
    ]
    world = apply_transform(transform, corners)
    diag = float(((world[2] - world[0]) ** 2).sum() ** 0.5)
    if diag > 0 and transform.rms_residual > RESIDUAL_WARN_FRACTION * diag:
        click.echo(
            f"warning: residual exceeds {RESIDUAL_WARN_FRACTION:.1%} of the map diagonal",
            err=True,
        )


@cli.command("measure")
@click.argument("session_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("feature_id")
@click.option("--unit", type=click.Choice(sorted(session_mod.LENGTH_UNIT_FACTORS)), default=None)
@click.option("--json", "as_json", is_flag=True, help="Single-line JSON instead of text.")
def cmd_measure(session_path: Path, feature_id: str, unit, as_json):
    """Measure a traced feature (length for routes, area for regions)."""
    sess = session_mod.load_session(session_path)
    if unit is not None:
        sess = dataclasses.replace(sess, display_unit=unit)
    report = session_mod.measure_feature(sess, feature_id)
    if as_json:
        click.echo(reporting.dumps_measurement(report))
    else:
        click.echo(reporting.format_measurement_text(report))


@cli.command("fit")
@click.argument("session_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("feature_id")
@click.option("--n", "n_harmonics", type=int, default=None, help="Harmonic count.")
@click.option("--emit-samples", type=int, default=None, metavar="M",
              help="Write M sampled boundary points back as a new region feature.")
@click.option("--error-curve", type=int, default=None, metavar="N_MAX",
              help="Print a CSV of (n, rms_error, area) for n = 1..N_MAX.")
@click.option("--json", "as_json", is_flag=True)
def cmd_fit(session_path: Path, feature_id: str, n_harmonics, emit_samples, error_curve, as_json):
    """Fit a continuous Fourier boundary to a traced region."""
    sess = session_mod.load_session(session_path)
    feature = sess.feature(feature_id)
    if feature.kind != session_mod.REGION:
        raise InvalidInputError("fit requires a region feature")
    if sess.calibration is None:
        raise UncalibratedSessionError("session has no calibration; calibrate first")
    world = apply_transform(sess.calibration.transform, list(feature.points))

    if error_curve is not None:
        rows = boundary_mod.fit_error_curve(world, error_curve)
        click.echo(reporting.error_curve_csv(rows))
        return

    report = boundary_mod.fit_fourier_boundary(world, n_harmonics)
    samples = boundary_mod.sample_boundary(report.boundary, 256)
    if as_json:
        click.echo(reporting.dumps_fit(feature_id, report, samples))
    else:
        click.echo(reporting.format_fit_text(feature_id, report))

    if emit_samples is not None:
        pts = boundary_mod.sample_boundary(report.boundary, emit_samples)
        back = apply_transform(invert(sess.calibration.transform), pts)
        new_feature = session_mod.Feature(
            id=f"{feature_id}__fourier",
            kind=session_mod.REGION,
            name=f"{feature.name} (fourier n={report.boundary.n})",
            points=tuple((float(u), float(v)) for u, v in back),
        )
        sess = session_mod.add_feature(sess, new_feature)
        session_mod.save_session(sess, session_path)
        click.echo(f"wrote feature {new_feature.id} ({emit_samples} points)")


@cli.command("serve")
@click.argument("session_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1", help="Bind address (loopback by default).")
@click.option("--ui-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
def cmd_serve(session_dir: Path, port, host, ui_dir):
    """Serve the REST API and static UI assets until interrupted."""
    import socket

    import uvicorn

    from .service import create_app

    # probe the port first so a busy port exits 2 instead of a uvicorn traceback
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((host, port))

    app = create_app(session_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except SchemaViolationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except CartometerError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
