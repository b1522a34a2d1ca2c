#!/usr/bin/env python3
"""
AdS kernel - command-line front end.

Runs the invariant suites, renders the named figures and wraps the
construction modules (domains, MGH holonomies, earthquakes, surfaces) in
subcommands that write deterministic JSON, CSV and SVG files.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

# Ensure we can import from the engine directory
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from engine import boundary, domains, earthquake_lab, mgh_holonomy, surfaces_gauss
from engine.config_loader import ConfigLoader, RunConfig
from engine.display import Display
from engine.errors import AdsError, ConfigError, UnknownSuite
from engine.figures import FIGURES, write_figure
from engine.reports import write_json
from engine.verification import SUITES, run_suite, verification_report

log = logging.getLogger("adskernel")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_KERNEL = 3
EXIT_IO = 4


def _pair(text: str) -> tuple:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma separated numbers, got {text!r}")
    return tuple(parts)


def _half_plane_point(text: str) -> complex:
    x, y = _pair(text)
    if y <= 0:
        raise argparse.ArgumentTypeError(f"point {text!r} is not in the upper half-plane")
    return complex(x, y)


def _quad(text: str) -> tuple:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected four comma separated numbers, got {text!r}")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adskernel",
        description="Numerical kernel for anti-de Sitter three-space.",
    )
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default 42)")
    parser.add_argument("--tol-alg", type=float, default=None, help="Algebraic tolerance")
    parser.add_argument("--tol-fd", type=float, default=None, help="Finite-difference tolerance")
    parser.add_argument("--samples", type=int, default=None, help="Circle sample count")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads")
    parser.add_argument("--out", dest="out_dir", default=None, help="Output directory")
    parser.add_argument("--config", default=None, help="Configuration name or path")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--no-color", action="store_true", help="Plain terminal output")

    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run invariant suites")
    verify.add_argument("suite", nargs="?", default="all",
                        help=f"one of {', '.join(SUITES)} or all")
    verify.add_argument("--report", type=Path, default=None, help="JSON report path")

    figure = sub.add_parser("figure", help="Render a named SVG figure")
    figure.add_argument("name", help=f"one of {', '.join(FIGURES)}")
    figure.add_argument("--out", "--output", dest="output", type=Path, default=None, help="SVG path")

    domain = sub.add_parser("domain", help="Invisible domain and convex hull of a meridian")
    domain.add_argument("--meridian", type=Path, required=True, help="Meridian JSON file")
    domain.add_argument("--grid", type=int, default=None, help="Disc grid size")
    domain.add_argument("--report", type=Path, default=None, help="JSON report path")

    mgh = sub.add_parser("mgh", help="Maximal globally hyperbolic examples")
    mgh_sub = mgh.add_subparsers(dest="mgh_command", required=True)
    genus1 = mgh_sub.add_parser("genus1", help="Genus-one torus holonomy report")
    genus1.add_argument("--v1", type=_pair, required=True, help="l,m")
    genus1.add_argument("--v2", type=_pair, required=True, help="l',m'")
    genus1.add_argument("--report", type=Path, default=None, help="JSON report path")
    limit = mgh_sub.add_parser("limit", help="Limit curve of a pair of octagon groups")
    limit.add_argument("--length", type=int, default=None, help="Maximal word length")
    limit.add_argument("--deform", type=_quad, default=(0.0, 0.0, 0.0, 0.0),
                       help="Deformation of the right octagon, four numbers")
    limit.add_argument("--output", type=Path, default=None, help="Meridian JSON path")

    quake = sub.add_parser("quake", help="Earthquake along a finite lamination")
    quake.add_argument("--lamination", type=Path, required=True, help="Lamination JSON file")
    quake.add_argument("--point", type=_half_plane_point, action="append", default=None,
                       help="x,y in the upper half-plane (repeatable)")
    quake.add_argument("--boundary", action="store_true", help="Also sample the boundary map")
    quake.add_argument("--report", type=Path, default=None, help="JSON report path")

    gauss = sub.add_parser("gauss", help="Sample fundamental forms of a test surface")
    gauss.add_argument("--surface", default="plane", help="plane, umbilic:s, graph:c0,..., tetra-slice:z")
    gauss.add_argument("--grid", type=int, default=5, help="Sample grid size")
    gauss.add_argument("--output", type=Path, default=None, help="CSV path")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Defaults < configuration file < command-line flags."""
    config = ConfigLoader().load(args.config)
    return config.merged({
        "seed": args.seed,
        "tol_alg": args.tol_alg,
        "tol_fd": args.tol_fd,
        "samples": args.samples,
        "workers": args.workers,
        "out_dir": args.out_dir,
        "grid": getattr(args, "grid", None) if args.command == "domain" else None,
        "word_length": getattr(args, "length", None),
    })


def _target(path: Optional[Path], cfg: RunConfig, default: str) -> Path:
    return path if path is not None else Path(cfg.out_dir) / default


# =============================================================================
# Commands
# =============================================================================

def cmd_verify(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    results = run_suite(args.suite, cfg)
    print(display.render_header(f"verify {args.suite}", f"seed {cfg.seed}"))
    print(display.render_results(results))
    print(display.render_summary(results))
    path = write_json(verification_report(args.suite, cfg, results),
                      _target(args.report, cfg, f"verify-{args.suite}.json"))
    print(display.render_written(str(path)))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_figure(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    path = write_figure(args.name, cfg, args.output)
    print(display.render_written(str(path), "figure"))
    return EXIT_OK


def cmd_domain(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    meridian = boundary.load_meridian(args.meridian, cfg.samples)
    report = domains.build_domain_report(meridian, cfg.grid, cfg.samples, cfg.hull_samples,
                                         cfg.width_starts, cfg.workers)
    payload = {"command": "domain", "config": cfg.to_dict(), "report": report}
    path = write_json(payload, _target(args.report, cfg, "domain.json"))
    print(f"  width {report.width:.9f}  facets {report.facets}")
    print(display.render_written(str(path)))
    return EXIT_OK


def cmd_mgh(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    if args.mgh_command == "genus1":
        report = mgh_holonomy.genus1_report(mgh_holonomy.TorusHolonomy(args.v1, args.v2))
        payload = {"command": "mgh genus1", "report": report}
        path = write_json(payload, _target(args.report, cfg, "genus1.json"))
        print(f"  free {report.free}  injectivity radius {report.injectivity_radius:.9f}")
    else:
        left = mgh_holonomy.fuchsian_octagon("left")
        right = mgh_holonomy.fuchsian_octagon("right", args.deform)
        curve = mgh_holonomy.limit_curve(mgh_holonomy.FuchsianPair(left, right),
                                         cfg.word_length, cfg.workers)
        path = mgh_holonomy.export_limit_curve(curve, _target(args.output, cfg, "limit-curve.json"))
        print(f"  {len(curve.left)} limit points")
    print(display.render_written(str(path)))
    return EXIT_OK


def cmd_quake(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    lamination = earthquake_lab.load_lamination(args.lamination)
    points = args.point or [earthquake_lab.BASEPOINT]
    report = earthquake_lab.quake_report(lamination, points, cfg.samples if args.boundary else None)
    payload = {"command": "quake", "config": cfg.to_dict(), "report": report}
    path = write_json(payload, _target(args.report, cfg, "quake.json"))
    print(display.render_written(str(path)))
    return EXIT_OK


def cmd_gauss(args: argparse.Namespace, cfg: RunConfig, display: Display) -> int:
    sigma = surfaces_gauss.named_surface(args.surface)
    path = surfaces_gauss.write_forms_csv(sigma, args.grid,
                                          _target(args.output, cfg, f"gauss-{sigma.name.split(':')[0]}.csv"))
    print(display.render_written(str(path), "rows"))
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "figure": cmd_figure,
    "domain": cmd_domain,
    "mgh": cmd_mgh,
    "quake": cmd_quake,
    "gauss": cmd_gauss,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    display = Display(color=not args.no_color and sys.stderr.isatty())

    try:
        cfg = load_config(args)
        log.debug("running %s with %s", args.command, cfg)
        return COMMANDS[args.command](args, cfg, display)
    except (UnknownSuite, ConfigError) as e:
        print(display.render_error(str(e)), file=sys.stderr)
        return EXIT_USAGE
    except AdsError as e:
        print(display.render_error(f"{type(e).__name__}: {e}"), file=sys.stderr)
        return EXIT_KERNEL
    except OSError as e:
        print(display.render_error(str(e)), file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(display.render_error(str(e)), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
