"""Command line entry points.

spindiode sweep  --config cfg.json --out table.csv --format csv|json
spindiode figure <preset> --out <dir> [--points N] [--format csv|json]
spindiode steady --model model.json --bias forward|reverse

Exit codes: 0 on success, 2 for configuration or validation problems,
1 for runtime failures (solver breakdowns, numerical aborts).  The
worker count falls back to the SPINDIODE_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .liouville import assemble_liouvillian
from .models import ModelSpec, build_hamiltonian, chain_ends, current_bonds
from .observables import BiasSetup, bond_current, magnetization_profile
from .presets import FIGURE_PRESETS, run_preset
from .steadystate import steady_state_solve
from .sweep import SweepConfig, default_workers, export, run_sweep

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    """User input that fails validation (files, JSON, names, ranges)."""


def _load_text(path: str, what: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{what} not found: {path}")
    return p.read_text()


def _cmd_sweep(args) -> int:
    text = _load_text(args.config, "sweep config")
    try:
        config = SweepConfig.from_json(text)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid sweep config: {exc}") from None
    if args.workers is not None:
        config = SweepConfig(
            model=config.model,
            axes=config.axes,
            coupled=config.coupled,
            bath=config.bath,
            outputs=config.outputs,
            workers=args.workers,
        )
    table = run_sweep(config)
    export(table, args.format, args.out)
    n_failed = sum(1 for row in table.rows if row[-1])
    print(f"wrote {args.out}: {len(table.rows)} rows ({n_failed} failed)")
    return EXIT_RUNTIME if n_failed == len(table.rows) else EXIT_OK


def _cmd_figure(args) -> int:
    if args.preset not in FIGURE_PRESETS:
        known = ", ".join(sorted(FIGURE_PRESETS))
        raise ConfigError(f"unknown preset {args.preset!r}; available: {known}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = args.workers if args.workers is not None else default_workers()
    tables = run_preset(args.preset, points=args.points, workers=workers)
    ext = args.format
    for part, table in tables.items():
        path = out_dir / f"{args.preset}_{part}.{ext}"
        export(table, ext, path)
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_steady(args) -> int:
    raw = args.model
    if Path(raw).is_file():
        raw = Path(raw).read_text()
    try:
        spec = ModelSpec.from_json(raw)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid model: {exc}") from None

    H = build_hamiltonian(spec)
    first, last = chain_ends(spec)
    hot, cold = (first, last) if args.bias == "forward" else (last, first)
    setup = BiasSetup(hot_site=hot, cold_site=cold, gamma=args.gamma)
    from .observables import _shadow_channels

    L = assemble_liouvillian(H, setup.dissipators() + _shadow_channels(spec))
    result = steady_state_solve(L)
    rho = result.rho_ss
    bonds = current_bonds(spec)
    j_a = bond_current(rho, spec.n_sites, bonds[0])
    j_b = bond_current(rho, spec.n_sites, bonds[1])
    doc = {
        "variant": spec.variant.value,
        "bias": args.bias,
        "hot_site": hot,
        "cold_site": cold,
        "gamma": args.gamma,
        "J": 0.5 * (j_a + j_b),
        "continuity": abs(j_a - j_b),
        "magnetization": [float(x) for x in magnetization_profile(rho)],
        "residual": result.residual,
    }
    json.dump(doc, sys.stdout, indent=1)
    print()
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spindiode", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a declarative parameter sweep")
    sweep.add_argument("--config", required=True, help="sweep config JSON file")
    sweep.add_argument("--out", required=True, help="output table path")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.set_defaults(func=_cmd_sweep)

    figure = sub.add_parser("figure", help="regenerate the data behind a figure")
    figure.add_argument("preset", help="preset name, e.g. fig2a")
    figure.add_argument("--out", required=True, help="output directory")
    figure.add_argument("--format", choices=("csv", "json"), default="csv")
    figure.add_argument("--points", type=int, default=None, help="override grid resolution")
    figure.add_argument("--workers", type=int, default=None)
    figure.set_defaults(func=_cmd_figure)

    steady = sub.add_parser("steady", help="solve one steady state, print metrics JSON")
    steady.add_argument("--model", required=True, help="model JSON (inline or a file path)")
    steady.add_argument("--bias", choices=("forward", "reverse"), required=True)
    steady.add_argument("--gamma", type=float, default=1.0, help="bath coupling (default 1)")
    steady.set_defaults(func=_cmd_steady)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # solver/runtime failures
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
