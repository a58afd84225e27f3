"""Command-line interface.

Subcommands: ``run`` (config-file driven), the figure scenarios
``fig1|fig2|fig3|fig5|fig6`` and ``spectrum`` (single-point spectrum
dump).  Exit codes: 0 success, 2 config error, 3 solver error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, SolverError
from .params import TWO_PI
from .scenarios import (
    ResultTable,
    ScenarioConfig,
    config_from_mapping,
    dump_csv,
    offresonant_qd_params,
    read_config,
    run_scenario,
    write_csv,
)
from .spectra import default_spectrum_grid, emission_spectrum

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _parse_overrides(pairs) -> dict:
    raw = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got '{item}'")
        key, _, val = item.partition("=")
        raw[key.strip()] = val.strip()
    return raw


def _add_common(sub):
    sub.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE", dest="sets",
                     help="override a parameter (repeatable)")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bichrome",
                                description="Driven QD-cavity pump-probe simulator")
    p.add_argument("--version", action="version", version=f"bichrome {__version__}")
    subs = p.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run a scenario described by a config file")
    run.add_argument("--config", required=True, help="flat key = value config file")
    run.add_argument("--out", default=None, help="output CSV path (overrides config)")
    run.add_argument("--jobs", type=int, default=None)

    for fig in ("fig1", "fig2", "fig3", "fig5", "fig6"):
        sub = subs.add_parser(fig, help=f"run the {fig} scenario")
        _add_common(sub)

    spec = subs.add_parser("spectrum", help="dump a single emission spectrum")
    _add_common(spec)
    spec.add_argument("--points", type=int, default=601)

    return p


def _emit(table: ResultTable, out_path) -> None:
    if out_path is None:
        dump_csv(table, sys.stdout)
    else:
        write_csv(table, out_path)


def _cmd_spectrum(args) -> None:
    overrides = config_from_mapping(_parse_overrides(args.sets)).overrides
    params = offresonant_qd_params(overrides=overrides)
    grid = default_spectrum_grid(params, points=args.points)
    spec = emission_spectrum(params, grid)
    rows = [[float(w / TWO_PI), float(v)] for w, v in zip(spec.omega_grid, spec.values)]
    prov = {f"param.{k}": v for k, v in params.as_flat_dict().items()}
    prov["z_epsilon_used"] = spec.metadata["z_epsilon"]
    table = ResultTable(columns=["omega_from_pump_ghz", "spectrum"], rows=rows,
                        provenance=prov)
    _emit(table, args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = read_config(args.config)
            if args.jobs is not None:
                config = ScenarioConfig(scenario=config.scenario,
                                        overrides=config.overrides,
                                        sweep=config.sweep,
                                        output_path=config.output_path,
                                        jobs=args.jobs)
            table = run_scenario(config)
            _emit(table, args.out or config.output_path)
        elif args.command == "spectrum":
            _cmd_spectrum(args)
        else:
            overrides = config_from_mapping(_parse_overrides(args.sets)).overrides
            config = ScenarioConfig(scenario=args.command, overrides=overrides,
                                    jobs=args.jobs)
            table = run_scenario(config)
            _emit(table, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
