"""Command-line front end: run, compare, plot.

`run` simulates one channel (or all of them) from a JSON config,
`compare` runs the full multi-channel sweep and writes report.json,
`plot` re-renders figures from a previously written states CSV.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from pathlib import Path

from .pipeline import (
    SimulationConfig,
    default_config_path,
    load_config,
    run_comparison,
    run_simulation,
)
from .states import BlochVector
from .visualization import (
    ConstellationPlotPoint,
    render_bloch_svg,
    render_constellation_svg,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlinksim",
        description="Qubit link simulator: channels, square-root-measurement "
        "detection, BER/SER metrics, SVG diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate configured channels one at a time")
    run_p.add_argument("--channel", help="restrict to one named channel")
    cmp_p = sub.add_parser("compare", help="run all channels and write report.json")
    for p in (run_p, cmp_p):
        p.add_argument(
            "--config",
            type=Path,
            help="JSON config file (the shipped example config when omitted)",
        )
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--symbols", type=int, help="override the symbol count")
        p.add_argument("--output-dir", type=Path, help="override the output directory")

    plot_p = sub.add_parser("plot", help="re-render figures from a states CSV")
    plot_p.add_argument("--states", type=Path, required=True, help="states_<channel>.csv")
    plot_p.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


def _load(args: argparse.Namespace) -> SimulationConfig:
    cfg = load_config(args.config if args.config else default_config_path())
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.symbols is not None:
        overrides["n_symbols"] = args.symbols
    if args.output_dir is not None:
        overrides["output_dir"] = args.output_dir
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _load(args)
    names = [args.channel] if args.channel else [n for n, _ in cfg.channels]
    for name in names:
        result = run_simulation(cfg, name)
        print(
            f"{result.name}: SER {result.ser:.6g} ({result.ser_count}/{result.n_symbols}), "
            f"BER {result.ber:.6g} ({result.ber_count}/"
            f"{result.n_symbols * result.bits_per_symbol}), "
            f"erasures {result.erasure_count}"
        )
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = _load(args)
    report = run_comparison(cfg)
    for name, r in report.channels.items():
        print(f"{name}: SER {r.ser:.6g}, BER {r.ber:.6g}, erasures {r.erasure_count}")
    print(f"report written to {cfg.output_dir / 'report.json'}")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    tx_pts, rx_pts, tx_bloch, rx_bloch = _read_states_csv(args.states)
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.states.stem
    channel = stem[len("states_"):] if stem.startswith("states_") else stem
    cpath = args.out / f"constellation_{channel}.svg"
    bpath = args.out / f"bloch_{channel}.svg"
    render_constellation_svg(tx_pts, rx_pts, cpath, title=f"constellation: {channel}")
    render_bloch_svg(tx_bloch, rx_bloch, bpath, title=f"bloch: {channel}")
    print(f"wrote {cpath} and {bpath}")
    return 0


def _read_states_csv(path: Path):
    """Rebuild plot inputs from the stored columns.

    The CSV does not record clip flags, so replotted constellations show
    previously clipped points as plain dots at the clip radius.
    """
    tx_pts: list[ConstellationPlotPoint] = []
    rx_pts: list[ConstellationPlotPoint] = []
    tx_bloch: list[tuple[BlochVector, int]] = []
    rx_bloch: list[tuple[BlochVector, int]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            tx_label = int(row["tx_label"])
            rx_label = int(row["rx_label"])
            tx_pts.append(
                ConstellationPlotPoint(float(row["tx_i"]), float(row["tx_q"]), tx_label)
            )
            rx_pts.append(
                ConstellationPlotPoint(float(row["rx_i"]), float(row["rx_q"]), rx_label)
            )
            tx_bloch.append(
                (
                    BlochVector(
                        float(row["tx_bloch_x"]),
                        float(row["tx_bloch_y"]),
                        float(row["tx_bloch_z"]),
                    ),
                    tx_label,
                )
            )
            rx_bloch.append(
                (
                    BlochVector(
                        float(row["rx_bloch_x"]),
                        float(row["rx_bloch_y"]),
                        float(row["rx_bloch_z"]),
                    ),
                    rx_label,
                )
            )
    if not tx_pts:
        raise ValueError(f"no data rows in {path}")
    return tx_pts, rx_pts, tx_bloch, rx_bloch


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "compare": _cmd_compare, "plot": _cmd_plot}
    try:
        return handlers[args.command](args)
    except Exception as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
