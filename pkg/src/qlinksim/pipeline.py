"""End-to-end simulation runs: symbols -> states -> channel -> detection -> metrics.

A run is fully determined by its :class:`SimulationConfig`.  Randomness
is drawn from streams keyed by (seed, purpose, channel name, symbol
index), so the transmitted sequence is shared by every channel, results
do not depend on channel order, and the symbol loop could be
parallelized without changing a single bit of output.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .channels import Channel, ChannelConfig
from .channels import config_from_dict as channel_config_from_dict
from .channels import config_to_dict as channel_config_to_dict
from .detection import POVM, build_pgm, decide, decide_sampled, embed_povm_with_erasure
from .metrics import compute_ber, compute_ser
from .modulation import DetectorCodebook, qam_codebook, qpsk_codebook, symbols_to_bits
from .states import DensityMatrix, bloch_vector, leading_qubit_block
from .visualization import (
    bloch_points,
    constellation_point,
    render_bloch_svg,
    render_constellation_svg,
)

try:
    from importlib.metadata import version as _dist_version

    VERSION = _dist_version("qlinksim")
except Exception:  # pragma: no cover - metadata absent in odd environments
    VERSION = "0.0.0"

_U64 = (1 << 64) - 1

STATES_CSV_HEADER = (
    "index",
    "tx_label",
    "rx_label",
    "tx_bloch_x",
    "tx_bloch_y",
    "tx_bloch_z",
    "rx_bloch_x",
    "rx_bloch_y",
    "rx_bloch_z",
    "rx_renorm_trace",
    "tx_i",
    "tx_q",
    "rx_i",
    "rx_q",
)


@dataclass(frozen=True)
class SimulationConfig:
    """One reproducible run: modulation, seed, channel set, output policy."""

    modulation: str
    n_symbols: int
    seed: int
    channels: tuple[tuple[str, ChannelConfig], ...]
    qam_order: int = 16
    decision_mode: str = "argmax"
    output_dir: Path = Path("out")
    emit_states: bool = True
    emit_figures: bool = True

    def __post_init__(self):
        if self.modulation not in ("qpsk", "qam"):
            raise ValueError(f"modulation must be 'qpsk' or 'qam', got {self.modulation!r}")
        if self.n_symbols < 1:
            raise ValueError(f"n_symbols must be >= 1, got {self.n_symbols}")
        if not 0 <= self.seed <= _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.decision_mode not in ("argmax", "sampled"):
            raise ValueError(
                f"decision_mode must be 'argmax' or 'sampled', got {self.decision_mode!r}"
            )
        object.__setattr__(self, "channels", tuple((str(n), c) for n, c in self.channels))
        names = [n for n, _ in self.channels]
        if len(set(names)) != len(names):
            raise ValueError(f"channel names must be unique, got {names}")
        object.__setattr__(self, "output_dir", Path(self.output_dir))

    def channel_config(self, name: str) -> ChannelConfig:
        for n, c in self.channels:
            if n == name:
                return c
        raise ValueError(
            f"no channel named {name!r}; configured: {[n for n, _ in self.channels]}"
        )


@dataclass(frozen=True)
class ChannelRunResult:
    """Metrics and artifact names for one channel of one run."""

    name: str
    ser: float
    ser_count: int
    ber: float
    ber_count: int
    n_symbols: int
    bits_per_symbol: int
    erasure_count: int
    states_csv: str | None = None
    constellation_svg: str | None = None
    bloch_svg: str | None = None


@dataclass(frozen=True)
class SimulationReport:
    """Aggregated comparison output: per-channel results plus run metadata."""

    channels: dict[str, ChannelRunResult]
    config: dict
    version: str
    wall_time_s: float


def build_codebook(cfg: SimulationConfig) -> DetectorCodebook:
    if cfg.modulation == "qpsk":
        return qpsk_codebook()
    return qam_codebook(cfg.qam_order)


def derive_rng(seed: int, *tags) -> np.random.Generator:
    """Independent random stream keyed by the seed and a tag path.

    Tags are hashed, so streams for different (purpose, channel, symbol)
    keys never collide by construction order; this is what makes results
    independent of channel ordering and safe to parallelize.
    """
    words = [seed & _U64]
    for tag in tags:
        digest = hashlib.sha256(str(tag).encode("utf-8")).digest()
        words.append(int.from_bytes(digest[:8], "big"))
    return np.random.default_rng(np.random.SeedSequence(words))


def draw_symbols(cfg: SimulationConfig, alphabet_size: int) -> np.ndarray:
    """Uniform transmitted symbols; one stream per run, shared by all channels."""
    rng = derive_rng(cfg.seed, "symbols")
    return rng.integers(0, alphabet_size, size=cfg.n_symbols)


def _csv_num(x: float) -> str:
    return format(float(x), ".12g")


def write_states_csv(
    path: str | Path,
    tx_states: Sequence[DensityMatrix],
    rx_states: Sequence[DensityMatrix],
    tx_labels: Sequence[int],
    rx_labels: Sequence[int],
    *,
    power_scale: float = 1.0,
    clip_radius: float = 1.5,
) -> None:
    """Per-symbol dump: labels, Bloch projections, I/Q reconstructions.

    Bloch and constellation columns come from the leading-block
    projection, so rows stay well-defined for enlarged (erasure) outputs;
    ``rx_renorm_trace`` records the weight left in the qubit block.
    """
    n = len(tx_states)
    if not (len(rx_states) == len(tx_labels) == len(rx_labels) == n):
        raise ValueError("state and label sequences must have equal lengths")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STATES_CSV_HEADER)
        for idx in range(n):
            tx_block, _ = leading_qubit_block(tx_states[idx])
            rx_block, rx_trace = leading_qubit_block(rx_states[idx])
            tb = bloch_vector(tx_block)
            rb = bloch_vector(rx_block)
            tp = constellation_point(tx_states[idx], power_scale, clip_radius=clip_radius)
            rp = constellation_point(rx_states[idx], power_scale, clip_radius=clip_radius)
            writer.writerow(
                [
                    idx,
                    int(tx_labels[idx]),
                    int(rx_labels[idx]),
                    _csv_num(tb.x),
                    _csv_num(tb.y),
                    _csv_num(tb.z),
                    _csv_num(rb.x),
                    _csv_num(rb.y),
                    _csv_num(rb.z),
                    _csv_num(rx_trace),
                    _csv_num(tp.i),
                    _csv_num(tp.q),
                    _csv_num(rp.i),
                    _csv_num(rp.q),
                ]
            )


def tx_clip_radius(codebook: DetectorCodebook) -> float:
    """Plot clip radius: 1.5x the largest finite transmitted-point radius."""
    reach = 1.0
    for state in codebook.states:
        p = constellation_point(state, codebook.power_scale)
        if not p.clipped:
            reach = max(reach, float(np.hypot(p.i, p.q)))
    return 1.5 * reach


def build_detector(codebook: DetectorCodebook, channel: Channel) -> POVM:
    """Codebook PGM, embedded with an erasure outcome when the channel enlarges."""
    povm = build_pgm(codebook)
    if channel.output_dim > codebook.dim:
        povm = embed_povm_with_erasure(povm, channel.output_dim)
    return povm


def run_simulation(
    cfg: SimulationConfig,
    channel_name: str,
    equalizer: Callable[[DensityMatrix], DensityMatrix] | None = None,
) -> ChannelRunResult:
    """Simulate one named channel and write its per-channel artifacts.

    ``equalizer`` is an optional post-channel hook applied to each
    received state before detection; none is shipped, the default is a
    pass-through.
    """
    codebook = build_codebook(cfg)
    channel = Channel(cfg.channel_config(channel_name), input_dim=codebook.dim)
    povm = build_detector(codebook, channel)

    tx_symbols = draw_symbols(cfg, codebook.M)
    tx_states = [codebook.states[s] for s in tx_symbols]
    rx_states: list[DensityMatrix] = []
    rx_symbols = np.empty(cfg.n_symbols, dtype=int)
    sampled = cfg.decision_mode == "sampled"
    for idx in range(cfg.n_symbols):
        rng = (
            derive_rng(cfg.seed, "channel", channel_name, idx)
            if channel.is_stochastic
            else None
        )
        rho = channel.apply(tx_states[idx], rng)
        if equalizer is not None:
            rho = equalizer(rho)
        rx_states.append(rho)
        if sampled:
            rx_symbols[idx] = decide_sampled(
                povm, rho, derive_rng(cfg.seed, "decision", channel_name, idx)
            )
        else:
            rx_symbols[idx] = decide(povm, rho)

    ser, ser_count = compute_ser(tx_symbols, rx_symbols)
    ber, ber_count = compute_ber(
        symbols_to_bits(tx_symbols, codebook), symbols_to_bits(rx_symbols, codebook)
    )

    states_csv = constellation_svg = bloch_svg = None
    if cfg.emit_states or cfg.emit_figures:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
    if cfg.emit_states:
        states_csv = f"states_{channel_name}.csv"
        write_states_csv(
            cfg.output_dir / states_csv,
            tx_states,
            rx_states,
            tx_symbols,
            rx_symbols,
            power_scale=codebook.power_scale,
            clip_radius=tx_clip_radius(codebook),
        )
    if cfg.emit_figures:
        clip = tx_clip_radius(codebook)
        tx_plot = [
            constellation_point(
                rho, codebook.power_scale, clip_radius=clip, label=int(s)
            )
            for rho, s in zip(tx_states, tx_symbols)
        ]
        rx_plot = [
            constellation_point(
                rho, codebook.power_scale, clip_radius=clip, label=int(s)
            )
            for rho, s in zip(rx_states, rx_symbols)
        ]
        constellation_svg = f"constellation_{channel_name}.svg"
        render_constellation_svg(
            tx_plot,
            rx_plot,
            cfg.output_dir / constellation_svg,
            title=f"constellation: {channel_name}",
        )
        tx_bloch = [
            (vec, int(s)) for (vec, _), s in zip(bloch_points(tx_states), tx_symbols)
        ]
        rx_bloch = [
            (vec, int(s)) for (vec, _), s in zip(bloch_points(rx_states), rx_symbols)
        ]
        bloch_svg = f"bloch_{channel_name}.svg"
        render_bloch_svg(
            tx_bloch,
            rx_bloch,
            cfg.output_dir / bloch_svg,
            title=f"bloch: {channel_name}",
        )

    return ChannelRunResult(
        name=channel_name,
        ser=ser,
        ser_count=ser_count,
        ber=ber,
        ber_count=ber_count,
        n_symbols=cfg.n_symbols,
        bits_per_symbol=codebook.bits_per_symbol,
        erasure_count=int(np.count_nonzero(rx_symbols == -1)),
        states_csv=states_csv,
        constellation_svg=constellation_svg,
        bloch_svg=bloch_svg,
    )


def run_comparison(cfg: SimulationConfig) -> SimulationReport:
    """Run every configured channel on the same symbol stream; write report.json."""
    if not cfg.channels:
        raise ValueError("comparison needs at least one channel")
    start = time.perf_counter()
    entries: dict[str, ChannelRunResult] = {}
    for name, _ in cfg.channels:
        try:
            entries[name] = run_simulation(cfg, name)
        except Exception as err:
            raise RuntimeError(f"channel {name!r} failed: {err}") from err
    report = SimulationReport(
        channels=entries,
        config=config_to_dict(cfg),
        version=VERSION,
        wall_time_s=time.perf_counter() - start,
    )
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    write_report(report, cfg.output_dir / "report.json")
    return report


def report_to_dict(report: SimulationReport) -> dict:
    channels = {}
    for name, r in report.channels.items():
        channels[name] = {
            "ser": r.ser,
            "ser_count": r.ser_count,
            "ber": r.ber,
            "ber_count": r.ber_count,
            "n_symbols": r.n_symbols,
            "bits_per_symbol": r.bits_per_symbol,
            "erasure_count": r.erasure_count,
            "artifacts": {
                "states_csv": r.states_csv,
                "constellation_svg": r.constellation_svg,
                "bloch_svg": r.bloch_svg,
            },
        }
    return {
        "version": report.version,
        "wall_time_s": report.wall_time_s,
        "config": report.config,
        "channels": channels,
    }


def write_report(report: SimulationReport, path: str | Path) -> None:
    # wall_time_s is the single nondeterministic field; everything else is
    # byte-stable for a fixed config.
    text = json.dumps(report_to_dict(report), indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        fh.write("\n")


# --- JSON config round trip ---

_TOP_KEYS = {"modulation", "n_symbols", "seed", "decision_mode", "channels", "output", "notes"}


def config_from_dict(d: Mapping) -> SimulationConfig:
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("modulation", "n_symbols", "seed", "channels"):
        if key not in d:
            raise ValueError(f"config is missing required key {key!r}")
    mod = d["modulation"]
    mod_type = str(mod.get("type", "")).lower()
    if mod_type not in ("qpsk", "qam"):
        raise ValueError(f"modulation.type must be 'qpsk' or 'qam', got {mod.get('type')!r}")
    channels = []
    for entry in d["channels"]:
        entry = dict(entry)
        name = entry.pop("name", None)
        if not name:
            raise ValueError("every channel entry needs a 'name'")
        channels.append((str(name), channel_config_from_dict(entry)))
    output = dict(d.get("output", {}))
    return SimulationConfig(
        modulation=mod_type,
        n_symbols=int(d["n_symbols"]),
        seed=int(d["seed"]),
        channels=tuple(channels),
        qam_order=int(mod.get("M", 16)),
        decision_mode=str(d.get("decision_mode", "argmax")),
        output_dir=Path(output.get("dir", "out")),
        emit_states=bool(output.get("emit_states", True)),
        emit_figures=bool(output.get("emit_figures", True)),
    )


def config_to_dict(cfg: SimulationConfig) -> dict:
    mod: dict = {"type": cfg.modulation}
    if cfg.modulation == "qam":
        mod["M"] = cfg.qam_order
    channels = []
    for name, ch in cfg.channels:
        entry = {"name": name}
        entry.update(channel_config_to_dict(ch))
        channels.append(entry)
    return {
        "modulation": mod,
        "n_symbols": cfg.n_symbols,
        "seed": cfg.seed,
        "decision_mode": cfg.decision_mode,
        "channels": channels,
        "output": {
            "dir": str(cfg.output_dir),
            "emit_states": cfg.emit_states,
            "emit_figures": cfg.emit_figures,
        },
    }


def load_config(path: str | Path) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def default_config_path() -> Path:
    """The shipped example configuration (benchmark defaults, documented)."""
    return Path(resources.files("qlinksim").joinpath("data/default_config.json"))
