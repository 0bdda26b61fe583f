import csv
import json

import numpy as np
import pytest

from qlinksim import (
    BosonicConfig,
    DepolarizingConfig,
    ErasureConfig,
    PMDConfig,
    SimulationConfig,
    TurbulenceConfig,
    build_pgm,
    decide,
    default_config_path,
    derive_rng,
    load_config,
    qam_codebook,
    run_comparison,
    run_simulation,
    validate_density,
    write_states_csv,
)
from qlinksim.cli import main as cli_main
from qlinksim.pipeline import (
    STATES_CSV_HEADER,
    config_from_dict,
    config_to_dict,
    draw_symbols,
)


def qpsk_config(tmp_path, channels, n=100, seed=5, **kwargs):
    return SimulationConfig(
        modulation="qpsk",
        n_symbols=n,
        seed=seed,
        channels=channels,
        output_dir=tmp_path / "out",
        **kwargs,
    )


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfigHandling:
    def test_shipped_default_config(self):
        cfg = load_config(default_config_path())
        assert cfg.modulation == "qam"
        assert cfg.qam_order == 16
        assert cfg.n_symbols == 4000
        assert cfg.seed == 123
        assert cfg.decision_mode == "argmax"
        assert [n for n, _ in cfg.channels] == [
            "depolarizing",
            "dephasing",
            "erasure",
            "bosonic",
            "turbulence",
            "pmd",
        ]

    def test_round_trip(self):
        cfg = load_config(default_config_path())
        assert config_from_dict(config_to_dict(cfg)) == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config keys"):
            config_from_dict(
                {"modulation": {"type": "qpsk"}, "n_symbols": 10, "seed": 1,
                 "channels": [], "extra": 1}
            )

    def test_missing_key_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            config_from_dict({"modulation": {"type": "qpsk"}})

    def test_channel_needs_name(self):
        with pytest.raises(ValueError, match="name"):
            config_from_dict(
                {"modulation": {"type": "qpsk"}, "n_symbols": 10, "seed": 1,
                 "channels": [{"type": "depolarizing", "p": 0.1}]}
            )

    def test_duplicate_channel_names_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            SimulationConfig(
                modulation="qpsk",
                n_symbols=10,
                seed=1,
                channels=(
                    ("a", DepolarizingConfig(p=0.1)),
                    ("a", DepolarizingConfig(p=0.2)),
                ),
            )

    def test_decision_mode_validated(self):
        with pytest.raises(ValueError, match="decision_mode"):
            SimulationConfig(
                modulation="qpsk", n_symbols=10, seed=1,
                channels=(("a", DepolarizingConfig(p=0.1)),),
                decision_mode="vote",
            )


class TestRngDiscipline:
    def test_reproducible_streams(self):
        a = derive_rng(123, "channel", "x", 4).random(5)
        b = derive_rng(123, "channel", "x", 4).random(5)
        assert np.array_equal(a, b)

    def test_distinct_tags_distinct_streams(self):
        a = derive_rng(123, "channel", "x", 4).random(5)
        b = derive_rng(123, "channel", "x", 5).random(5)
        c = derive_rng(123, "channel", "y", 4).random(5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_tx_stream_fixed_by_seed(self):
        cfg_a = SimulationConfig(
            modulation="qam", n_symbols=50, seed=9,
            channels=(("a", DepolarizingConfig(p=0.0)),),
        )
        assert np.array_equal(draw_symbols(cfg_a, 16), draw_symbols(cfg_a, 16))


class TestRunSimulation:
    def test_identity_channel_zero_errors(self, tmp_path):
        cfg = qpsk_config(
            tmp_path, (("clean", DepolarizingConfig(p=0.0)),), n=200,
            emit_states=False, emit_figures=False,
        )
        r = run_simulation(cfg, "clean")
        assert (r.ser, r.ber, r.ser_count, r.ber_count) == (0.0, 0.0, 0, 0)
        assert r.erasure_count == 0

    def test_full_depolarization_collapses_to_one_label(self, tmp_path):
        n = 300
        cfg = SimulationConfig(
            modulation="qam", n_symbols=n, seed=77,
            channels=(("dead", DepolarizingConfig(p=1.0)),),
            output_dir=tmp_path, emit_states=True, emit_figures=False,
        )
        r = run_simulation(cfg, "dead")
        codebook = qam_codebook(16)
        fixed = decide(build_pgm(codebook), validate_density(np.eye(2) / 2))
        rows = read_csv(tmp_path / "states_dead.csv")
        assert all(int(row["rx_label"]) == fixed for row in rows)
        tx = draw_symbols(cfg, 16)
        assert r.ser == pytest.approx(1 - np.count_nonzero(tx == fixed) / n)

    def test_heavy_erasure_all_sentinel(self, tmp_path):
        cfg = qpsk_config(tmp_path, (("era", ErasureConfig(p=0.9)),), n=40)
        r = run_simulation(cfg, "era")
        assert r.erasure_count == 40
        assert r.ser == 1.0
        assert r.ber == 1.0
        rows = read_csv(tmp_path / "out" / "states_era.csv")
        assert all(int(row["rx_label"]) == -1 for row in rows)
        for row in rows:
            assert float(row["rx_renorm_trace"]) == pytest.approx(0.1, abs=1e-9)

    def test_unknown_channel_named_in_error(self, tmp_path):
        cfg = qpsk_config(tmp_path, (("a", DepolarizingConfig(p=0.1)),))
        with pytest.raises(ValueError, match="nope"):
            run_simulation(cfg, "nope")

    def test_equalizer_hook_passthrough(self, tmp_path):
        cfg = qpsk_config(
            tmp_path, (("clean", DepolarizingConfig(p=0.0)),), n=50,
            emit_states=False, emit_figures=False,
        )
        seen = []

        def equalizer(rho):
            seen.append(rho)
            return rho

        r = run_simulation(cfg, "clean", equalizer=equalizer)
        assert len(seen) == 50
        assert r.ser == 0.0


class TestRunComparison:
    def test_single_channel_matches_run_simulation(self, tmp_path):
        channels = (("pmd", PMDConfig(dgd=2.0, sigma_omega=1.0, n_sections=4)),)
        cfg = qpsk_config(tmp_path, channels, n=60)
        report = run_comparison(cfg)
        direct = run_simulation(cfg, "pmd")
        entry = report.channels["pmd"]
        assert (entry.ser, entry.ber) == (direct.ser, direct.ber)

    def test_channel_order_irrelevant(self, tmp_path):
        turb = TurbulenceConfig(sigma_p=0.4, w0=1.0, rytov_var=1.0)
        pmd = PMDConfig(dgd=3.0, sigma_omega=1.0, n_sections=4)
        fwd = qpsk_config(tmp_path / "f", (("t", turb), ("d", pmd)), n=60)
        rev = qpsk_config(tmp_path / "r", (("d", pmd), ("t", turb)), n=60)
        a = run_comparison(fwd)
        b = run_comparison(rev)
        for name in ("t", "d"):
            assert a.channels[name].ser == b.channels[name].ser
            assert a.channels[name].ber == b.channels[name].ber

    def test_tx_stream_shared_across_channels(self, tmp_path):
        cfg = qpsk_config(
            tmp_path,
            (("a", DepolarizingConfig(p=0.2)), ("b", ErasureConfig(p=0.3))),
            n=50,
        )
        run_comparison(cfg)
        rows_a = read_csv(tmp_path / "out" / "states_a.csv")
        rows_b = read_csv(tmp_path / "out" / "states_b.csv")
        assert [r["tx_label"] for r in rows_a] == [r["tx_label"] for r in rows_b]

    def test_report_file_contents(self, tmp_path):
        cfg = qpsk_config(tmp_path, (("clean", DepolarizingConfig(p=0.0)),), n=30)
        report = run_comparison(cfg)
        data = json.loads((tmp_path / "out" / "report.json").read_text())
        entry = data["channels"]["clean"]
        assert entry["ser"] == entry["ser_count"] / 30
        assert entry["ber"] == entry["ber_count"] / 60
        assert entry["bits_per_symbol"] == 2
        assert entry["artifacts"]["states_csv"] == "states_clean.csv"
        assert data["config"]["seed"] == 5
        assert data["version"] == report.version
        assert "wall_time_s" in data

    def test_failing_channel_is_named(self, tmp_path):
        cfg = qpsk_config(tmp_path, (("boso3", BosonicConfig(loss_db=1.0, fock_dim=3)),))
        with pytest.raises(RuntimeError, match="boso3"):
            run_comparison(cfg)

    def test_empty_channel_list_rejected(self, tmp_path):
        cfg = qpsk_config(tmp_path, ())
        with pytest.raises(ValueError, match="at least one"):
            run_comparison(cfg)

    def test_sampled_mode_reproducible(self, tmp_path):
        channels = (("deph", DepolarizingConfig(p=0.4)),)
        cfg = qpsk_config(
            tmp_path, channels, n=80, decision_mode="sampled",
            emit_states=False, emit_figures=False,
        )
        a = run_simulation(cfg, "deph")
        b = run_simulation(cfg, "deph")
        assert (a.ser, a.ber) == (b.ser, b.ber)
        assert a.ser > 0  # sampling at p=0.4 cannot be error-free at n=80

    def test_byte_determinism_same_config(self, tmp_path):
        channels = (
            ("depolarizing", DepolarizingConfig(p=0.1)),
            ("erasure", ErasureConfig(p=0.25)),
            ("turbulence", TurbulenceConfig(sigma_p=0.3, w0=1.0, rytov_var=0.6)),
            ("pmd", PMDConfig(dgd=2.0, sigma_omega=1.0, n_sections=4)),
        )
        cfg = qpsk_config(tmp_path, channels, n=40)
        run_comparison(cfg)
        out = tmp_path / "out"
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        run_comparison(cfg)
        second = {p.name: p.read_bytes() for p in out.iterdir()}
        assert set(first) == set(second)
        for name in first:
            if name == "report.json":
                a = json.loads(first[name])
                b = json.loads(second[name])
                a.pop("wall_time_s"), b.pop("wall_time_s")
                assert a == b
            else:
                assert first[name] == second[name], name


class TestStatesCsv:
    def test_header_and_row_count(self, tmp_path):
        cfg = qpsk_config(tmp_path, (("clean", DepolarizingConfig(p=0.0)),), n=25)
        run_simulation(cfg, "clean")
        path = tmp_path / "out" / "states_clean.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(STATES_CSV_HEADER)
        assert len(lines) == 26

    def test_length_mismatch_rejected(self, tmp_path):
        cb = qam_codebook(4)
        with pytest.raises(ValueError, match="length"):
            write_states_csv(
                tmp_path / "x.csv", cb.states, cb.states[:2], [0, 1, 2, 3], [0, 1, 2, 3]
            )


class TestCli:
    def _write_config(self, tmp_path, n=30):
        cfg = {
            "modulation": {"type": "qpsk"},
            "n_symbols": n,
            "seed": 11,
            "decision_mode": "argmax",
            "channels": [
                {"name": "clean", "type": "depolarizing", "p": 0.0},
                {"name": "era", "type": "erasure", "p": 0.5},
            ],
            "output": {"dir": str(tmp_path / "out"), "emit_states": True,
                       "emit_figures": True},
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_run_single_channel(self, tmp_path, capsys):
        rc = cli_main(["run", "--config", str(self._write_config(tmp_path)),
                       "--channel", "clean"])
        assert rc == 0
        assert "clean: SER 0" in capsys.readouterr().out
        assert (tmp_path / "out" / "states_clean.csv").exists()
        assert not (tmp_path / "out" / "states_era.csv").exists()

    def test_run_all_channels(self, tmp_path):
        rc = cli_main(["run", "--config", str(self._write_config(tmp_path))])
        assert rc == 0
        assert (tmp_path / "out" / "states_era.csv").exists()

    def test_compare_writes_report(self, tmp_path, capsys):
        rc = cli_main(["compare", "--config", str(self._write_config(tmp_path))])
        assert rc == 0
        assert "report written" in capsys.readouterr().out
        assert (tmp_path / "out" / "report.json").exists()

    def test_overrides(self, tmp_path):
        rc = cli_main([
            "run", "--config", str(self._write_config(tmp_path)),
            "--channel", "clean", "--symbols", "12", "--seed", "99",
            "--output-dir", str(tmp_path / "alt"),
        ])
        assert rc == 0
        lines = (tmp_path / "alt" / "states_clean.csv").read_text().splitlines()
        assert len(lines) == 13

    def test_plot_from_csv(self, tmp_path):
        cli_main(["run", "--config", str(self._write_config(tmp_path)),
                  "--channel", "era"])
        rc = cli_main([
            "plot", "--states", str(tmp_path / "out" / "states_era.csv"),
            "--out", str(tmp_path / "figs"),
        ])
        assert rc == 0
        assert (tmp_path / "figs" / "constellation_era.svg").exists()
        assert (tmp_path / "figs" / "bloch_era.svg").exists()

    def test_missing_config_reports_error(self, tmp_path, capsys):
        rc = cli_main(["run", "--config", str(tmp_path / "absent.json")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_channel_reports_error(self, tmp_path, capsys):
        rc = cli_main(["run", "--config", str(self._write_config(tmp_path)),
                       "--channel", "ghost"])
        assert rc == 1
        assert "ghost" in capsys.readouterr().err

    def test_default_config_is_loadable(self):
        # the shipped config is the documented benchmark; just verify it parses
        cfg = load_config(default_config_path())
        assert len(cfg.channels) == 6
