"""Config schema and the command-line surface: golden files, exit codes, formats."""

import csv
import json

import pytest

from lipwalk.cli import SAMPLE_COLUMNS, main
from lipwalk.config import ConfigError, load_config, parse_config
from lipwalk import ModelParams, special_b, step_constants


def base_2d(**overrides):
    cfg = {
        "mode": "2d",
        "model": {"g": 10.0, "h": 1.0},
        "period": 0.3,
        "n_steps": 5,
        "initial": {"x": -0.3, "v": 2.0},
        "legs": [{"a": 0.0, "b": 0.3}, {"a": 0.0, "b": 0.3}],
    }
    cfg.update(overrides)
    return cfg


class TestConfigParsing:
    def test_minimal_2d(self):
        cfg = parse_config(base_2d())
        assert cfg.mode == "2d"
        assert cfg.legs[0].b == 0.3
        assert cfg.sample_rate == 100.0
        assert cfg.initial.com == (-0.3, 0.0)

    def test_symbolic_gain_resolution(self):
        cfg = parse_config(base_2d(legs=[{"a": 0.0, "b": "b_db"}, {"a": 0.0, "b": "b_db"}]))
        model = ModelParams(10.0, 1.0)
        expected = special_b(step_constants(0.3, model), model).b_db
        assert cfg.legs[0].b == expected

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError, match="unknown field"):
            parse_config(base_2d(typo_field=1))
        with pytest.raises(ConfigError, match=r"legs\[1\]"):
            parse_config(base_2d(legs=[{"a": 0, "b": 0.3}, {"a": 0, "b": 0.3, "c": 1}]))

    def test_nonpositive_period_names_field(self):
        with pytest.raises(ConfigError, match="config.period"):
            parse_config(base_2d(period=0.0))

    def test_mode_specific_keys(self):
        with pytest.raises(ConfigError, match="schedule"):
            parse_config(base_2d(schedule=[]))

    def test_3d_schedule_ordering(self):
        entry = {"from_step": 0, "a_l": 0.2, "a_w": 0.1, "theta_deg": 0.0, "b": 0.4, "period": 0.3}
        cfg = {
            "mode": "3d",
            "model": {"g": 10.0, "h": 1.0},
            "n_steps": 4,
            "schedule": [entry, {**entry, "from_step": 2}],
        }
        parsed = parse_config(cfg)
        assert parsed.schedule[1][0] == 2
        bad = {**cfg, "schedule": [entry, {**entry, "from_step": 0}]}
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_config(bad)
        with pytest.raises(ConfigError, match="start at step 0"):
            parse_config({**cfg, "schedule": [{**entry, "from_step": 1}]})

    def test_roundtrip_is_idempotent(self):
        cfg = parse_config(base_2d(pushes=[{"at_time": 0.4, "dvx": 0.5}]))
        once = cfg.to_dict()
        twice = parse_config(once).to_dict()
        assert once == twice

    def test_json_syntax_error_is_line_anchored(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "mode": "2d",\n  oops\n}\n')
        with pytest.raises(ConfigError, match=r"bad\.json:3:"):
            load_config(bad)


class TestSimulateCommand:
    def test_case1_step_lengths(self, tmp_path, capsys):
        assert main(["simulate", "--config", "case1", "--out", str(tmp_path)]) == 0
        data = json.loads((tmp_path / "case1_steps.json").read_text())
        tail = [s["step_length"] for s in data["steps"][-4:]]
        assert all(d == pytest.approx(-0.35, abs=0.01) for d in tail)

    def test_fig5_deadbeat_velocity_column(self, tmp_path):
        assert main(["simulate", "--config", "fig5_bdb", "--out", str(tmp_path)]) == 0
        data = json.loads((tmp_path / "fig5_bdb_steps.json").read_text())
        vels = [s["vel_before"][0] for s in data["steps"]]
        assert vels[0] == pytest.approx(1.9283, abs=1e-4)
        assert all(abs(v) < 1e-9 for v in vels[1:])

    def test_sample_csv_schema(self, tmp_path):
        main(["simulate", "--config", "case2", "--out", str(tmp_path)])
        with (tmp_path / "case2_samples.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == SAMPLE_COLUMNS
        # 2d runs keep the y columns at zero
        assert {r[2] for r in rows[1:]} == {"0.0"}
        assert len(rows) - 1 == 20 * 30  # 20 steps at 100 Hz over 0.3 s

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(base_2d(period=-1.0)))
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2
        assert "config.period" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["simulate", "--config", "nope.json", "--out", str(tmp_path)]) == 2


class TestStabilityCommand:
    def test_text_golden_constants(self, capsys):
        assert main(["stability", "--period", "0.3"]) == 0
        out = capsys.readouterr().out
        for line in ("T_c   = 0.3162", "b_min = 0.1397", "b_cp  = 0.3162",
                     "b_db  = 0.4278", "b_max = 0.7159"):
            assert line in out

    def test_text_regime_queries(self, capsys):
        main(["stability", "--period", "0.3", "--b", "0.5"])
        assert "underdamped" in capsys.readouterr().out
        main(["stability", "--period", "0.3", "--b", "b_db"])
        out = capsys.readouterr().out
        assert "deadbeat" in out
        assert "b       = 0.4278" in out
        assert "lambda2 = 0.0000" in out or "lambda2 = -0.0000" in out
        # a 4-decimal literal is a hair below the true dead-beat gain and is
        # classified strictly
        main(["stability", "--period", "0.3", "--b", "0.4278"])
        assert "overdamped" in capsys.readouterr().out

    def test_json_carries_full_precision(self, capsys):
        main(["stability", "--period", "0.3", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        model = ModelParams(10.0, 1.0)
        gains = special_b(step_constants(0.3, model), model)
        assert payload["b_db"] == gains.b_db  # bit-exact through JSON
        assert payload["t_c"] == model.t_c

    def test_zero_period_fails(self, capsys):
        assert main(["stability", "--period", "0.0"]) == 1


class TestRegionCommand:
    def test_grid_and_curves(self, tmp_path, capsys):
        assert main([
            "region", "--t-min", "0.1", "--t-max", "0.6", "--nt", "6", "--nb", "8",
            "--out", str(tmp_path),
        ]) == 0
        with (tmp_path / "region_grid.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 6 * 8
        with (tmp_path / "region_curves.csv").open() as fh:
            curves = list(csv.DictReader(fh))
        by_t = {c["T"]: c for c in curves}
        for row in rows:
            lam = float(row["lambda2"])
            c = by_t[row["T"]]
            inside = float(c["b_min"]) < float(row["b"]) < float(c["b_max"])
            assert (abs(lam) < 1.0) == inside
        widths = [float(c["b_max"]) - float(c["b_min"]) for c in curves]
        assert all(w2 < w1 for w1, w2 in zip(widths, widths[1:]))

    def test_capture_point_cell_is_overdamped(self, tmp_path):
        main([
            "region", "--t-min", "0.3", "--t-max", "0.3", "--nt", "1",
            "--b-min", "0.3162", "--b-max", "0.3162", "--nb", "1", "--out", str(tmp_path),
        ])
        with (tmp_path / "region_grid.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["regime"] == "overdamped"

    def test_empirical_check(self, tmp_path, capsys):
        assert main([
            "region", "--nt", "12", "--nb", "12", "--out", str(tmp_path),
            "--check-cells", "20", "--seed", "3",
        ]) == 0
        assert "empirical check passed" in capsys.readouterr().out

    def test_bad_range_exits_nonzero(self, tmp_path, capsys):
        assert main(["region", "--t-min", "0.6", "--t-max", "0.1", "--out", str(tmp_path)]) == 1


class TestGaitCommand:
    def test_case3_text(self, capsys):
        assert main(["gait", "--period", "0.3", "--a1", "0.2", "--b1", "0.3",
                     "--a2", "0.4", "--b2", "0.3"]) == 0
        out = capsys.readouterr().out
        assert "d1 = -0.8670" in out
        assert "d2 = -0.1785" in out

    def test_case4_json(self, capsys):
        main(["gait", "--period", "0.3", "--a1", "0.2", "--b1", "0.3",
              "--a2", "-0.4", "--b2", "0.3", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["step_lengths"][0] == pytest.approx(1.2, abs=0.01)
        assert payload["step_lengths"][1] == pytest.approx(-0.86, abs=0.01)

    def test_zero_offset_steps_in_place(self, capsys):
        main(["gait", "--period", "0.3", "--a1", "0", "--b1", "0.3"])
        assert "step in-place, d=0" in capsys.readouterr().out

    def test_degenerate_bound_named(self, capsys):
        model = ModelParams(10.0, 1.0)
        b_min = special_b(step_constants(0.3, model), model).b_min
        assert main(["gait", "--period", "0.3", "--a1", "0.2", "--b1", repr(b_min)]) == 1
        assert "b_min" in capsys.readouterr().err
