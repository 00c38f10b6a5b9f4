import json

import pytest

from blindcast.cli import DEFAULT_SEED_HEX, LAYERS_HEADER, SWEEP_HEADER, run_cli
from blindcast.instances import load_instance
from blindcast.network import load_network


def strip_wall_ms(text: str) -> str:
    lines = text.splitlines()
    return "\n".join(line.rsplit(",", 1)[0] for line in lines)


def run(argv, capsys=None):
    code = run_cli(argv)
    if capsys is not None:
        return code, capsys.readouterr()
    return code


class TestGen:
    def test_gen_instance_roundtrip(self, tmp_path):
        out = tmp_path / "i.json"
        assert run(["gen-instance", "--k", "4", "--L", "256", "--rng-seed", "9",
                    "--out", str(out)]) == 0
        inst = load_instance(out.read_text())
        assert inst.k == 4
        first = out.read_bytes()
        assert run(["gen-instance", "--k", "4", "--L", "256", "--rng-seed", "9",
                    "--out", str(out)]) == 0
        assert out.read_bytes() == first

    def test_gen_instance_validates(self, tmp_path, capsys):
        code, cap = run(["gen-instance", "--k", "9", "--L", "4",
                         "--out", str(tmp_path / "x.json")], capsys)
        assert code == 1
        assert "error" in cap.err

    def test_gen_graph_kinds(self, tmp_path):
        for kind, flags in (
            ("layered", ["--layers", "4", "--layer-size", "3"]),
            ("cycle", ["--n", "6"]),
            ("random", ["--n", "8", "--extra-edges", "5", "--rng-seed", "2"]),
        ):
            out = tmp_path / f"{kind}.json"
            assert run(["gen-graph", "--kind", kind, "--out", str(out)] + flags) == 0
            load_network(out.read_text())


class TestSimulate:
    def test_single_line_result(self, tmp_path, capsys):
        inst = tmp_path / "i.json"
        run(["gen-instance", "--k", "2", "--L", "16", "--rng-seed", "3",
             "--out", str(inst)])
        code, cap = run(["simulate", "--mode", "wakeup", "--instance", str(inst),
                         "--seed-hex", DEFAULT_SEED_HEX, "--horizon", "10000"], capsys)
        assert code == 0
        line = cap.out.strip().splitlines()[-1]
        assert line.startswith("mode=wakeup k=2 ")
        assert " hit=" in line and " budget=" in line

    def test_transcript_file(self, tmp_path):
        inst = tmp_path / "i.json"
        run(["gen-instance", "--k", "1", "--L", "4", "--rng-seed", "0",
             "--out", str(inst)])
        t = tmp_path / "t.txt"
        assert run(["simulate", "--instance", str(inst), "--horizon", "16",
                    "--transcript", str(t)]) == 0
        lines = t.read_text().splitlines()
        assert len(lines) == 16
        assert lines[0].startswith("0 ")

    def test_network_simulation(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        run(["gen-graph", "--kind", "layered", "--layers", "3",
             "--layer-size", "2", "--out", str(g)])
        inst = tmp_path / "init.json"
        inst.write_text('{"nodes":[{"id":1,"wake":0},{"id":2,"wake":0}]}')
        code, cap = run(["simulate", "--mode", "broadcast", "--graph", str(g),
                         "--instance", str(inst)], capsys)
        assert code == 0
        assert "completion=" in cap.out

    def test_malformed_instance_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        code, cap = run(["simulate", "--instance", str(bad)], capsys)
        assert code == 1
        assert "error" in cap.err

    def test_missing_file(self, tmp_path):
        assert run(["simulate", "--instance", str(tmp_path / "nope.json")]) == 1


class TestSweep:
    def test_grid_rows_and_header(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run(["sweep", "--mode", "broadcast", "--k", "2,4,8", "--L", "64",
                    "--trials", "5", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == SWEEP_HEADER
        assert len(lines) == 1 + 3 * 5
        ks = [line.split(",")[2] for line in lines[1:]]
        assert ks == ["2"] * 5 + ["4"] * 5 + ["8"] * 5

    def test_rerun_byte_identical_mod_wall(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["sweep", "--k", "2,3", "--L", "32", "--trials", "4"]
        assert run(flags + ["--out", str(a)]) == 0
        assert run(flags + ["--out", str(b)]) == 0
        assert strip_wall_ms(a.read_text()) == strip_wall_ms(b.read_text())

    def test_jobs_do_not_change_rows(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["sweep", "--k", "2,4", "--L", "64", "--trials", "6",
                 "--mode", "wakeup"]
        assert run(flags + ["--jobs", "1", "--out", str(a)]) == 0
        assert run(flags + ["--jobs", "8", "--out", str(b)]) == 0
        assert strip_wall_ms(a.read_text()) == strip_wall_ms(b.read_text())

    def test_prime_mode_rows(self, tmp_path):
        out = tmp_path / "p.csv"
        assert run(["sweep", "--mode", "prime", "--k", "2", "--L", "16",
                    "--trials", "3", "--out", str(out)]) == 0
        rows = out.read_text().splitlines()[1:]
        assert all(row.split(",")[0] == "prime" for row in rows)

    def test_bad_pattern(self, tmp_path):
        assert run(["sweep", "--k", "2", "--L", "8", "--pattern", "nope",
                    "--trials", "1", "--out", str(tmp_path / "x.csv")]) == 1


class TestVerifyCmd:
    def test_report_file_and_rerun(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, cap = run(["verify", "--mode", "wakeup", "--r-max", "2",
                         "--wake-max", "1", "--out", str(out)], capsys)
        assert code == 0
        assert "pass=9 fail=0" in cap.out
        first = out.read_bytes()
        run(["verify", "--mode", "wakeup", "--r-max", "2", "--wake-max", "1",
             "--out", str(out)])
        assert out.read_bytes() == first
        obj = json.loads(out.read_text())
        assert obj["n_instances"] == 9

    def test_cap_exit_code(self, capsys):
        code, cap = run(["verify", "--mode", "wakeup", "--r-max", "8",
                         "--wake-max", "40"], capsys)
        assert code == 2
        assert "limit" in cap.err

    def test_search_seed(self, tmp_path, capsys):
        out = tmp_path / "search.json"
        code, cap = run(["search-seed", "--mode", "wakeup", "--r-max", "1",
                         "--wake-max", "0", "--candidates", "4",
                         "--out", str(out)], capsys)
        assert code == 0
        assert "all_pass=1" in cap.out
        obj = json.loads(out.read_text())
        assert obj["all_pass"] is True
        assert len(obj["best_key_hex"]) == 64


class TestLayersCmd:
    def test_layers_csv(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        run(["gen-graph", "--kind", "layered", "--layers", "4",
             "--layer-size", "2", "--out", str(g)])
        out = tmp_path / "layers.csv"
        code, cap = run(["layers", "--graph", str(g), "--source", "1",
                         "--target", "7", "--out", str(out)], capsys)
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == LAYERS_HEADER
        assert len(lines) == 1 + 4  # path of length 3 -> 4 positions
        total = sum(int(line.split(",")[4]) for line in lines[1:])
        assert f"spans_total={total}" in cap.out


class TestFlagsAndConfig:
    def test_unknown_flag(self, capsys):
        code, cap = run(["simulate", "--nope"], capsys)
        assert code == 1
        assert "error" in cap.err

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 1

    def test_config_sets_constants(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("# doubled wake-up constant\nc=18\n")
        inst = tmp_path / "i.json"
        inst.write_text('{"nodes":[{"id":1,"wake":0}]}')
        _, cap_default = run(["simulate", "--instance", str(inst),
                              "--horizon", "100"], capsys)
        code, cap_cfg = run(["simulate", "--instance", str(inst),
                             "--horizon", "100", "--config", str(cfg)], capsys)
        assert code == 0
        # g scales with c^2: 81 -> 324
        assert "budget=81" in cap_default.out
        assert "budget=324" in cap_cfg.out

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("c=18\n")
        inst = tmp_path / "i.json"
        inst.write_text('{"nodes":[{"id":1,"wake":0}]}')
        code, cap = run(["simulate", "--instance", str(inst), "--horizon", "100",
                         "--config", str(cfg), "--c", "9"], capsys)
        assert code == 0
        assert "budget=81" in cap.out

    def test_bad_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("mystery=1\n")
        inst = tmp_path / "i.json"
        inst.write_text('{"nodes":[{"id":1,"wake":0}]}')
        code, cap = run(["simulate", "--instance", str(inst),
                         "--config", str(cfg)], capsys)
        assert code == 1
        assert "unknown key" in cap.err

    def test_config_caps(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("max_corpus=5\n")
        code, cap = run(["verify", "--mode", "wakeup", "--r-max", "2",
                         "--wake-max", "1", "--config", str(cfg)], capsys)
        assert code == 2
        assert "limit" in cap.err

    def test_env_jobs_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("BLINDCAST_JOBS", "3")
        out = tmp_path / "s.csv"
        assert run(["sweep", "--k", "2", "--L", "8", "--trials", "2",
                    "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 3
