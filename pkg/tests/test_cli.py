import csv

import pytest

from omprsim.cli import (
    CSV_HEADER,
    GridSpec,
    ParseError,
    RunManifest,
    cli_main,
    emit_results,
    parse_config,
)
from omprsim.config import ConfigError, SimConfig
from omprsim.harness import run_sweep


def test_empty_config_is_baseline():
    m = parse_config("")
    assert m.config == SimConfig()
    assert m.config.node_count == 100 and m.config.radius == 200 and m.config.speed == 5
    assert m.config.sim_time == 300 and m.config.retrans_prob == 0.8 and m.config.branch_cap == 10_000
    assert (m.config.area_width, m.config.area_height) == (1000, 1000)
    assert m.grid.values() == [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


def test_comments_and_values():
    m = parse_config("# scenario\nnodes = 50  # fewer\nseed=42\nalgorithms=pure, ompr\n\nloops=4\n")
    assert m.config.node_count == 50 and m.config.master_seed == 42 and m.config.loop_count == 4
    assert m.algorithms == ("pure", "ompr")


def test_pc_above_one_rejected():
    with pytest.raises(ConfigError, match="p_c_min"):
        parse_config("p_c_min=1.2")


def test_radius_speed_give_30s_pause_in_manifest():
    m = parse_config("radius=200\nspeed=5")
    assert m.config.pause_time == 30.0
    assert "# pause_time=30 loops=10" in m.to_text()


def test_malformed_line_reports_number():
    with pytest.raises(ParseError, match="line 2"):
        parse_config("nodes=10\njunk\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_config("nodes=ten")


def test_unknown_key_rejected():
    with pytest.raises(ParseError, match="unknown key 'colour'"):
        parse_config("colour=blue")


def test_bad_values():
    with pytest.raises(ConfigError, match="radius"):
        parse_config("radius=-1")
    with pytest.raises(ConfigError, match="unknown algorithm"):
        parse_config("algorithms=pure,lar1")
    with pytest.raises(ConfigError, match="p_c_step"):
        parse_config("p_c_step=0")


def test_manifest_round_trip():
    m = parse_config("nodes=30\nradius=150.5\nseed=18446744073709551615\np_c_min=0.6\nalgorithms=prob\nnoise_model=discovery\n")
    again = parse_config(m.to_text())
    assert again == m
    assert again.master_seed == 2**64 - 1


@pytest.fixture(scope="module")
def small_sweep():
    m = RunManifest(SimConfig(node_count=30, loops=2), GridSpec(0.5, 1.0, 0.1), ("pure", "prob", "ompr"))
    return m, run_sweep(m.config, m.grid.values(), m.algorithms)


def test_emit_results(tmp_path, small_sweep):
    m, res = small_sweep
    emit_results(res, m, tmp_path)
    with open(tmp_path / "results.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 19
    assert rows[1][1] == "0.500000"
    plot = (tmp_path / "plot_rch.txt").read_text().splitlines()
    assert plot[0] == "# p_c pure prob ompr"
    assert len(plot) == 7 and len(plot[1].split()) == 4
    assert parse_config((tmp_path / "manifest.txt").read_text()) == m


def test_emit_single_cell(tmp_path):
    m = RunManifest(SimConfig(node_count=10, loops=1), GridSpec(1.0, 1.0, 0.1), ("pure",))
    emit_results(run_sweep(m.config, [1.0], ["pure"]), m, tmp_path)
    assert len((tmp_path / "plot_ret.txt").read_text().splitlines()) == 2


def test_emit_unwritable(tmp_path, small_sweep):
    m, res = small_sweep
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        emit_results(res, m, blocker / "sub")


def test_cli_grid_fixture(capsys):
    assert cli_main(["--grid-fixture"]) == 0
    out = capsys.readouterr().out
    assert "48/48" in out
    pure_line = next(l for l in out.splitlines() if l.startswith("pure"))
    assert pure_line.split()[2] == "24"


def test_cli_one_cell(tmp_path, capsys):
    code = cli_main(["--algorithms", "pure", "--pc", "1.0:1.0:0.1", "--loops", "1", "--out", str(tmp_path)])
    assert code == 0
    assert len((tmp_path / "results.csv").read_text().splitlines()) == 2
    assert "pure" in capsys.readouterr().out


def test_cli_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli_main(["--frobnicate"])
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_cli_validation_exit_code(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("p_c_min=1.2\n")
    assert cli_main(["--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert cli_main(["--pc", "0.5:2:0.1", "--out", str(tmp_path)]) == 1


def test_cli_missing_config_is_io_error(tmp_path):
    assert cli_main(["--config", str(tmp_path / "nope.cfg")]) == 2


def test_cli_unwritable_out(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli_main(["--algorithms", "pure", "--pc", "1:1:0.1", "--loops", "1", "--out", str(blocker / "d")]) == 2


def test_cli_trace_and_dump(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("nodes=15\nloops=1\n")
    args = ["--config", str(cfg), "--algorithms", "ompr", "--pc", "0.8:0.8:0.1", "--trace", "--dump", "--out", str(tmp_path)]
    assert cli_main(args) == 0
    trace = (tmp_path / "trace.txt").read_text().splitlines()
    assert trace[0].startswith("# algorithm p_c loop source hop")
    assert trace[1].split()[:2] == ["ompr", "0.800000"]
    assert (tmp_path / "snapshot.txt").read_text().startswith("# snapshot loop=0")
    assert len((tmp_path / "relays.txt").read_text().splitlines()) == 16


def test_cli_byte_identical(tmp_path):
    args = ["--algorithms", "pure,ompr", "--pc", "0.6:1.0:0.2", "--loops", "2", "--seed", "7"]
    assert cli_main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli_main(args + ["--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    for name in ("results.csv", "plot_rch.txt", "plot_ret.txt", "manifest.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
