from pathlib import Path

import pandas as pd
import pytest

from src.__main__ import build_parser, main
from src.cli.dto import RunConfig, load_run_config
from src.common.constants import EXIT_NO_ORBIT, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION
from src.common.exceptions import ConfigError
from src.common.serializers import OrjsonSerializer

FLAT_CONFIG = """
schema_version = 1
seed = 3

[system]
preset = "flat-cylinder"

[simulate]
vx = 0.6
vy = 0.8
duration = 2.0

[find]
k = [0.5]
windings = [1]
n_max = 8

[find.solver]
nodes = 16
sigma_schedule = [2.0]

[mane]
grid = 64
x_window = [-2.0, 2.0]

[scan]
k = [0.5]

[scan.grid]
x_min = -1.0
x_max = 1.0
nx = 3
nv = 3
"""


def write_config(tmp_path: Path, body: str = FLAT_CONFIG) -> Path:
    path = tmp_path / "run.toml"
    path.write_text(body)
    return path


def run(tmp_path: Path, *argv: str) -> int:
    return main([*argv, "--out", str(tmp_path / "out"), "--threads", "1"])


def stored_kinds(tmp_path: Path) -> list[str]:
    lines = (tmp_path / "out" / "results.jsonl").read_bytes().splitlines()
    return [OrjsonSerializer.loads(line)["kind"] for line in lines if line.strip()]


def test_load_run_config(tmp_path):
    config = load_run_config(write_config(tmp_path))
    assert config.seed == 3
    assert config.find.solver.nodes == 16
    assert config.scan.grid.nx == 3
    assert config.with_seed(9).seed == 9
    assert config.with_seed(None) is config


def test_shipped_configs_load():
    for path in sorted(Path(__file__).resolve().parent.parent.joinpath("configs").glob("*.toml")):
        assert isinstance(load_run_config(path), RunConfig)


@pytest.mark.parametrize(
    "body",
    [
        FLAT_CONFIG + "\nunknown = 1\n",
        FLAT_CONFIG.replace("schema_version = 1", "schema_version = 2"),
        FLAT_CONFIG.replace("windings = [1]", "windings = [0]"),
        FLAT_CONFIG.replace("vy = 0.8", "vy = 0.8\nk = 0.5"),
        FLAT_CONFIG.replace("[system]", "[system"),
    ],
)
def test_invalid_configs(tmp_path, body):
    with pytest.raises(ConfigError) as info:
        load_run_config(write_config(tmp_path, body))
    assert info.value.exit_code == EXIT_VALIDATION


def test_missing_config(tmp_path):
    assert run(tmp_path, "simulate", "--config", str(tmp_path / "absent.toml")) == EXIT_VALIDATION


def test_config_hash_ignores_output(tmp_path):
    base = load_run_config(write_config(tmp_path))
    moved = load_run_config(write_config(tmp_path, FLAT_CONFIG + '\n[output]\ndir = "elsewhere"\n'))
    reseeded = base.with_seed(4)
    assert base.config_hash == moved.config_hash
    assert base.config_hash != reseeded.config_hash


def test_parser_flags():
    parser = build_parser()
    args = parser.parse_args(["find", "--config", "run.toml", "--seed", "7", "--threads", "2"])
    assert (args.command, args.seed, args.threads) == ("find", 7, 2)
    with pytest.raises(SystemExit):
        parser.parse_args(["find", "--config", "run.toml", "--threads", "0"])
    with pytest.raises(SystemExit):
        parser.parse_args(["find", "--config", "run.toml", "--seed", "-1"])
    with pytest.raises(SystemExit):
        parser.parse_args(["find"])
    assert parser.parse_args(["report"]).config is None


def test_simulate(tmp_path):
    assert run(tmp_path, "simulate", "--config", str(write_config(tmp_path))) == EXIT_OK
    frame = pd.read_csv(tmp_path / "out" / "trajectory.csv")
    assert list(frame.columns) == ["t", "x", "y", "vx", "vy", "E", "p_x", "p_y"]
    assert frame["E"].sub(0.5).abs().max() < 1e-9


def test_find_then_index_then_report(tmp_path, capsys):
    config = str(write_config(tmp_path))
    assert run(tmp_path, "find", "--config", config) == EXIT_OK
    table = pd.read_csv(tmp_path / "out" / "index_k0p5_w1.csv")
    assert list(table.columns) == ["n", "m", "m0", "m_T", "m0_T", "lower", "upper"]
    assert table["m"].tolist() == [0] * 8

    assert run(tmp_path, "index", "--config", config) == EXIT_OK
    assert stored_kinds(tmp_path) == ["orbit", "orbit"]

    capsys.readouterr()
    assert run(tmp_path, "report", "--schemas") == EXIT_OK
    printed = capsys.readouterr().out
    assert "orbit=2" in printed
    assert "[json-lines schemas]" in printed


def test_mane_and_scan(tmp_path, capsys):
    config = str(write_config(tmp_path))
    assert run(tmp_path, "mane", "--config", config) == EXIT_OK
    assert "[0.000000, 0.000000]" in capsys.readouterr().out

    assert run(tmp_path, "scan", "--config", config) == EXIT_OK
    printed = capsys.readouterr().out
    assert "fixed point k=0.5 winding=1: x=-1 vx=0" in printed
    assert "fixed point k=0.5 winding=1: x=0 vx=0" in printed
    frame = pd.read_csv(tmp_path / "out" / "scan_k0p5_w1.csv")
    assert (frame["classification"] == "fixed").sum() == 3
    assert stored_kinds(tmp_path) == ["bracket", "scan"]


@pytest.mark.slow
def test_find_without_orbit_exits_with_no_orbit_code(tmp_path):
    body = FLAT_CONFIG.replace('preset = "flat-cylinder"', 'preset = "appendix-cylinder"').replace(
        "k = [0.5]\nwindings", "k = [1.0]\nwindings"
    )
    assert run(tmp_path, "find", "--config", str(write_config(tmp_path, body))) == EXIT_NO_ORBIT


def test_mane_budget_is_stored_and_reported(tmp_path, capsys):
    body = FLAT_CONFIG.replace('preset = "flat-cylinder"', 'preset = "appendix-cylinder"').replace(
        "x_window = [-2.0, 2.0]", "tol = 1e-6\nmax_steps = 1"
    )
    assert run(tmp_path, "mane", "--config", str(write_config(tmp_path, body))) == EXIT_NUMERICAL
    assert "budget exhausted" in capsys.readouterr().out
    line = (tmp_path / "out" / "results.jsonl").read_bytes().splitlines()[0]
    stored = OrjsonSerializer.loads(line)
    assert stored["kind"] == "bracket"
    assert stored["payload"]["status"] == "budget"
    assert stored["payload"]["bracket"]["lower"] == pytest.approx(0.25)


def test_find_is_reproducible(tmp_path):
    config = str(write_config(tmp_path, FLAT_CONFIG.replace("n_max = 8", "n_max = 8\nscan_seeds = true")))
    payloads, tables = [], []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["find", "--config", config, "--out", str(out), "--threads", "1"]) == EXIT_OK
        lines = (out / "results.jsonl").read_bytes().splitlines()
        payloads.append([OrjsonSerializer.dumps(OrjsonSerializer.loads(line)["payload"]) for line in lines])
        tables.append((out / "index_k0p5_w1.csv").read_bytes())
    assert len(payloads[0]) == 1
    assert payloads[0] == payloads[1]
    assert tables[0] == tables[1]
