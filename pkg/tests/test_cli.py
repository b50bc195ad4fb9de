import json
import math

import numpy as np
import pytest

from smoothinfo import Channel, JointPmf, Pmf, dsbs, dump_mass
from smoothinfo.cli import main


@pytest.fixture()
def files(tmp_path):
    dump_mass(Pmf([0.5, 0.5]), tmp_path / "p.json")
    dump_mass(Pmf([0.75, 0.25]), tmp_path / "q.json")
    dump_mass(dsbs(0.25), tmp_path / "xy.json")
    dump_mass(Channel.binary_symmetric(0.1), tmp_path / "helper.json")
    dump_mass(JointPmf([[0.4, 0.25], [0.3, 0.0], [0.05, 0.0]]), tmp_path / "xu.json")
    return tmp_path


def test_divergence_command(files, capsys):
    rc = main(
        ["divergence", "--p", str(files / "p.json"), "--q", str(files / "q.json"),
         "--eps", "0.1", "--witness", str(files / "phi.json")]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert out == f"value_bits {math.log2(1.6):.12g}\n"
    witness = json.loads((files / "phi.json").read_text())
    assert witness["alphabets"] == [2]
    assert sum(witness["mass"]) == pytest.approx(0.9)


def test_divergence_methods_agree(files, capsys):
    outputs = []
    for method in ("threshold", "procedure"):
        rc = main(
            ["divergence", "--p", str(files / "p.json"), "--q", str(files / "q.json"),
             "--eps", "0.1", "--method", method]
        )
        assert rc == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_entropy_command(files, capsys):
    rc = main(["entropy", "--joint", str(files / "xu.json"), "--eps", "0.05"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "value_bits 1\n" in out
    assert "max_support 2" in out

    rc = main(["entropy", "--p", str(files / "q.json")])
    assert rc == 0
    assert capsys.readouterr().out == "value_bits 1\n"


def test_region_command(files, capsys):
    rc = main(
        ["region", "--joint", str(files / "xy.json"),
         "--helper", str(files / "helper.json"),
         "--eps", "0.25", "--eps1", "0.125", "--eps11", "0.002"]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert "r1_bits 4\n" in out
    assert "r2_bits " in out and "divergence_bits " in out


def test_region_budget_violation_exit_2(files, capsys):
    rc = main(
        ["region", "--joint", str(files / "xy.json"),
         "--helper", str(files / "helper.json"),
         "--eps", "0.25", "--eps1", "0.3", "--eps11", "0.002"]
    )
    err = capsys.readouterr().err
    assert rc == 2
    assert err.startswith("error: budget: ")
    assert "eps1 must be smaller than eps" in err


def test_io_error_exit_1(files, capsys):
    rc = main(["divergence", "--p", str(files / "missing.json"),
               "--q", str(files / "q.json"), "--eps", "0.1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: io: ")

    bad = files / "bad.json"
    bad.write_text("{not json")
    rc = main(["divergence", "--p", str(bad), "--q", str(files / "q.json"),
               "--eps", "0.1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: io: ")


def test_usage_error_single_line(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["divergence", "--p", str(files / "p.json")])
    assert exc.value.code == 1
    err = capsys.readouterr().err
    assert err.startswith("error: usage: ")
    assert err.count("\n") == 1


def test_frontier_command(files, tmp_path, capsys):
    out_file = tmp_path / "frontier.csv"
    rc = main(
        ["frontier", "--joint", str(files / "xy.json"), "--eps", "0.25",
         "--u-size", "2", "--grid", "5", "--output", str(out_file)]
    )
    assert rc == 0
    lines = out_file.read_text().strip().split("\n")
    assert lines[0].startswith("r1_bits,r2_bits,eps,eps1,eps11,h_0_0")
    assert len(lines) >= 2


def test_simulate_command_deterministic(files, tmp_path):
    args = [
        "simulate", "--joint", str(files / "xy.json"),
        "--helper", str(files / "helper.json"),
        "--eps", "0.25", "--eps1", "0.125", "--eps11", "0.002",
        "--trials", "200", "--seed", "31",
    ]
    a_file = tmp_path / "a.json"
    b_file = tmp_path / "b.json"
    assert main(args + ["--output", str(a_file)]) == 0
    assert main(args + ["--output", str(b_file)]) == 0
    assert a_file.read_bytes() == b_file.read_bytes()
    report = json.loads(a_file.read_text())
    assert report["config"]["prng"] == "philox4x64"
    assert report["results"]["empirical_error"] <= 0.25


def test_converge_command(files, capsys):
    rc = main(
        ["converge", "--mode", "divergence", "--p", str(files / "p.json"),
         "--q", str(files / "q.json"), "--eps", "0.05", "--n-max", "4"]
    )
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,value_bits,target_bits,eps"
    assert len(lines) == 5

    rc = main(
        ["converge", "--mode", "entropy", "--joint", str(files / "xy.json"),
         "--eps", "0.05", "--n-max", "3"]
    )
    assert rc == 0
    assert capsys.readouterr().out.count("\n") == 4


def test_byte_identical_reruns(files, capsys):
    for _ in range(2):
        rc = main(
            ["region", "--joint", str(files / "xy.json"),
             "--helper", str(files / "helper.json"),
             "--eps", "0.25", "--eps1", "0.125", "--eps11", "0.002"]
        )
        assert rc == 0
    first = capsys.readouterr().out
    half = len(first) // 2
    assert first[:half] == first[half:]
