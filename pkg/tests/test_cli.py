import subprocess
import sys

from aspeer.cli import main
from aspeer.harness import read_csv


def test_simulate_writes_csv_and_svg(tmp_path, capsys):
    rc = main(["simulate", "--strategy", "imph", "--h", "3", "--mmax", "20", "--joins", "300",
               "--ases", "40", "--oss", "3", "--seed", "1", "--out", str(tmp_path)])
    assert rc == 0
    csv_path = tmp_path / "imph_h3_mmax20_seed1.csv"
    assert len(read_csv(csv_path)) == 300
    assert (tmp_path / "imph_h3_mmax20_seed1.svg").exists()
    assert "C=" in capsys.readouterr().out


def test_config_file_and_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nstrategy = mph\nh = 4\njoins = 50\nases = 30\noss = 2\nseed = 9\n")
    assert main(["simulate", "--config", str(ini), "--h", "5", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "mph_h5_mmax20_seed9.csv").exists()


def test_sweep_grid(tmp_path):
    rc = main(["sweep", "--grid", "h=3,4", "mmax=20", "strategies=mph,imph",
               "--joins", "100", "--ases", "30", "--oss", "2", "--out", str(tmp_path)])
    assert rc == 0
    assert len(list(tmp_path.glob("*.csv"))) == 4
    assert sorted(p.name for p in tmp_path.glob("*.svg")) == ["h3_mmax20_seed0.svg",
                                                               "h4_mmax20_seed0.svg"]


def test_topology_dump_and_stats(tmp_path, capsys):
    edges = tmp_path / "edges.txt"
    assert main(["topology", "--ases", "500", "--m", "2", "--seed", "0", "--dump", str(edges)]) == 0
    dumped = capsys.readouterr().out
    assert main(["stats", str(edges)]) == 0
    assert capsys.readouterr().out == dumped
    assert '"edge_count": 997' in dumped


def test_configuration_error_exit_code(tmp_path):
    assert main(["simulate", "--strategy", "cdn", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--h", "1", "--out", str(tmp_path)]) == 2


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    rc = main(["simulate", "--joins", "10", "--ases", "20", "--oss", "2",
               "--out", str(blocker / "sub")])
    assert rc == 3
    assert main(["stats", str(tmp_path / "nope.txt")]) == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "aspeer", "topology", "--ases", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"as_count": 10' in proc.stdout
