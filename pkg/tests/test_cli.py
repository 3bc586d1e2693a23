import json
import subprocess
import sys

import pytest

from dimotif.cli import main

from conftest import bidirected_complete, random_digraph


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text(bidirected_complete(4).to_edge_list())
    return p


@pytest.fixture
def random_file(tmp_path):
    p = tmp_path / "r.txt"
    p.write_text(random_digraph(20, 0.2, 3).to_edge_list())
    return p


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tsv_single_row(capsys, k4_file):
    code, out, _ = run(capsys, "--input", k4_file, "--k", 3, "--threads", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "motif_id\tcount"
    assert lines[1] == "3:3f\t4"
    assert "# total=4" in lines
    assert "# n=4" in lines and "# m_directed=12" in lines and "# m_pairs=6" in lines
    assert "# bases=4" in lines
    assert any(line.startswith("# wall_time=") for line in lines)


def test_oracle_match(capsys, random_file):
    code, _, err = run(capsys, "--input", random_file, "--k", 5, "--oracle", "--threads", 1)
    assert code == 0
    assert "oracle: MATCH" in err


def test_oracle_mismatch_exit_code(capsys, random_file, monkeypatch):
    import dimotif.cli as cli

    real = cli.brute_force_histogram
    monkeypatch.setattr(cli, "brute_force_histogram", lambda g, k: _drop_one(real(g, k)))
    code, _, err = run(capsys, "--input", random_file, "--k", 4, "--oracle")
    assert code == 1 and "MISMATCH" in err


def _drop_one(h):
    h.counts.pop(next(iter(h.counts)))
    return h


def test_stats_columns_and_na(capsys, k4_file):
    code, out, _ = run(capsys, "--input", k4_file, "--k", 3, "--random", 3, "--seed", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "motif_id\tcount\tmean\tstd\tz\tp"
    assert lines[1] == "3:3f\t4\t4.000000\t0.000000\tNA\t1.000000"
    assert "# replicas=3" in lines


def cli_process(*args):
    proc = subprocess.run([sys.executable, "-m", "dimotif", *map(str, args)],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_byte_identical_reports(random_file):
    # separate processes: cache statistics reflect a process-wide memo
    args = ("--input", random_file, "--k", 4, "--random", 4, "--seed", 2, "--no-timing")
    a = cli_process(*args)
    b = cli_process(*args)
    assert a == b
    rows = [line.split("\t")[0] for line in a.splitlines()[1:] if not line.startswith("#")]
    assert rows == sorted(rows)


def test_json_round_trip(capsys, random_file, tmp_path):
    out = tmp_path / "report.json"
    code, stdout, _ = run(capsys, "--input", random_file, "--k", 4, "--format", "json",
                          "--random", 2, "--output", out)
    assert code == 0 and stdout == ""
    text = out.read_text()
    data = json.loads(text)
    assert json.dumps(data, indent=2, sort_keys=True) + "\n" == text
    assert data["footer"]["total"] == sum(r["count"] for r in data["motifs"])


def test_census(capsys):
    code, out, _ = run(capsys, "--census", 3)
    assert code == 0 and out.strip() == "k=3\tconnected=13\tall=16"
    code, _, err = run(capsys, "--census", 6)
    assert code != 0 and "long" in err


@pytest.mark.parametrize("args,needle", [
    (("--input", "/nonexistent/file", "--k", 3), "cannot read"),
    (("--k", 3), "required"),
])
def test_usage_errors(capsys, args, needle):
    code, _, err = run(capsys, *args)
    assert code != 0 and needle in err


def test_k_larger_than_n(capsys, k4_file):
    code, _, err = run(capsys, "--input", k4_file, "--k", 5)
    assert code != 0 and "exceeds" in err


def test_bad_flag_exits_nonzero(capsys, k4_file):
    with pytest.raises(SystemExit) as exc:
        main(["--input", str(k4_file), "--k", "9"])
    assert exc.value.code != 0


def test_malformed_file(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("0 1\n1 2 3\n")
    code, _, err = run(capsys, "--input", p, "--k", 3)
    assert code != 0 and "line 2" in err


def test_module_entry_point(k4_file):
    out = cli_process("--input", k4_file, "--k", 3, "--no-timing")
    assert out.splitlines()[1] == "3:3f\t4"
    assert not any(line.startswith("# wall_time") for line in out.splitlines())
