"""Tests for the command-line client, in-process and against a live server."""

import json
import socket
import subprocess
import sys
import time

import httpx
import pytest

from qeac.cli import main

CSV_HEADER = "t,fidelity,trace,purity,excitation"


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "qeac" in capsys.readouterr().out


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_table_json(capsys):
    code, out, _ = run_cli(["table", "--l-max", "4"], capsys)
    assert code == 0
    body = json.loads(out)
    assert body["command"] == "table"
    assert len(body["rows"]) == 4
    assert body["rows"][3]["dark_count"] == 6


def test_table_csv(capsys):
    code, out, _ = run_cli(["table", "--l-max", "4", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "L,dark_count,efficiency,asymptote,gap,multiplicities"
    assert lines[4].startswith("4,6,0.646240625180289,")
    assert lines[4].endswith("4:1 2:3 0:2")


def test_table_range_guard(capsys):
    code, _, err = run_cli(["table", "--l-max", "0"], capsys)
    assert code == 2
    assert "usage error" in err


def test_verify_passes_for_small_registers(capsys, tmp_path):
    summary = tmp_path / "verify.json"
    code, out, _ = run_cli(["verify", "--l", "3", "--output", str(summary)], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 7
    assert all(line.endswith(" pass") for line in lines)
    assert lines[0].startswith("kernel_count: residual=")
    body = json.loads(summary.read_text())
    assert body["passed"] is True
    assert body["checks"][0]["pass"] is True


def test_verify_range_is_a_usage_error(capsys):
    code, _, err = run_cli(["verify", "--l", "1"], capsys)
    assert code == 2
    assert "2..8" in err
    code, _, _ = run_cli(["verify", "--l", "9"], capsys)
    assert code == 2


def test_codes_json(capsys):
    code, out, _ = run_cli(["codes", "--l", "3", "--source", "reference"], capsys)
    assert code == 0
    body = json.loads(out)
    assert body["source"] == "reference"
    assert len(body["codewords"]) == 3
    assert body["codewords"][0]["label"]["copy"] == 1


def test_evolve_collective_encoded_state(capsys):
    code, out, _ = run_cli(
        ["evolve", "--c0", "0.6", "--c1", "0.8", "--t-max", "1", "--dt", "0.01",
         "--samples", "11"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 12
    final = [float(x) for x in lines[-1].split(",")]
    assert abs(final[0] - 1.0) < 1e-12
    assert abs(final[1] - 1.0) < 1e-9


def test_evolve_independent_singlet_decay(capsys):
    code, out, _ = run_cli(
        ["evolve", "--model", "independent", "--singlet", "--t-max", "1",
         "--dt", "0.001", "--samples", "11"],
        capsys,
    )
    assert code == 0
    final = [float(x) for x in out.strip().split("\n")[-1].split(",")]
    assert abs(final[1] - 0.36787944117144233) < 1e-6


def test_evolve_defaults_to_all_excited(capsys):
    code, out, _ = run_cli(
        ["evolve", "--l", "2", "--t-max", "0.5", "--dt", "0.01", "--samples", "6"],
        capsys,
    )
    assert code == 0
    rows = out.strip().split("\n")[1:]
    first = [float(x) for x in rows[0].split(",")]
    assert abs(first[4] - 2.0) < 1e-12  # |11> has collective excitation 2
    assert first[1] == 1.0


def test_evolve_writes_byte_identical_files(tmp_path, capsys):
    argv = ["evolve", "--singlet", "--model", "independent", "--t-max", "0.5",
            "--dt", "0.01", "--samples", "6"]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert main(argv + ["--output", str(first)]) == 0
    assert main(argv + ["--output", str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


def test_evolve_geometry_file(tmp_path, capsys):
    geometry = tmp_path / "geometry.json"
    geometry.write_text(json.dumps({
        "positions_m": [[0, 0, 0], [0, 0, 0]],
        "omega0_rad_s": 1.0,
        "v0_m_s": 1.0,
    }))
    code, out, _ = run_cli(
        ["evolve", "--model", "correlated", "--geometry", str(geometry),
         "--singlet", "--t-max", "0.5", "--dt", "0.01", "--samples", "6"],
        capsys,
    )
    assert code == 0
    rows = out.strip().split("\n")[1:]
    for row in rows:
        assert abs(float(row.split(",")[1]) - 1.0) < 1e-9


def test_evolve_usage_errors(capsys, tmp_path):
    code, _, err = run_cli(["evolve", "--c0", "0.6"], capsys)
    assert code == 2
    assert "--c0 and --c1" in err

    code, _, err = run_cli(["evolve", "--singlet", "--initial", "11"], capsys)
    assert code == 2
    assert "one initial state" in err

    code, _, err = run_cli(["evolve", "--model", "correlated"], capsys)
    assert code == 2
    assert "geometry" in err

    state = tmp_path / "state.json"
    state.write_text("[0.5, 0.0, 0.0, 0.0]")
    code, _, err = run_cli(["evolve", "--state", str(state), "--t-max", "1"], capsys)
    assert code == 1
    assert "NotNormalizedError" in err

    code, _, err = run_cli(["evolve", "--state", str(tmp_path / "missing.json")], capsys)
    assert code == 1
    assert "i/o error" in err


def test_evolve_dark_weights(capsys):
    code, out, _ = run_cli(
        ["evolve", "--l", "3", "--dark", "0.6,0.8", "--delta0", "2.0",
         "--t-max", "1", "--dt", "0.01", "--samples", "6"],
        capsys,
    )
    assert code == 0
    for row in out.strip().split("\n")[1:]:
        assert abs(float(row.split(",")[1]) - 1.0) < 1e-9


def test_sweep_separation_csv(capsys):
    code, out, _ = run_cli(
        ["evolve", "--sweep-separation", "--l", "3", "--t-max", "0.5",
         "--dt", "0.01", "--k0d-max", "1.0", "--k0d-step", "0.5",
         "--format", "csv"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k0d,fidelity"
    assert len(lines) == 4
    fidelities = [float(line.split(",")[1]) for line in lines[1:]]
    assert fidelities[0] >= 1.0 - 1e-9
    assert fidelities == sorted(fidelities, reverse=True)


def test_sweep_separation_json(capsys):
    code, out, _ = run_cli(
        ["evolve", "--sweep-separation", "--t-max", "0.5", "--dt", "0.01",
         "--k0d-max", "0.5", "--k0d-step", "0.5"],
        capsys,
    )
    assert code == 0
    body = json.loads(out)
    assert body["command"] == "sweep-separation"
    assert body["L"] == 3
    assert body["checks"][0]["pass"] is True


def test_trajectories_csv_and_summary(tmp_path, capsys):
    series = tmp_path / "series.csv"
    summary = tmp_path / "summary.json"
    argv = ["trajectories", "--initial", "11", "--t-max", "0.5", "--dt", "0.01",
            "--samples", "6", "--n", "100", "--seed", "7", "--threshold", "0.5",
            "--output", str(series), "--summary", str(summary)]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    lines = series.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 7
    body = json.loads(summary.read_text())
    assert body["command"] == "trajectories"
    assert body["n_traj"] == 100
    assert body["seed"] == 7
    assert body["checks"][0]["name"] == "max_trace_distance"
    assert body["checks"][0]["pass"] is True
    assert "series" not in body

    rerun_series = tmp_path / "rerun.csv"
    rerun_summary = tmp_path / "rerun.json"
    argv2 = argv[:-4] + ["--output", str(rerun_series), "--summary", str(rerun_summary)]
    assert main(argv2) == 0
    capsys.readouterr()
    assert rerun_series.read_bytes() == series.read_bytes()
    assert rerun_summary.read_bytes() == summary.read_bytes()


def test_trajectories_summary_on_stdout_when_csv_goes_to_file(tmp_path, capsys):
    series = tmp_path / "series.csv"
    code, out, _ = run_cli(
        ["trajectories", "--initial", "11", "--t-max", "0.2", "--dt", "0.01",
         "--samples", "3", "--n", "20", "--threshold", "0.9",
         "--output", str(series)],
        capsys,
    )
    assert code == 0
    body = json.loads(out)
    assert body["command"] == "trajectories"


def test_trajectories_failed_threshold_exits_nonzero(capsys):
    code, out, _ = run_cli(
        ["trajectories", "--initial", "11", "--t-max", "0.2", "--dt", "0.01",
         "--samples", "3", "--n", "5", "--threshold", "1e-6"],
        capsys,
    )
    assert code == 1
    assert out.startswith(CSV_HEADER)


def test_trajectories_dark_state_is_exact(capsys):
    code, out, _ = run_cli(
        ["trajectories", "--singlet", "--t-max", "0.2", "--dt", "0.01",
         "--samples", "3", "--n", "10", "--threshold", "1e-12"],
        capsys,
    )
    assert code == 0
    for row in out.strip().split("\n")[1:]:
        assert float(row.split(",")[1]) == 1.0


@pytest.fixture(scope="module")
def server_url():
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    process = subprocess.Popen(
        [sys.executable, "-m", "uvicorn", "qeac.service.app:app",
         "--host", "127.0.0.1", "--port", str(port), "--log-level", "error"],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    url = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + 30.0
        while True:
            try:
                if httpx.get(url + "/health", timeout=1.0).status_code == 200:
                    break
            except httpx.HTTPError:
                pass
            if time.monotonic() > deadline:
                raise RuntimeError("server did not come up in time")
            time.sleep(0.1)
        yield url
    finally:
        process.terminate()
        process.wait(timeout=10)


def test_server_table_matches_local(server_url, capsys):
    code, local, _ = run_cli(["table", "--l-max", "5"], capsys)
    assert code == 0
    code, remote, _ = run_cli(["--server", server_url, "table", "--l-max", "5"], capsys)
    assert code == 0
    assert remote == local


def test_server_evolve_matches_local(server_url, capsys):
    argv = ["evolve", "--singlet", "--model", "independent", "--t-max", "0.5",
            "--dt", "0.01", "--samples", "6"]
    code, local, _ = run_cli(argv, capsys)
    assert code == 0
    code, remote, _ = run_cli(["--server", server_url] + argv, capsys)
    assert code == 0
    assert remote == local


def test_server_verify_and_error_mapping(server_url, capsys):
    code, out, _ = run_cli(["--server", server_url, "verify", "--l", "2"], capsys)
    assert code == 0
    assert "kernel_count" in out

    code, _, err = run_cli(
        ["--server", server_url, "codes", "--l", "5", "--source", "reference"], capsys
    )
    assert code == 1
    assert "server returned 400" in err
