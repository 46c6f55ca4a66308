import json
import xml.etree.ElementTree as ET

import pytest

from infodyn.cli import main
from infodyn.jsonio import dump_json


def write_json(path, obj):
    path.write_text(dump_json(obj))
    return str(path)


def state_file(tmp_path, matrix, name="state.json"):
    return write_json(tmp_path / name, matrix)


def channel_file(tmp_path, payload, name="channel.json"):
    return write_json(tmp_path / name, payload)


SWEEP_FAST = [
    "ecd-sweep", "--map", "logistic", "--from", "3.5", "--to", "3.7",
    "--step", "0.05", "--samples", "2000", "--transient", "100", "--bins", "25",
]


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "rows.csv"
    assert main(SWEEP_FAST + ["--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "a,D,lyapunov,label"
    assert len(lines) == 6


def test_sweep_full_grid_row_count(tmp_path):
    out = tmp_path / "rows.csv"
    code = main([
        "ecd-sweep", "--map", "logistic", "--from", "3.0", "--to", "4.0",
        "--step", "0.005", "--samples", "500", "--transient", "50",
        "--bins", "20", "--out", str(out),
    ])
    assert code == 0
    assert len(out.read_text().splitlines()) == 202


def test_sweep_reruns_and_worker_counts_byte_identical(tmp_path):
    files = []
    for idx, workers in enumerate(("1", "3", "1")):
        out = tmp_path / f"rows{idx}.csv"
        assert main(SWEEP_FAST + ["--workers", workers, "--out", str(out)]) == 0
        files.append(out.read_bytes())
    assert files[0] == files[1] == files[2]


def test_sweep_plot_is_valid_deterministic_svg(tmp_path):
    svgs = []
    for idx in range(2):
        plot = tmp_path / f"plot{idx}.svg"
        out = tmp_path / f"rows{idx}.csv"
        assert main(SWEEP_FAST + ["--out", str(out), "--plot", str(plot)]) == 0
        ET.fromstring(plot.read_text())
        svgs.append(plot.read_bytes())
    assert svgs[0] == svgs[1]


def test_sweep_unknown_map_is_usage_error(tmp_path):
    assert main(["ecd-sweep", "--map", "constantdemo", "--from", "3", "--to", "4", "--step", "0.5"]) == 2


def test_sweep_escaping_orbit_exits_dynamics_code(tmp_path):
    code = main([
        "ecd-sweep", "--map", "logistic", "--from", "4.2", "--to", "4.2",
        "--step", "0.1", "--samples", "100", "--transient", "0",
    ])
    assert code == 3


def test_sweep_rejects_bad_worker_count():
    assert main(SWEEP_FAST + ["--workers", "0"]) == 2


def test_quantum_ecd_identity_channel(tmp_path):
    state = state_file(tmp_path, [[0.7, 0.0], [0.0, 0.3]])
    channel = channel_file(tmp_path, {"kind": "unitary", "matrix": [[1.0, 0.0], [0.0, 1.0]]})
    out = tmp_path / "report.json"
    assert main(["quantum-ecd", "--state", state, "--channel", channel, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["D"] == 0.0
    assert report["degenerate"] is False


def test_quantum_ecd_degenerate_reports_restarts(tmp_path):
    state = state_file(tmp_path, [[0.5, 0.0], [0.0, 0.5]])
    channel = channel_file(tmp_path, {
        "kind": "kraus",
        "kraus_ops": [
            [[[0.8660254037844386, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.8660254037844386, 0.0]]],
            [[[0.0, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.0, 0.0]]],
        ],
    })
    out = tmp_path / "report.json"
    assert main([
        "quantum-ecd", "--state", state, "--channel", channel,
        "--restarts", "40", "--out", str(out),
    ]) == 0
    report = json.loads(out.read_text())
    assert report["degenerate"] is True
    assert report["restarts"] == 41
    assert report["best"] <= report["worst"]


def test_quantum_ecd_log_base_scales_report(tmp_path):
    state = state_file(tmp_path, [[0.5, 0.0], [0.0, 0.5]])
    channel = channel_file(tmp_path, {"kind": "stochastic", "P": [[0.5, 0.5], [0.5, 0.5]]})
    nats = tmp_path / "nats.json"
    bits = tmp_path / "bits.json"
    base = ["quantum-ecd", "--state", state, "--channel", channel, "--restarts", "5"]
    assert main(base + ["--out", str(nats)]) == 0
    assert main(base + ["--log-base", "2", "--out", str(bits)]) == 0
    d_nats = json.loads(nats.read_text())["D"]
    d_bits = json.loads(bits.read_text())["D"]
    assert d_bits == pytest.approx(1.0, abs=1e-12)
    assert d_nats == pytest.approx(0.6931471805599453, abs=1e-12)


def test_quantum_ecd_dimension_mismatch_exit_code(tmp_path):
    state = state_file(tmp_path, [[0.7, 0.0], [0.0, 0.3]])
    channel = channel_file(tmp_path, {
        "kind": "unitary",
        "matrix": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    })
    assert main(["quantum-ecd", "--state", state, "--channel", channel]) == 4


def test_quantum_ecd_missing_file_is_usage_error(tmp_path):
    state = state_file(tmp_path, [[1.0]])
    assert main(["quantum-ecd", "--state", state, "--channel", str(tmp_path / "nope.json")]) == 2


def test_quantum_ecd_malformed_json_is_usage_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    state = state_file(tmp_path, [[1.0]])
    assert main(["quantum-ecd", "--state", state, "--channel", str(bad)]) == 2


def test_quantum_ecd_rejects_bad_log_base(tmp_path):
    state = state_file(tmp_path, [[1.0]])
    channel = channel_file(tmp_path, {"kind": "unitary", "matrix": [[1.0]]})
    assert main(["quantum-ecd", "--state", state, "--channel", channel, "--log-base", "0.5"]) == 2


def recognition_experiment(tmp_path, **overrides):
    payload = {
        "n": 2,
        "basis": "fourier",
        "rho": [[1.0, 0.0], [0.0, 0.0]],
        "gamma": [[0.5, 0.0], [0.0, 0.5]],
        "policy": "argmax",
        "steps": 3,
    }
    payload.update(overrides)
    return write_json(tmp_path / "experiment.json", payload)


def test_recognize_writes_one_json_line_per_step(tmp_path):
    exp = recognition_experiment(tmp_path)
    out = tmp_path / "steps.jsonl"
    assert main(["recognize", "--experiment", exp, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    final = json.loads(lines[-1])
    assert final["t"] == 2
    assert final["entropy_of_gamma"] == pytest.approx(0, abs=1e-12)


def test_recognize_zero_steps_empty_output(tmp_path):
    exp = recognition_experiment(tmp_path, steps=0)
    out = tmp_path / "steps.jsonl"
    assert main(["recognize", "--experiment", exp, "--out", str(out)]) == 0
    assert out.read_text() == ""


def test_recognize_sampling_reruns_identical(tmp_path):
    exp = recognition_experiment(tmp_path, policy="sample", seed=21, steps=5)
    blobs = []
    for idx in range(2):
        out = tmp_path / f"steps{idx}.jsonl"
        assert main(["recognize", "--experiment", exp, "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_recognize_zero_probability_outcome_exit_code(tmp_path):
    exp = recognition_experiment(
        tmp_path,
        basis="standard",
        rho=[[1.0, 0.0], [0.0, 0.0]],
        gamma=[[1.0, 0.0], [0.0, 0.0]],
        policy={"fixed": [0, 1]},
        steps=1,
    )
    assert main(["recognize", "--experiment", exp]) == 5


def test_recognize_unknown_field_is_usage_error(tmp_path):
    exp = recognition_experiment(tmp_path)
    payload = json.loads((tmp_path / "experiment.json").read_text())
    payload["bogus"] = True
    exp = write_json(tmp_path / "experiment.json", payload)
    assert main(["recognize", "--experiment", exp]) == 2


def test_axioms_reports_all_pass(tmp_path):
    out = tmp_path / "axioms.json"
    assert main(["axioms", "--dim", "2", "--trials", "5", "--seed", "0", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["all_passed"] is True
    assert set(payload) == {
        "nonnegativity", "relabel_invariance", "additivity",
        "transmitted_bounded", "identity_recovery", "all_passed",
    }


def test_axioms_dim_one_is_usage_error():
    assert main(["axioms", "--dim", "1"]) == 2


def test_value_direct_flags(tmp_path):
    out = tmp_path / "value.json"
    assert main(["value", "--dim", "2", "--pairs", "4", "--seed", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert len(payload["pairs"]) == 4
    assert 0.0 <= payload["agreement_rate"] <= 1.0
    assert set(payload["pairs"][0]) == {"D", "D_prime", "V", "V_prime", "agree"}


def test_value_batch_file_and_determinism(tmp_path):
    batch = write_json(tmp_path / "batch.json", {"dim": 2, "pairs": 5, "seed": 8})
    blobs = []
    for idx in range(2):
        out = tmp_path / f"value{idx}.json"
        assert main(["value", "--batch", batch, "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_value_batch_rejects_unknown_keys(tmp_path):
    batch = write_json(tmp_path / "batch.json", {"dim": 2, "pairs": 5, "threshold": 0.9})
    assert main(["value", "--batch", batch]) == 2


def test_missing_subcommand_is_usage_error():
    assert main([]) == 2


def test_help_exits_clean():
    assert main(["--help"]) == 0
