import json

import pytest

from hgineq.cli import main
from hgineq.config import SuiteConfig, profile_library
from hgineq.errors import ConfigError
from hgineq.profiles import LogGrid

SMALL_TOML = """
seed = 7
profiles = ["gauss_log"]

[grid]
n = 1024
u_min = -20.0
u_max = 20.0
max_n = 8192

[[groups]]
name = "heisenberg"

[[theorems]]
id = "sobolev_lp"
p = [2.0]

[[theorems]]
id = "weighted_l2"
alpha = [0.0, 1.0]
"""

SHARP_TOML = """
seed = 7
profiles = ["gauss_log"]

[[groups]]
name = "heisenberg"

[[sharpness.curves]]
family = "power_cutoff"
verifier = "sobolev_lp"
group = "heisenberg"
p = 2.0

[[sharpness.slz]]
group = "heisenberg"
q = 2.0
gamma = 2.0
R = 1.0
ell = [100.0]
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_describe_contains_constants(capsys):
    assert main(["describe", "sobolev_lp"]) == 0
    out = capsys.readouterr().out
    assert "p/Q" in out
    assert main(["describe", "slz"]) == 0
    out = capsys.readouterr().out
    assert "q/(gamma-1)" in out


def test_describe_unknown_exits_2(capsys):
    assert main(["describe", "nosuch"]) == 2


def test_list_shows_all(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for vid in ("sobolev_lp", "hardy", "weighted_lp", "weighted_l2",
                "higher_order", "fractional", "embedding", "poincare", "slz"):
        assert vid in out


def test_empty_theorem_list_gives_empty_report(tmp_path, capsys):
    cfg = write(tmp_path, "empty.toml", """
profiles = ["gauss_log"]
[[groups]]
name = "euclidean3"
""")
    out = tmp_path / "out"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "report.jsonl").read_text() == ""


def test_config_validation_names_offender(tmp_path, capsys):
    cfg = write(tmp_path, "bad.toml", """
profiles = ["gauss_log"]
[[groups]]
name = "heisenberg"
[[theorems]]
id = "higher_order"
alpha = [2.0]
k = [2]
""")
    rc = main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "higher_order" in err and "Q != 2*alpha" in err


def test_unknown_verifier_id_rejected(tmp_path, capsys):
    cfg = write(tmp_path, "bad2.toml", """
profiles = ["gauss_log"]
[[groups]]
name = "euclidean3"
[[theorems]]
id = "nosuch"
""")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "theorems[0].id" in capsys.readouterr().err


def test_unknown_profile_rejected(tmp_path, capsys):
    cfg = write(tmp_path, "bad3.toml", """
profiles = ["nosuch"]
[[groups]]
name = "euclidean3"
[[theorems]]
id = "sobolev_lp"
p = [2.0]
""")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "profiles[0]" in capsys.readouterr().err


def test_small_suite_runs_and_sorts(tmp_path, capsys):
    cfg = write(tmp_path, "small.toml", SMALL_TOML)
    out = tmp_path / "out"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    lines = [json.loads(l) for l in (out / "report.jsonl").read_text().splitlines()]
    assert len(lines) == 3
    keys = [(l["theorem_id"], l["group"],
             json.dumps(l["parameters"], sort_keys=True)) for l in lines]
    assert keys == sorted(keys)
    assert all(l["status"] == "pass" for l in lines)
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["cells"] == 3
    assert "timestamp" in meta  # timestamps live here, never in the report
    assert "timestamp" not in (out / "report.jsonl").read_text()


def test_reports_byte_identical_across_runs_and_jobs(tmp_path):
    cfg = write(tmp_path, "small.toml", SMALL_TOML)
    outs = []
    for tag, jobs in (("a", "1"), ("b", "3"), ("c", "1")):
        out = tmp_path / tag
        assert main(["verify", "--config", str(cfg), "--out", str(out),
                     "--jobs", jobs]) == 0
        outs.append((out / "report.jsonl").read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_json_config_accepted(tmp_path):
    raw = {
        "seed": 5,
        "profiles": ["gauss_log"],
        "grid": {"n": 1024, "max_n": 8192},
        "groups": [{"name": "euclidean3"}],
        "theorems": [{"id": "sobolev_lp", "p": [2.0]}],
    }
    cfg = write(tmp_path, "cfg.json", json.dumps(raw))
    out = tmp_path / "out"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    assert len((out / "report.jsonl").read_text().splitlines()) == 1


def test_cli_overrides(tmp_path):
    cfg = write(tmp_path, "small.toml", SMALL_TOML)
    out = tmp_path / "out"
    assert main(["verify", "--config", str(cfg), "--out", str(out),
                 "--seed", "99", "--grid-n", "2048",
                 "--tol-identity", "1e-5"]) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["seed"] == 99


def test_sharpness_subcommand(tmp_path):
    cfg = write(tmp_path, "sharp.toml", SHARP_TOML)
    out = tmp_path / "out"
    assert main(["sharpness", "--config", str(cfg), "--out", str(out)]) == 0
    csv_text = (out / "ratio_curves.csv").read_text()
    assert "power_cutoff" in csv_text and "ratio" in csv_text
    slz_lines = (out / "slz_asymptotics.jsonl").read_text().splitlines()
    assert len(slz_lines) == 1
    rec = json.loads(slz_lines[0])
    assert rec["status"] == "pass"


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["verify", "--config", str(tmp_path / "none.toml"),
                 "--out", str(tmp_path / "o")]) == 2


def test_malformed_config_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, "broken.toml", "this is = not [ valid\n")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "cannot parse" in capsys.readouterr().err


def test_bad_grid_n_override_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, "small.toml", SMALL_TOML)
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "o"),
                 "--grid-n", "1000"]) == 2
    assert "--grid-n" in capsys.readouterr().err


def test_default_bundled_config_passes(tmp_path):
    """The bundled default suite (3 groups, full catalog) exits 0."""
    out = tmp_path / "out"
    assert main(["verify", "--out", str(out), "--jobs", "4"]) == 0
    lines = [json.loads(l) for l in (out / "report.jsonl").read_text().splitlines()]
    assert len(lines) > 300
    assert all(l["status"] == "pass" for l in lines)
    ids = {l["theorem_id"] for l in lines}
    assert {"sobolev_lp", "hardy", "weighted_lp", "weighted_l2", "higher_order",
            "fractional", "embedding", "poincare", "slz", "scaling",
            "polar_mc"} <= ids


def test_jobs_env_fallback(monkeypatch):
    from hgineq.cli import _jobs_default
    monkeypatch.setenv("HGINEQ_JOBS", "5")
    assert _jobs_default() == 5
    monkeypatch.setenv("HGINEQ_JOBS", "junk")
    assert _jobs_default() == 1
    monkeypatch.delenv("HGINEQ_JOBS")
    assert _jobs_default() == 1


def test_profile_library_contents():
    lib = profile_library(LogGrid(-20.0, 20.0, 1024))
    for name in ("gauss_log", "gauss_log_shift", "poly_gauss", "asym_gauss",
                 "bimodal_gauss", "complex_gauss", "bump_ball"):
        assert name in lib


def test_suiteconfig_complex_beta_grid():
    cfg = SuiteConfig.from_dict({
        "groups": [{"name": "heisenberg"}],
        "profiles": ["gauss_log"],
        "theorems": [{"id": "fractional", "beta": [[1.0, 0.0], [1.0, 3.0]],
                      "k": [2]}],
    })
    combos = cfg.theorems[0].combos
    assert len(combos) == 2
    assert combos[1]["beta"] == complex(1.0, 3.0)
    cfg.validate()


def test_suiteconfig_rejects_bad_grid():
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"grid": {"n": 100}})


def test_suiteconfig_rejects_empty_param_list():
    with pytest.raises(ConfigError, match="empty parameter list"):
        SuiteConfig.from_dict({
            "groups": [{"name": "euclidean3"}],
            "profiles": ["gauss_log"],
            "theorems": [{"id": "sobolev_lp", "p": []}],
        })


def test_runtime_failure_exits_1(tmp_path, capsys):
    # an absurdly tight Monte Carlo gate makes the polar check fail at runtime
    cfg = write(tmp_path, "tight.toml", """
seed = 7
mc_sigma = 1e-8
profiles = ["bump_ball"]
[[groups]]
name = "euclidean3"
[[theorems]]
id = "polar_mc"
samples = [20000]
""")
    out = tmp_path / "out"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 1
    line = json.loads((out / "report.jsonl").read_text().splitlines()[0])
    assert line["status"] == "fail"
