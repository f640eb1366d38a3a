import json

import pytest

from casimir_coherence import cli
from casimir_coherence.errors import NumericalFailure
from casimir_coherence.sweep import read_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fig2_panel(capsys):
    code, out, _ = run(capsys, "fig2", "a")
    assert code == 0
    meta, rows = read_csv(out)
    assert meta["title"] == "fig2a"
    assert len(rows) == 111


def test_fig1_all_panels_single_header(capsys):
    code, out, _ = run(capsys, "fig1")
    assert code == 0
    meta, rows = read_csv(out)
    assert meta["title"] == "fig1abc"
    assert len(rows) == 3 * 121
    assert out.count("epsilon,f,T_mK") == 1


def test_sweep_requires_range(capsys):
    code, _, err = run(capsys, "sweep")
    assert code == 2
    assert "--lo" in err


def test_sweep_temperature(capsys):
    code, out, _ = run(capsys, "sweep", "--variable", "temperature", "--lo", "20", "--hi", "80", "--count", "7",
                       "--epsilon", "0.2", "--pipeline", "both", "--measures", "E,sqrtC")
    assert code == 0
    meta, rows = read_csv(out)
    assert meta["pipeline"] == "both"
    assert [r["T_mK"] for r in rows] == pytest.approx([20, 30, 40, 50, 60, 70, 80])
    assert rows[0]["sqrtD"] == ""


def test_nonperturbative_refused(capsys):
    code, _, err = run(capsys, "sweep", "--lo", "0", "--hi", "0.9")
    assert code == 2
    assert "allow-nonperturbative" in err
    code, _, _ = run(capsys, "sweep", "--lo", "0", "--hi", "0.9", "--count", "3", "--allow-nonperturbative")
    assert code == 0


def test_threshold_both_pipelines(capsys):
    code, out, _ = run(capsys, "threshold", "--measure", "E", "--epsilon", "0.1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("E (perturbative): vanishes at temperature = 47.6")
    assert lines[1].startswith("E (exact): vanishes at temperature = 47.8")


def test_threshold_coherence_none(capsys):
    code, out, _ = run(capsys, "threshold", "--measure", "C", "--pipeline", "exact")
    assert code == 0 and "no threshold" in out


def test_threshold_epsilon_variable(capsys):
    code, out, _ = run(capsys, "threshold", "--variable", "epsilon", "--temperature-mk", "50",
                       "--pipeline", "perturbative")
    assert code == 0 and "vanishes at epsilon" in out


def test_compare_published(capsys):
    code, out, _ = run(capsys, "threshold", "--compare-published")
    assert code == 0
    assert len([line for line in out.splitlines() if not line.startswith("#")]) == 5


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "--epsilon", "0.1", "--temperature-mk", "30", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["n_th"] == pytest.approx(6.71e-4, rel=0.01)
    assert rec["units"] == "nats"


def test_report_bits(capsys):
    _, nats, _ = run(capsys, "report", "--json")
    _, bits, _ = run(capsys, "report", "--json", "--units", "bits")
    assert json.loads(bits)["exact"]["C"] == pytest.approx(json.loads(nats)["exact"]["C"] / 0.6931471805599453)


def test_report_text(capsys):
    code, out, _ = run(capsys, "report", "--convention", "be")
    assert code == 0 and "be convention" in out


def test_omega_in_rad(capsys):
    _, a, _ = run(capsys, "report", "--json", "--omega-d-ghz", "10")
    _, b, _ = run(capsys, "report", "--json", "--omega-d-ghz", "62.83185307179586", "--omega-d-rad")
    assert json.loads(a)["f"] == pytest.approx(json.loads(b)["f"], rel=1e-12)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "fig.csv"
    code, out, _ = run(capsys, "fig2", "b", "--out", str(target))
    assert code == 0 and out == ""
    assert read_csv(target.read_text())[0]["title"] == "fig2b"


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run settings\nepsilon = 0.3\ntemperature-mk = 40  # mK\njson = yes\n")
    _, out, _ = run(capsys, "report", "--config", str(cfg))
    rec = json.loads(out)
    assert rec["epsilon"] == 0.3 and rec["temperature_K"] == pytest.approx(0.04)
    _, out, _ = run(capsys, "report", "--config", str(cfg), "--epsilon", "0.2")
    assert json.loads(out)["epsilon"] == 0.2


@pytest.mark.parametrize(
    "content,fragment",
    [("bogus = 1\n", "unknown key"), ("epsilon 0.1\n", "key = value"), ("count = many\n", "invalid value")],
)
def test_bad_config(capsys, tmp_path, content, fragment):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(content)
    code, _, err = run(capsys, "report", "--config", str(cfg))
    assert code == 2 and fragment in err


def test_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "report", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2 and "cannot read" in err


def test_unknown_flag(capsys):
    code, _, _ = run(capsys, "fig2", "--frobnicate")
    assert code == 2


def test_invalid_epsilon(capsys):
    code, _, err = run(capsys, "report", "--epsilon", "1.5")
    assert code == 2 and "epsilon" in err


def test_numerical_failure_exit_code(capsys, monkeypatch):
    def boom(*_args, **_kwargs):
        raise NumericalFailure("eigensolver diverged", 1.0)

    monkeypatch.setattr(cli, "run_sweep", boom)
    code, _, err = run(capsys, "fig2", "a")
    assert code == 3 and "numerical failure" in err
