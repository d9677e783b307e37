import json

from altchain.cli import main
from altchain.sweep import CSV_COLUMNS, parse_csv


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "run.csv"
    rc = main(["sweep", "--N", "10", "--points", "4", "--pairs", "nn_J1,nnn",
               "--solver", "exact", "--deterministic-timing",
               "--out", str(out)])
    assert rc == 0
    rows = parse_csv(out)
    assert len(rows) == 8
    assert {r.solver for r in rows} == {"exact"}


def test_sweep_stdout(capsys):
    rc = main(["sweep", "--N", "8", "--points", "2", "--solver", "exact",
               "--deterministic-timing"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_sweep_from_spec_file(tmp_path):
    out = tmp_path / "run.csv"
    spec = {"base": {"gamma": 1.0, "lambda": 1.0, "alpha": 1.0, "beta": 1.0,
                     "kappa": 0.0, "n_sites": 8, "boundary": "open"},
            "vary": "lambda", "grid": [0.5, 1.0, 1.5], "pairs": ["nn_J1"],
            "solver": "exact", "deterministic_timing": True,
            "output_path": str(out)}
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    assert main(["sweep", "--spec", str(spec_path)]) == 0
    assert len(parse_csv(out)) == 3


def test_capability_error_exit_code(capsys):
    rc = main(["sweep", "--N", "10", "--kappa", "0.3",
               "--solver", "free_fermion", "--points", "2"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_dump_spectrum(tmp_path):
    out = tmp_path / "run.csv"
    dump = tmp_path / "levels.json"
    rc = main(["sweep", "--N", "8", "--kappa", "0.5", "--points", "2",
               "--solver", "exact", "--out", str(out),
               "--dump-spectrum", str(dump)])
    assert rc == 0
    levels = json.loads(dump.read_text())
    assert len(levels) == 6
    assert all("energy" in l and "parity" in l for l in levels)


def test_preset_command(tmp_path, capsys):
    rc = main(["preset", "fig4", "--N", "8", "--solver", "exact",
               "--out", str(tmp_path), "--deterministic-timing"])
    assert rc == 0
    written = sorted(p.name for p in tmp_path.glob("fig4_*.csv"))
    assert len(written) == 6
    rows = parse_csv(tmp_path / written[0])
    assert {r.pair for r in rows} == {"nn_J1", "nnn"}


def test_threshold_scan_command(tmp_path):
    rc = main(["preset", "fig3", "--N", "10", "--solver", "exact",
               "--out", str(tmp_path), "--threshold-scan", "alpha",
               "--deterministic-timing"])
    assert rc == 0
    rows = parse_csv(tmp_path / "fig3_threshold_alpha.csv")
    assert all(r.vary_name == "alpha" for r in rows)


def test_validate_command(capsys):
    rc = main(["validate", "--points", "2"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"]
