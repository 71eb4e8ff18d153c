import pytest

from racewaybench import cli
from racewaybench import io as rio


def run_cli(*argv):
    return cli.main(list(argv))


@pytest.fixture()
def short_manifest(tmp_path):
    path = tmp_path / "short.ini"
    path.write_text(
        "[run]\n"
        "scenario = bundled\n"
        "parameters = bundled\n"
        f"output = {tmp_path / 'out'}\n"
        "days = 0.05\n"
        "[controllers]\n"
        "ph = onoff\n"
        "do = onoff\n"
        "hd = fixed\n"
        "temp = none\n")
    return path


def test_run_with_manifest(short_manifest, tmp_path, capsys):
    assert run_cli("run", str(short_manifest)) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "run complete" in out
    out_dir = tmp_path / "out"
    assert (out_dir / "timeseries.csv").exists()
    assert (out_dir / "summary.txt").exists()
    assert (out_dir / "manifest.ini").exists()
    assert (out_dir / "parameters.ini").exists()


def test_run_twice_identical_bytes(short_manifest, tmp_path):
    assert run_cli("run", str(short_manifest)) == cli.EXIT_OK
    first = (tmp_path / "out" / "timeseries.csv").read_bytes()
    first_sum = (tmp_path / "out" / "summary.txt").read_bytes()
    assert run_cli("run", str(short_manifest)) == cli.EXIT_OK
    assert (tmp_path / "out" / "timeseries.csv").read_bytes() == first
    assert (tmp_path / "out" / "summary.txt").read_bytes() == first_sum


def test_evaluate_reproduces_run_summary(short_manifest, tmp_path, capsys):
    run_cli("run", str(short_manifest))
    out_dir = tmp_path / "out"
    assert run_cli("evaluate", str(out_dir)) == cli.EXIT_OK
    capsys.readouterr()
    original = {
        k: v for k, v in rio.read_summary(out_dir / "summary.txt").items()
        if k.startswith(("cost_", "kpi_"))}
    recomputed = rio.read_summary(out_dir / "summary_recomputed.txt")
    assert recomputed == original


def test_flag_overrides(tmp_path, capsys):
    out = tmp_path / "flagged"
    code = run_cli("run", "--scenario", "bundled", "--params", "bundled",
                   "--ph", "pi", "--do", "pi", "--hd", "turbidostat",
                   "--temp", "pi", "--days", "0.05", "--out", str(out),
                   "--tol", "1e-5")
    assert code == cli.EXIT_OK
    man = rio.read_manifest(out / "manifest.ini")
    assert man.controllers["hd"] == "turbidostat"
    assert man.integrator.rel_tol == 1e-5


def test_unknown_controller_is_config_error(tmp_path, capsys):
    code = run_cli("run", "--ph", "fuzzy", "--days", "0.05",
                   "--out", str(tmp_path / "x"))
    assert code == cli.EXIT_CONFIG
    assert "fuzzy" in capsys.readouterr().err


def test_missing_scenario_column_is_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("time_s,rad_global_wm2,temp_ext_c,rh_pct\n"
                   "0.0,0.0,20.0,50.0\n")
    code = run_cli("run", "--scenario", str(bad),
                   "--out", str(tmp_path / "x"))
    assert code == cli.EXIT_CONFIG
    assert "wind_ms" in capsys.readouterr().err


def test_scenario_semantic_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "nonuniform.csv"
    bad.write_text("time_s,rad_global_wm2,temp_ext_c,rh_pct,wind_ms\n"
                   "0.0,0.0,20.0,50.0,1.0\n"
                   "300.0,0.0,20.0,50.0,1.0\n"
                   "700.0,0.0,20.0,50.0,1.0\n")
    code = run_cli("run", "--scenario", str(bad),
                   "--out", str(tmp_path / "x"))
    assert code == cli.EXIT_SCENARIO


def test_missing_manifest_is_config_error(tmp_path, capsys):
    assert run_cli("run", str(tmp_path / "nope.ini")) == cli.EXIT_CONFIG


def test_generate_writes_loadable_scenario(tmp_path):
    out = tmp_path / "gen.csv"
    assert run_cli("generate", "--days", "1", "--out", str(out)) == cli.EXIT_OK
    params, geom = rio.read_parameters(rio.asset_dir() / "parameters.ini")
    scen = rio.load_scenario(out, params, geom)
    assert scen.coverage == pytest.approx(86400.0)


def test_compare_emits_normalized_table(tmp_path, capsys):
    # half a day so every baseline cost term is exercised (normalization
    # rejects zero baselines by design)
    manifests = []
    for i, (hd, temp) in enumerate((("fixed", "none"), ("fixed", "onoff"))):
        path = tmp_path / f"m{i}.ini"
        path.write_text(
            "[run]\n"
            f"output = ignored\ndays = 0.5\n"
            "[controllers]\n"
            f"ph = onoff\ndo = onoff\nhd = {hd}\ntemp = {temp}\n")
        manifests.append(str(path))
    code = run_cli("compare", *manifests, "--out", str(tmp_path / "cmp"))
    assert code == cli.EXIT_OK
    table = (tmp_path / "cmp" / "comparison.txt").read_text()
    assert "J_avg" in table and "1.0000" in table
    assert (tmp_path / "cmp" / "comparison.csv").exists()
    assert (tmp_path / "cmp" / "m0" / "timeseries.csv").exists()
