import json
import math
import textwrap

import numpy as np
import pytest

from bimatcrack import cli
from bimatcrack import fieldops as fo
from bimatcrack import oracles as orc


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return p


def _read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0], np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def _oracle_run(tmp_path, case="mixed_appA", n=1024, formats="csv"):
    out = tmp_path / case
    rc = cli.main(["--oracle", case, "--grid-n", str(n), "--out", str(out),
                   "--formats", formats])
    return rc, out


# expression language

def test_expression_values():
    f = cli.compile_expression("-(x + 1) * exp(x) / 2 + sqrt(-x) ** 3 - pi")
    x = np.array([-2.0, -0.5])
    want = -(x + 1) * np.exp(x) / 2 + np.sqrt(-x) ** 3 - math.pi
    assert np.allclose(f(x), want, rtol=1e-15)
    assert np.array_equal(cli.compile_expression("2")(x), [2.0, 2.0])


@pytest.mark.parametrize("text", ["__import__('os')", "x.real", "sin(x)", "lambda: 1",
                                  "exp(x, 2)", "[x]", "x if x else 1", "'a'", "x +"])
def test_expression_rejects_other_syntax(text):
    with pytest.raises(cli.ConfigError):
        cli.compile_expression(text)


# resampling of tabulated data

def test_resample_inside_and_outside():
    xd = -np.logspace(-3, 1, 200)
    vd = np.sqrt(-xd) * np.exp(xd)
    xo = -np.logspace(-2, 0.5, 50)
    got = cli.resample(xd, vd, xo)
    assert np.max(np.abs(got - np.sqrt(-xo) * np.exp(xo))) <= 1e-5
    # continuation towards the tip with the declared exponent
    tip = cli.resample(xd, vd, np.array([-1e-5]), tip=0.5)
    assert tip[0] == pytest.approx(vd[0] * (1e-5 / 1e-3) ** 0.5, rel=1e-12)
    far = cli.resample(xd, vd, np.array([-20.0]), far=-2.0)
    assert far[0] == pytest.approx(vd[-1] * 2.0 ** -2, rel=1e-12)


def test_resample_rejects_bad_abscissae():
    with pytest.raises(cli.ConfigError):
        cli.resample(np.array([-1.0, -1.0]), np.array([1.0, 2.0]), np.array([-0.5]))
    with pytest.raises(cli.ConfigError):
        cli.resample(np.array([0.0, -1.0]), np.array([1.0, 2.0]), np.array([-0.5]))


def test_table_input_matches_expression_input(tmp_path):
    x = [-v for v in np.logspace(-6, 2, 800).tolist()]
    rows = "\n".join(f"{a!r},{a * math.exp(a)!r},{-math.exp(a)!r}" for a in x)
    (tmp_path / "load.csv").write_text("x,p_plus,p_minus\n" + rows + "\n")
    common = """
        [run]
        grid_n = 256
        [constants]
        eta = 2
        k = 1
    """
    t = cli.run(cli.load_config(_write(tmp_path, common + "[input]\ntable = load.csv\n",
                                       "t.ini")), write=False)
    e = cli.run(cli.load_config(_write(tmp_path, common + "[input]\np_plus = x * exp(x)\n"
                                       "p_minus = -exp(x)\n", "e.ini")), write=False)
    assert t.summary["jump_u(-1)"] == pytest.approx(e.summary["jump_u(-1)"], rel=1e-4)
    assert t.summary["sigma(1)"] == pytest.approx(e.summary["sigma(1)"], rel=1e-4)


# configuration

def test_table_with_unreadable_entries(tmp_path):
    (tmp_path / "bad.csv").write_text("x,p_plus,p_minus\n-1,abc,0\n-2,0,0\n")
    with pytest.raises(cli.ConfigError):
        cli.read_table(tmp_path / "bad.csv")


def test_config_requires_one_input(tmp_path):
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(constants={"eta": 0.5, "k": 1.0}).validate()
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(oracle="sym_412", expressions={"p_plus": "x"}).validate()


@pytest.mark.parametrize("changes", [{"mode": "mode1"}, {"direction": "sideways"},
                                     {"tol": 0.0}, {"balance_tol": -1.0},
                                     {"formats": ("csv", "svg")}, {"grid_n": 1000},
                                     {"oracle": "no_such_case"},
                                     {"mode": "planestrain"}])
def test_config_validation(changes):
    cfg = cli.RunConfig(oracle="sym_412")
    for k, v in changes.items():
        setattr(cfg, k, v)
    with pytest.raises(cli.ConfigError):
        cfg.validate()


def test_load_config_errors(tmp_path):
    with pytest.raises(cli.ConfigError):
        cli.load_config(tmp_path / "missing.ini")
    bad = _write(tmp_path, "[run]\ngrid_n = many\n")
    with pytest.raises(cli.ConfigError):
        cli.load_config(bad)
    cfg = cli.load_config(_write(tmp_path, "[materials]\nmu_plus = 1\n[input]\noracle = sym_412\n",
                                 "m.ini"))
    with pytest.raises(cli.ConfigError):
        cli.build_constants(cfg)


def test_unexpected_input_field(tmp_path):
    p = _write(tmp_path, """
        [run]
        grid_n = 64
        [constants]
        eta = 0.5
        k = 1
        [input]
        p_upper = x
    """)
    assert cli.main(["--config", str(p)]) == 2


# runs and exit status

def test_mixed_case_end_to_end(tmp_path, capsys):
    rc, out = _oracle_run(tmp_path, formats="csv,plotdata,png")
    assert rc == 0
    report = json.loads((out / "profile_report.json").read_text(),
                        parse_constant=lambda c: pytest.fail(f"non-strict JSON {c}"))
    assert report["ok"] and not report["exceeded"]
    assert report["constants"]["eta"] == 2.0 and report["constants"]["b"] is None
    assert all(v <= 1e-4 for v in report["residuals"].values())
    for name in ("profile.csv", "profile.png", "profile_jump_u.dat", "profile_sigma.dat"):
        assert (out / name).exists()
    assert "status: ok" in capsys.readouterr().out


def test_mixed_case_replot_matches_oracle(tmp_path):
    _, out = _oracle_run(tmp_path)
    header, data = _read_csv(out / "profile.csv")
    x, jump, sigma = data[:, 0], data[:, 1], data[:, 3]
    ref = orc.mixed_oracle(x)
    neg = (x < 0) & (x > -10)
    pos = (x > 1e-4) & (x < 10)
    assert np.max(np.abs(jump[neg] - ref["jump_u"][neg])) <= 1e-3 * np.max(np.abs(jump))
    assert np.max(np.abs(sigma[pos] - ref["sigma"][pos])) <= 1e-3 * np.max(np.abs(sigma[pos]))


def test_csv_contract(tmp_path):
    _, out = _oracle_run(tmp_path, "sym_412", n=256)
    header, data = _read_csv(out / "profile.csv")
    assert header == "x,jump_u,mean_u,sigma,u_upper,u_lower"
    assert data.shape == (2 * 256, 6)
    x, jump, mean, sigma, up, lo = data.T
    assert np.all(np.diff(x) > 0)
    assert np.array_equal(up, mean + 0.5 * jump)
    assert np.array_equal(lo, mean - 0.5 * jump)
    assert not np.any(jump[x > 0]) and not np.any(sigma[x < 0])
    # 17 significant digits round-trip every double exactly
    line = (out / "profile.csv").read_text().splitlines()[100]
    assert all(repr(float(v)) == repr(float("%.17g" % float(v))) for v in line.split(","))


def test_plotdata_contract(tmp_path):
    _, out = _oracle_run(tmp_path, "sym_412", n=256, formats="plotdata")
    for name in cli.SERIES:
        rows = (out / f"profile_{name}.dat").read_text().splitlines()
        assert rows and all(len(r.split(" ")) == 2 for r in rows)
    jump = np.loadtxt(out / "profile_jump_u.dat")
    sigma = np.loadtxt(out / "profile_sigma.dat")
    assert np.all(jump[:, 0] < 0) and np.all(sigma[:, 0] > 0)
    assert len(np.loadtxt(out / "profile_mean_u.dat")) == 512


def test_identical_materials_symmetric_profile(tmp_path):
    p = _write(tmp_path, """
        [run]
        grid_n = 256
        [materials]
        mu_plus = 1
        mu_minus = 1
        [input]
        p_plus = x * exp(x)
        p_minus = x * exp(x)
    """)
    r = cli.run(cli.load_config(p), write=False)
    prof = r.profile
    assert np.max(np.abs(prof.u_upper + prof.u_lower)) <= 1e-12 * np.max(np.abs(prof.u_upper))


def test_zero_loading(tmp_path):
    p = _write(tmp_path, """
        [run]
        grid_n = 256
        [constants]
        eta = 0.5
        k = 1
        [input]
        p_plus = 0
        p_minus = 0
    """)
    r = cli.run(cli.load_config(p), write=False)
    assert r.ok and all(v == 0.0 for v in r.residuals.values())
    for name in ("jump_u", "mean_u", "sigma"):
        assert not np.any(getattr(r.profile, name))


def test_unbalanced_loading_is_reported(tmp_path, capsys):
    p = _write(tmp_path, """
        [run]
        grid_n = 256
        [constants]
        eta = 0.5
        k = 1
        [input]
        p_plus = exp(x)
        p_minus = 0
    """)
    assert cli.main(["--config", str(p)]) == 2
    assert "error [mode3.BalanceError]" in capsys.readouterr().err


def test_exit_status_follows_threshold(tmp_path):
    assert cli.main(["--oracle", "sym_412", "--tol", "1e-300"]) == 1
    assert cli.main(["--oracle", "sym_412"]) == 0
    cfg = cli.RunConfig(oracle="sym_412", grid_n=256, tol=1e-300)
    r = cli.run(cfg, write=False)
    assert r.exit_code == 1 and set(r.exceeded) == set(r.residuals)


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["--oracle", "sym_412", "--formats", "csv"]) == 0
    assert (tmp_path / "env" / "profile.csv").exists()


def test_no_output_without_directory(tmp_path, monkeypatch):
    monkeypatch.delenv(cli.OUT_ENV, raising=False)
    monkeypatch.chdir(tmp_path)
    r = cli.run(cli.RunConfig(oracle="sym_412", grid_n=256))
    assert r.manifest == [] and not list(tmp_path.iterdir())


def test_csv_is_byte_identical_across_runs(tmp_path):
    _, a = _oracle_run(tmp_path / "a", "antisym_411", n=256)
    _, b = _oracle_run(tmp_path / "b", "antisym_411", n=256)
    assert (a / "profile.csv").read_bytes() == (b / "profile.csv").read_bytes()


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    r = cli.run(cli.RunConfig(oracle="sym_412", grid_n=64), write=False)
    with pytest.raises(OSError):
        cli.emit_profile(r.profile, blocker / "sub" / "profile", "csv")
    with pytest.raises(ValueError):
        cli.emit_profile(r.profile, tmp_path / "p", "xlsx")


# plane strain and inverse runs

def test_planestrain_forward_components(tmp_path):
    p = _write(tmp_path, """
        [run]
        mode = planestrain
        [materials]
        mu_plus = 1
        mu_minus = 3
        nu_plus = 0.2
        nu_minus = 0.35
        [input]
        p_plus_1 = x * exp(x) + (x + 1) * exp(x) / 2
        p_minus_1 = x * exp(x) - (x + 1) * exp(x) / 2
        p_plus_2 = exp(x)
        p_minus_2 = exp(x)
        [output]
        dir = out
        formats = csv
    """)
    assert cli.main(["--config", str(p)]) == 0
    for i in (1, 2):
        header, data = _read_csv(tmp_path / "out" / f"profile_{i}.csv")
        assert header == cli.CSV_HEADER and data.shape == (2048, 6)


@pytest.mark.parametrize("case", orc.CASES)
def test_inverse_oracle_runs(case):
    r = cli.run(cli.RunConfig(oracle=case, direction="inverse"), write=False)
    assert r.ok, r.residuals


def test_inverse_with_inadmissible_data_fails_honestly(tmp_path):
    p = _write(tmp_path, """
        [run]
        direction = inverse
        grid_n = 256
        [constants]
        eta = 0.5
        k = 1
        [input]
        jump_u = sqrt(-x) * exp(x)
        mean_u = 0
    """)
    assert cli.main(["--config", str(p)]) == 1


def test_value_at_interpolates_in_log_coordinate():
    g = fo.make_grid("negative", 1024)
    f = fo.sample(g, lambda x: np.exp(x))
    assert cli.value_at(f, -1.0) == pytest.approx(math.exp(-1.0), rel=1e-6)
