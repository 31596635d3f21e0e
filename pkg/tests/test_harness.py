import math

import pytest

from vofwave import harness
from vofwave.harness import (
    ConvergenceTable,
    RunConfig,
    TableRow,
    ao_rate,
    co_rate,
    load_config,
    measure_error,
    parse_config,
    run_table,
)
from vofwave.stepper import ConfigurationError


def test_co_rate():
    assert co_rate(3.280e-3, 2.245e-3, 100, 200) == pytest.approx(0.547, abs=1e-3)
    assert co_rate(1e-3, 1e-3, 100, 200) == 0.0
    assert co_rate(4e-3, 1e-3, 100, 200) == pytest.approx(2.0)
    assert co_rate(1e-3, 4e-3, 200, 100) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        co_rate(1e-3, 2e-3, 10, 10)
    assert math.isnan(co_rate(0.0, 1e-3, 10, 20))


def test_ao_rate():
    assert ao_rate(6.705e-4, 50) == pytest.approx(-1.868, abs=1e-3)
    assert ao_rate(4.634e-4, 5) == pytest.approx(-4.770, abs=1e-3)
    assert ao_rate(1 / 37, 37) == pytest.approx(-1.0)
    assert math.isnan(ao_rate(-1.0, 5))


def test_parse_config():
    text = """
    # comment
    [run]
    problem = ex2-II   # trailing comment
    taus = 0.1, 0.05 0.025
    Ns = 5 10
    rho.kind = exp-decay
    """
    m = parse_config(text)
    assert m == {"problem": "ex2-II", "taus": "0.1, 0.05 0.025", "Ns": "5 10", "rho.kind": "exp-decay"}
    cfg = RunConfig.from_mapping(m)
    assert cfg.taus == (0.1, 0.05, 0.025) and cfg.Ns == (5, 10)
    with pytest.raises(ConfigurationError):
        parse_config("no equals sign")


def test_config_errors():
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"colour": "red"})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"N": "many"})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"tau": "1.5"})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"N": "3"})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"problem": "ex7"})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"domain.b": "2"}).setup()


def test_load_config_and_round_trip(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("problem = ex3\nN = 12\n", encoding="utf-8")
    cfg = load_config(p, ["n=40", "rho.value = -1"])
    assert (cfg.problem, cfg.N, cfg.n, cfg.rho_value) == ("ex3", 12, 40, -1.0)
    assert RunConfig.from_mapping(cfg.to_mapping()) == cfg
    spec, _ = cfg.setup()
    assert spec.rho(1.0) == pytest.approx(math.e)


def test_setup_overrides():
    cfg = RunConfig.from_mapping({"problem": "ex2-I", "mu.kind": "constant", "mu.start": "0.3"})
    spec, exact = cfg.setup()
    assert spec.mu(0.7) == 0.3
    cfg = RunConfig.from_mapping({"problem": "ex3", "mu.switch": "0.25"})
    spec, _ = cfg.setup()
    assert spec.mu(0.3) == 0.75
    cfg = RunConfig.from_mapping({"problem": "ex1", "T": "0.5"})
    assert cfg.setup()[0].T == 0.5


def test_mode_problem():
    cfg = RunConfig.from_mapping({"problem": "mode"})
    assert measure_error(cfg, 16, 64) < 0.05
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"problem": "mode", "mu.kind": "linear", "mu.end": "0.7"}).setup()


def test_csv_round_trip():
    t = ConvergenceTable("time", [TableRow(0.1, 3.2e-3), TableRow(0.05, 1.6e-3), TableRow(0.025, None)])
    t.fill_orders()
    assert t.column("order") == [None, pytest.approx(1.0), None]
    back = ConvergenceTable.from_csv(t.to_csv())
    assert back.to_csv() == t.to_csv()
    assert t.to_csv().splitlines()[0] == "param,error,order"
    with pytest.raises(ValueError):
        ConvergenceTable.from_csv("a,b,c\n")


def test_space_orders():
    t = ConvergenceTable("space", [TableRow(5, 0.2), TableRow(10, 0.01)])
    t.fill_orders()
    assert t.rows[0].order == pytest.approx(math.log(0.2) / math.log(5))


def test_run_table_deterministic():
    cfg = RunConfig.from_mapping({"problem": "ex2-I", "N": "8", "taus": "0.1 0.05 0.025", "threads": "3"})
    a = run_table(cfg, "time")
    b = run_table(cfg, "time")
    assert a.to_csv() == b.to_csv()
    assert a.column("param") == [0.1, 0.05, 0.025]
    assert a.rows[0].order is None and a.rows[1].order > 0


def test_single_row_table():
    cfg = RunConfig.from_mapping({"problem": "ex1", "N": "8", "taus": "0.1"})
    t = run_table(cfg, "time")
    assert len(t.rows) == 1 and t.rows[0].order is None and t.rows[0].error > 0


def test_failed_row_recorded(monkeypatch):
    real = harness.measure_error

    def flaky(config, N, n):
        if N == 6:
            raise FloatingPointError("overflow")
        return real(config, N, n)

    monkeypatch.setattr(harness, "measure_error", flaky)
    cfg = RunConfig.from_mapping({"problem": "ex2-I", "Ns": "5 6 7", "tau": "0.05"})
    t = run_table(cfg, "space")
    assert t.rows[1].error is None and "overflow" in t.rows[1].note
    assert t.rows[0].error > 0 and t.rows[2].error > 0
    with pytest.raises(ValueError):
        run_table(cfg, "diagonal")
