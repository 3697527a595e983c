import math
import os
import pathlib

import pytest

import momab

CONFIGS = pathlib.Path(os.environ.get("MOMAB_CONFIGS", pathlib.Path(__file__).resolve().parents[2] / "configs"))

SMALL = """
[experiment]
scenario = stochastic_log
horizon = 2000
replications = 3
seed = 4

[environment]
kind = stochastic
means = 0.9,0.2 | 0.2,0.9 | 0.1,0.1
sigma = 0.1

[policy]
kind = mo_ks
s = 0
"""


def test_dominance_and_front():
    assert momab.compare([1, 1], [0, 0]) == "Dominates"
    assert momab.compare([1, 0], [0, 1]) == "Incomparable"
    assert momab.pareto_front([[0.6, 0.6], [0.5, 0.5], [1, 0]]) == [0, 2]
    assert momab.pareto_front([[0.4, 0.4], [0.4, 0.4]]) == [0, 1]


def test_distance():
    assert momab.dist([0.2, 0.5], [[0.7, 0.6]]) == pytest.approx(0.1)
    assert momab.dist([0, 0], [[1, 2], [2, 1]]) == pytest.approx(1.0)
    assert momab.minimax_gap([0, 0], [[1, 2], [2, 1]]) == pytest.approx(2.0)
    assert abs(momab.dist_oracle([0, 0], [[1, 2], [2, 1]]) - 1.0) <= 1e-4 + 1e-12
    assert momab.dist([1, 1], [[1, 1]]) == 0.0


def test_beta():
    assert momab.beta(1, 0.1, 2, 0.05) == pytest.approx(math.sqrt(0.02 * math.log(2 * math.pi**2 / 0.15)))


def test_oracle_suite():
    s = momab.run_oracle_suite(3, pairs=100, sets=100)
    assert s.passed()
    assert s.front_mismatches == 0


def test_run_and_csv(tmp_path):
    cfg = momab.parse_config(SMALL)
    assert cfg.horizon == 2000
    records = momab.run_experiment(cfg, workers=2)
    assert [r.run_id for r in records] == [0, 1, 2]
    assert [r.seed for r in records] == [4, 5, 6]
    final = records[0].final
    assert final["t"] == 2000
    assert final["regret_general"] <= min(final["regret_dim"]) + 1e-9
    assert final["regret_stochastic"] is not None
    text = momab.csv_text(records)
    assert text.splitlines()[0].startswith("run_id,seed,t,regret_general,regret_stochastic,regret_dim_1")
    assert text == momab.csv_text(momab.run_experiment(cfg, workers=1))
    out = tmp_path / "r.csv"
    momab.write_csv(records, str(out))
    assert out.read_text() == text
    results = momab.check_bounds(records, cfg)
    assert any(r.name.startswith("log growth") for r in results)


def test_shipped_config_loads():
    cfg = momab.load_config(str(CONFIGS / "attack_k2.ini"))
    assert cfg.scenario == "attack"
    cfg.replications = 1
    cfg.horizon = 500
    (rec,) = momab.run_experiment(cfg)
    assert rec.total_attack_cost is not None and rec.total_attack_cost >= 0.0


def test_bad_config():
    with pytest.raises(Exception):
        momab.parse_config(SMALL + "\nunknown_key = 1\n")
