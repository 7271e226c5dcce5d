import math

import pytest

from groupdeconv.experiments import (
    ScenarioGrid,
    benchmark_grid,
    law_xgrid,
    resolve_workers,
    run_grid,
    run_replication,
)
from groupdeconv.errors import GroupDeconvError
from groupdeconv.samples import Gamma, Laplace, Normal, benchmark_laws


def tiny_grid(**kw):
    defaults = dict(
        laws=(Normal(2.0, 1.0),),
        ns=(400,),
        group_sizes=(2, 5),
        replications=3,
        eta=1.1,
        master_seed=7,
    )
    defaults.update(kw)
    return ScenarioGrid(**defaults)


# ---------------------------------------------------------------------------
# replication level
# ---------------------------------------------------------------------------


def test_replication_deterministic_given_seed():
    a = run_replication(Gamma(6.0, 3.0), 500, 5, seed=(0, 1, 2))
    b = run_replication(Gamma(6.0, 3.0), 500, 5, seed=(0, 1, 2))
    assert a == b


def test_replication_oracle_dominates_adaptive():
    # the adaptive cutoff is injected into the oracle grid, so the oracle
    # risk can never exceed the adaptive risk
    for seed in range(20):
        r = run_replication(Laplace(0.5, 1 / 3), 500, 5, seed=(3, seed))
        assert r.risk_oracle <= r.risk_adaptive + 1e-6


def test_replication_risks_are_sane():
    r = run_replication(Normal(2.0, 1.0), 5000, 5, seed=11)
    assert 0 < r.risk_oracle < 0.3
    assert 0 < r.risk_adaptive < 0.3
    assert 0 < r.m_adaptive <= 5000 ** 0.2 + 1e-9
    assert r.threshold_hit


def test_law_xgrid_centred_on_summand():
    g = law_xgrid(Normal(2.0, 1.0))
    assert g.x_min == pytest.approx(2.0 - 8.0)
    assert g.x_max == pytest.approx(2.0 + 8.0)
    assert g.count == 1024


# ---------------------------------------------------------------------------
# grid level
# ---------------------------------------------------------------------------


def test_grid_shape_and_schema():
    report = run_grid(tiny_grid())
    assert len(report.rows) == 4  # 2 cells x 2 methods
    csv_text = report.to_csv()
    lines = csv_text.splitlines()
    assert lines[0] == "law,n,K,method,mean_risk,std_error,reps,mean_cutoff"
    assert len(lines) == 5
    assert lines[1].startswith("normal,400,2,oracle,")


def test_grid_deterministic_and_worker_independent():
    g = tiny_grid()
    a = run_grid(g, workers=1).to_csv()
    b = run_grid(g, workers=1).to_csv()
    c = run_grid(g, workers=2, block_size=1).to_csv()
    assert a == b
    assert a == c


def test_single_cell_single_rep():
    report = run_grid(tiny_grid(group_sizes=(2,), replications=1))
    assert len(report.rows) == 2
    for row in report.rows:
        assert row.replications == 1
        assert row.std_error == 0.0


def test_failed_cells_are_reported_not_omitted():
    # n=2 puts the adaptive threshold above 1, so every replication fails
    report = run_grid(tiny_grid(ns=(2,), group_sizes=(1,), replications=2))
    assert len(report.rows) == 2
    for row in report.rows:
        assert row.replications == 0
        assert row.failures == 2
        assert math.isnan(row.mean_risk)
    assert report.failures
    csv_text = report.to_csv()
    assert "normal,2,1,oracle,,,0," in csv_text


def test_scenario_grid_validation():
    with pytest.raises(GroupDeconvError):
        tiny_grid(replications=0)
    with pytest.raises(GroupDeconvError):
        tiny_grid(ns=(1,))
    with pytest.raises(GroupDeconvError):
        tiny_grid(group_sizes=(0,))


def test_benchmark_grid_is_full_study():
    g = benchmark_grid()
    assert len(g.cells) == 48
    assert g.replications == 500
    assert g.eta == 1.1
    assert {law.name for law in g.laws} == {"normal", "gumbel", "gamma", "laplace"}


def test_text_table_alignment():
    report = run_grid(tiny_grid())
    text = report.to_text()
    assert "r_or*" in text
    assert "eta=1.1" in text
    assert "master_seed=7" in text


def test_resolve_workers_env(monkeypatch):
    monkeypatch.delenv("GROUPDECONV_THREADS", raising=False)
    assert resolve_workers() == 1
    assert resolve_workers(4) == 4
    monkeypatch.setenv("GROUPDECONV_THREADS", "3")
    assert resolve_workers() == 3


def test_mean_cutoff_decreases_with_group_size():
    # |phi| = |phi_X|^K decays faster for larger K, so the scan crosses earlier
    laws = benchmark_laws()
    report = run_grid(
        ScenarioGrid(
            laws=(laws["gumbel"],),
            ns=(1000,),
            group_sizes=(5, 20),
            replications=10,
            master_seed=3,
        )
    )
    cuts = {
        row.group_size: row.mean_cutoff
        for row in report.rows
        if row.method == "adaptive"
    }
    assert cuts[20] < cuts[5]
