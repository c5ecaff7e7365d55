import numpy as np
import pytest

import tactile_dbm as td

TINY = """
ITERATIONS=20
PARTICLES=20
EVAL_INTERVAL=10
EVAL_SAMPLES=20
SAMPLE_BURN_IN=5
TRIALS=1
HOMEOSTASIS_STEPS=10
BASELINE_SWEEPS=5
SCENARIO_CHAINS=2
SCENARIO_DECODES=5
DECODE_SAMPLES=5
"""


def test_dataset_and_metrics():
    tri = td.triangle_dataset()
    assert len(tri) == 3
    assert all(p.sum() == 3 for p in tri)
    assert td.performance_q(tri[1], tri) == 1.0
    a = np.zeros(18)
    a[[0, 1, 2]] = 1
    b = np.zeros(18)
    b[[2, 3, 4]] = 1
    assert td.dice(a, b) == pytest.approx(1 / 3)
    assert td.pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        td.pearson([1, 1, 1], [1, 2, 3])


def test_masks():
    circ = td.mask("circular")
    lin = td.mask("linear")
    assert circ.shape == (18, 18)
    assert (circ.sum(axis=1) == 9).all()
    assert lin.sum() < circ.sum()
    with pytest.raises(ValueError):
        td.mask("square")


def test_config():
    c = td.Config(TINY)
    assert c.trials == 1
    c.receptive_field = "linear"
    assert "RECEPTIVE_FIELD=linear" in str(c)
    assert c.update("SEED=9").seed == 9
    with pytest.raises(td.ConfigError):
        td.Config("NOT_A_KEY=1")


def test_identity_decode():
    p = td.DbmParams.zeros()
    p.w1 = 10 * np.eye(18)
    p.w2 = 10 * np.eye(18)
    tri = td.triangle_dataset()
    out = td.decode(p, tri[0], mode="deterministic")
    assert np.array_equal(out, tri[0])


def test_trial_pipeline_and_checkpoint(tmp_path):
    c = td.Config(TINY)
    params, curve = td.train_trial(c, 0)
    assert curve[0][0] == "pretrain1"
    assert curve[-1][0] == "dbm"
    again, _ = td.train_trial(c, 0)
    assert params == again

    scores = td.score_trial(c, params, c.trial_seed(0))
    assert 0.0 <= scores["q_blank"] <= 1.0
    summary, trace, adapted = td.homeostasis_trial(c, params, scores, 0, c.trial_seed(0))
    assert len(trace) == 10
    assert summary["dq_gain"] == pytest.approx(summary["q_hallucination"] - summary["q_blank"])
    assert np.array_equal(adapted.w1, params.w1)

    path = tmp_path / "t.ckpt"
    td.write_checkpoint(str(path), params, 5)
    back, seed, _ = td.read_checkpoint(str(path))
    assert seed == 5
    assert back == params
    with pytest.raises(td.IoError):
        td.read_checkpoint(str(tmp_path / "missing.ckpt"))


def test_commands(tmp_path):
    c = td.Config(TINY)
    c.output_dir = str(tmp_path)
    q = td.run_train(c)
    assert set(q) == {"pretrain1", "pretrain2", "dbm"}
    assert set(td.run_scenarios(c)) == {"q_pattern", "q_corrupted", "q_blank"}
    h = td.run_homeostasis(c)
    assert h["rho"] is None
    rate, patterns = td.simulate_skin(c.update("SKIN_NOISE=false\nSKIN_ROUNDS=6"))
    assert rate == 1.0
    assert len(patterns) == 3
    assert (tmp_path / "summary_circular.csv").read_text().startswith("trial,")
