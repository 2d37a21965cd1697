import pytest

import evercommit as ec


def test_bounds():
    assert ec.soundness_bound(ec.bundled_instance("ghz")) == pytest.approx(1.0)
    assert ec.soundness_bound(ec.bundled_instance("frustrated")) == pytest.approx(0.853553, abs=1e-6)


def test_protocol_run():
    res = ec.run_protocol(ec.bundled_instance("ghz"), seed=7)
    assert res["verifier_out"] and res["prover_out"]
    assert len(res["rounds"]) == 1
    liar = ec.run_protocol(ec.bundled_instance("ghz"), cheater="decommit-liar", seed=7)
    assert not liar["verifier_out"]


def test_estimators():
    ghz = ec.bundled_instance("ghz")
    assert ec.estimate_completeness(ghz, trials=200)["rate"] == 1.0
    sound = ec.estimate_soundness(ec.bundled_instance("frustrated"), trials=2000, seed=3)
    assert abs(sound["rate"] - 0.8536) < 0.05
    assert ec.estimate_zk_distance(ghz, samples=2000, seed=3)["tv"] < 0.1


def test_games():
    comp = ec.run_game("otcd", "comp-measure", trials=20000, seed=5)
    assert abs(comp["cert_accept_rate"] - 0.0625) < 0.01
    assert comp["conditioning"] == "cert-accepted"
    assert ec.run_game("otcd", "comp-measure", trials=2000, seed=5) == ec.run_game(
        "otcd", "comp-measure", trials=2000, seed=5)
    assert "brute-force" in ec.strategy_names("chide")


def test_errors():
    with pytest.raises(ValueError):
        ec.run_game("otcd", "nope")
    with pytest.raises(ValueError):
        ec.run_game("otcd", trials=10)
    bad = ec.bundled_instance("ghz")
    bad["n"] = 13
    with pytest.raises(ValueError):
        ec.soundness_bound(bad)
