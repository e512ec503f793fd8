import math
import os
from pathlib import Path

import pytest

import culturestream as cs

FIXTURES = Path(os.environ.get("CS_FIXTURE_DIR", Path(__file__).resolve().parents[1] / "fixtures"))


def test_extract_facts():
    out = cs.extract_facts("RT @Alice: #TVDuell mit @bob", roster=["alice", "bob"])
    assert out == {"tagging": ["tvduell"], "retweeting": ["alice"], "mentioning": ["bob"]}


def test_practice_measures():
    assert cs.focus({"a": 5}) == 1.0
    assert cs.focus({}) is None
    assert cs.focus({"a": 3, "b": 1}) == pytest.approx(0.1887, abs=1e-4)
    assert cs.pair_similarity({"a": 1, "b": 1}, {"a": 1}) == pytest.approx(1 / math.sqrt(2))
    assert cs.rank({"b": 2, "a": 2, "c": 5}) == [("c", 5), ("a", 2), ("b", 2)]
    assert cs.reproduction({"a": 2, "b": 1}, {"b": 2, "a": 1}) == pytest.approx(0.9, abs=1e-9)
    assert cs.rbo_depth_weight(0.9, 10) == pytest.approx(0.8556, abs=5e-4)


def test_fact_measures():
    r = [5 if w in (1, 3, 5, 7, 9) else 0 for w in range(13)]
    assert cs.institutionness(r, [1.0] * 13) == 5
    assert cs.institutionness([200] * 13, [3.0] * 13, "normalized") == 13
    costs = cs.burst_costs([1, 5], [10, 10])
    assert costs[1][0] - costs[1][1] == pytest.approx(0.6675, abs=1e-3)
    episodes = cs.burst_episodes([5, 5, 0, 5, 0, 0, 0, 0], [10] * 8)
    assert [(onset, end) for onset, end, _ in episodes] == [(1, 2), (4, 4)]
    assert all(weight > 0 for _, _, weight in episodes)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        cs.institutionness([1, 2], [1.0], "sideways")
    with pytest.raises(ValueError):
        cs.burst_costs([3], [2])


def test_selftest():
    checks = cs.selftest()
    assert len(checks) >= 15
    assert all(ok for _, ok, _ in checks)
    assert not all(ok for _, ok, _ in cs.selftest(0.5))


def test_synth_and_pipeline(tmp_path):
    n = cs.synth_fixture(tmp_path / "fx", {"a": 5, "b": 5}, windows=4, seed=3)
    assert n > 0
    result = cs.run_pipeline(tmp_path / "fx" / "run.conf", overrides={"out": str(tmp_path / "out")})
    assert result["transactions"] == n
    assert result["failures"] == []
    names = dict(result["artifacts"])
    assert names["tagging/reproduction.csv"] == 3 * 3
    assert (tmp_path / "out" / "manifest.csv").exists()


def test_pipeline_on_bundled_fixture(tmp_path):
    result = cs.run_pipeline(FIXTURES / "week13" / "run.conf", "facts", {"out": str(tmp_path)})
    assert result["transactions"] == 2439
    assert (tmp_path / "tagging" / "facts.csv").exists()
    assert not (tmp_path / "tagging" / "focus.csv").exists()
