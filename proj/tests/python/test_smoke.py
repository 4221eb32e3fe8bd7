import math
from pathlib import Path

import pytest

import imitate

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def test_primitives():
    assert imitate.PRIMITIVES == ["idle", "move", "pick", "place", "push", "tilt", "rotate"]


def test_window_filter_hand_trace():
    frames = ["idle"] * 4 + ["move"] * 3 + ["pick"] * 4 + ["move"] * 3 + ["place"] * 4
    assert imitate.window_filter(frames, 3) == ["idle", "move", "pick", "move", "place"]


def test_unknown_label_rejected():
    with pytest.raises(ValueError):
        imitate.window_filter(["grab"], 3)


def test_noisy_stream_recovered():
    keys = ["idle", "move", "pick"]
    stream = imitate.synthesize_stream(keys, 30, 0.1, 42)
    assert len(stream) == 90
    assert stream == imitate.synthesize_stream(keys, 30, 0.1, 42)
    assert imitate.window_filter(stream, 15) == keys


def test_pose():
    assert imitate.principal_angle([(0, 0), (1, 1), (2, 2)]) == pytest.approx((math.pi / 4, False))
    assert imitate.centroid([(0, 0), (2, 2)]) == (1.0, 1.0)
    p = imitate.estimate_pose("grape", [(5, 7)])
    assert (p.x, p.y, p.theta, p.cls, p.degenerate) == (5.0, 7.0, 0.0, "grape", True)


def test_model_and_bench():
    model = imitate.Model.load(FIXTURES / "corpus.txt", FIXTURES / "lexicon.json")
    assert model.sentences > 50
    assert model.select("place", {"banana", "plastic-box"}) == "plastic-box"
    results = imitate.run_bench(FIXTURES / "tasks", model, trials=2, noise=0.0, seed=1)
    assert len(results) == 7
    assert all(r.successes == 2 for r in results)
