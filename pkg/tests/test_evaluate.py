import numpy as np
import pytest

from volaug import (
    LabelTrack,
    PredictionTrack,
    VolaugError,
    average_precision,
    evaluate_detection,
    map_charades_protocol,
    map_per_frame,
    split_statistics,
)
from volaug.evaluate import boundary_frames, charades_frame_indices

from reference import ref_average_precision, ref_map_pooled


def test_ap_examples():
    assert average_precision([0.9, 0.1, 0.8, 0.3], [1, 0, 1, 0]) == 1.0
    ap = average_precision([0.9, 0.8, 0.1, 0.3], [1, 0, 0, 1])
    assert ap == pytest.approx((1.0 + 2.0 / 3.0) / 2.0, abs=1e-12)
    assert average_precision([0.5, 0.5, 0.5], [1, 1, 1]) == 1.0


def test_ap_requires_positive():
    with pytest.raises(VolaugError):
        average_precision([0.1, 0.2], [0, 0])


def test_ap_tie_break_stable():
    # equal scores keep original order: positive first -> precision 1 at rank 1
    assert average_precision([0.5, 0.5], [1, 0]) == 1.0
    assert average_precision([0.5, 0.5], [0, 1]) == 0.5


def test_ap_invariant_under_monotone_transform():
    rng = np.random.default_rng(0)
    for _ in range(50):
        scores = rng.random(30)
        truth = (rng.random(30) < 0.3).astype(int)
        if truth.sum() == 0:
            truth[0] = 1
        a = average_precision(scores, truth)
        b = average_precision(np.exp(3 * scores) + 5, truth)
        assert a == pytest.approx(b, abs=1e-12)


def test_ap_matches_bruteforce_random():
    rng = np.random.default_rng(1)
    for _ in range(300):
        t = int(rng.integers(1, 51))
        scores = rng.random(t)
        truth = (rng.random(t) < 0.4).astype(int)
        if truth.sum() == 0:
            truth[int(rng.integers(0, t))] = 1
        assert average_precision(scores, truth) == pytest.approx(
            ref_average_precision(list(scores), list(truth)), abs=1e-9
        )


def random_eval_set(rng, videos=4, k=3, tmin=30, tmax=50):
    preds, truths = [], []
    for _ in range(videos):
        t = int(rng.integers(tmin, tmax + 1))
        truth = (rng.random((t, k)) < 0.3).astype(float)
        preds.append(PredictionTrack(scores=rng.random((t, k))))
        truths.append(LabelTrack(weights=truth, num_classes=k))
    return preds, truths


def test_map_perfect_predictor():
    rng = np.random.default_rng(2)
    _, truths = random_eval_set(rng)
    preds = [PredictionTrack(scores=t.weights.copy()) for t in truths]
    report = map_per_frame(preds, truths)
    assert report.map == pytest.approx(100.0, abs=1e-9)


def test_map_single_class_single_video_reduces_to_ap():
    rng = np.random.default_rng(3)
    scores = rng.random((40, 1))
    truth = (rng.random((40, 1)) < 0.4).astype(float)
    truth[0, 0] = 1.0
    report = map_per_frame(
        [PredictionTrack(scores=scores)],
        [LabelTrack(weights=truth, num_classes=1)],
    )
    assert report.map == pytest.approx(
        100.0 * average_precision(scores[:, 0], truth[:, 0]), abs=1e-12
    )


def test_map_matches_reference_evaluator():
    rng = np.random.default_rng(4)
    for _ in range(10):
        preds, truths = random_eval_set(rng, videos=3, k=3, tmin=20, tmax=50)
        # ensure every class has a positive somewhere
        truths[0].weights.setflags(write=True)
        truths[0].weights[0, :] = 1.0
        truths[0].weights.setflags(write=False)
        report = map_per_frame(preds, truths)
        expected = ref_map_pooled(
            [p.scores for p in preds], [t.weights for t in truths]
        )
        assert report.map == pytest.approx(expected, abs=1e-9)


def test_map_class_without_positives_absent():
    scores = np.asarray([[0.5, 0.5], [0.2, 0.8]])
    truth = np.asarray([[1.0, 0.0], [0.0, 0.0]])
    report = map_per_frame(
        [PredictionTrack(scores=scores)], [LabelTrack(weights=truth, num_classes=2)]
    )
    assert np.isnan(report.per_class_ap[1])
    assert report.to_dict()["per_class_ap"][1] is None


def test_map_shape_mismatch():
    with pytest.raises(VolaugError):
        map_per_frame(
            [PredictionTrack(scores=np.zeros((3, 2)))],
            [LabelTrack(weights=np.ones((4, 2)), num_classes=2)],
        )


def test_charades_indices():
    assert charades_frame_indices(25).tolist() == list(range(25))
    assert charades_frame_indices(49).tolist() == list(range(0, 49, 2))
    with pytest.raises(VolaugError):
        charades_frame_indices(24)


def test_charades_unit_weights_equal_unweighted_subsample():
    rng = np.random.default_rng(5)
    preds, truths = random_eval_set(rng, videos=3, k=4, tmin=25, tmax=60)
    for t in truths:
        t.weights.setflags(write=True)
        t.weights[0, :] = 1.0  # every class positive inside the 25-frame subset
        t.weights.setflags(write=False)
    weighted = map_charades_protocol(preds, truths, np.ones(4))
    sub_preds, sub_truths = [], []
    for p, t in zip(preds, truths):
        idx = charades_frame_indices(t.length)
        sub_preds.append(PredictionTrack(scores=p.scores[idx]))
        sub_truths.append(LabelTrack(weights=t.weights[idx], num_classes=4))
    unweighted = map_per_frame(sub_preds, sub_truths)
    assert weighted.map == unweighted.map


def test_charades_weights_scale_ap():
    rng = np.random.default_rng(6)
    preds, truths = random_eval_set(rng, videos=2, k=2, tmin=25, tmax=30)
    for t in truths:
        t.weights.setflags(write=True)
        t.weights[0, :] = 1.0
        t.weights.setflags(write=False)
    base = map_charades_protocol(preds, truths, np.ones(2))
    double = map_charades_protocol(preds, truths, np.asarray([2.0, 2.0]))
    assert double.map == pytest.approx(2 * base.map, abs=1e-9)
    with pytest.raises(VolaugError):
        map_charades_protocol(preds, truths, None)
    with pytest.raises(VolaugError):
        map_charades_protocol(preds, truths, np.ones(3))


def test_boundary_frames_example():
    # one class active on frames [2, 5] of 10, dilation 3 -> all frames boundary
    truth = np.zeros((10, 1))
    truth[2:6, 0] = 1.0
    mask = boundary_frames(truth, 3)
    assert mask.all()
    # dilation 1: change points 2 and 6 -> frames 1..3 and 5..7
    mask1 = boundary_frames(truth, 1)
    assert np.flatnonzero(mask1).tolist() == [1, 2, 3, 5, 6, 7]


def test_boundary_constant_truth_empty():
    truth = np.ones((12, 2))
    assert not boundary_frames(truth, 3).any()


def test_split_statistics_partition():
    rng = np.random.default_rng(7)
    preds, truths = random_eval_set(rng, videos=3, k=3)
    counts = np.concatenate([(t.weights > 0).sum(axis=1) for t in truths])
    splits = split_statistics(preds, truths, dilation=3)
    # partition checks: single + multi + zero-action = all; boundary + non = all
    boundary = np.concatenate([boundary_frames(t.weights, 3) for t in truths])
    n = counts.size
    assert ((counts == 1).sum() + (counts > 1).sum() + (counts == 0).sum()) == n
    assert boundary.sum() + (~boundary).sum() == n
    for name in ("single_action", "multi_action", "boundary", "non_boundary"):
        assert name in splits


def test_split_statistics_constant_truth():
    k = 2
    truth = np.zeros((30, k))
    truth[:, 0] = 1.0
    preds = [PredictionTrack(scores=np.random.default_rng(8).random((30, k)))]
    truths = [LabelTrack(weights=truth, num_classes=k)]
    splits = split_statistics(preds, truths)
    assert splits["boundary"] is None
    assert splits["non_boundary"] is not None
    assert splits["multi_action"] is None


def test_split_statistics_rejects_soft_truth():
    preds = [PredictionTrack(scores=np.zeros((4, 2)))]
    truths = [LabelTrack(weights=np.full((4, 2), 0.5), num_classes=2)]
    with pytest.raises(VolaugError):
        split_statistics(preds, truths)


def test_evaluate_detection_full_report():
    rng = np.random.default_rng(9)
    preds, truths = random_eval_set(rng, videos=2, k=3)
    report = evaluate_detection(preds, truths)
    d = report.to_dict()
    assert set(d) == {"map", "per_class_ap", "split_maps", "protocol", "num_videos"}
    assert 0 <= d["map"] <= 100
    assert d["num_videos"] == 2
    assert set(d["split_maps"]) == {
        "single_action", "multi_action", "boundary", "non_boundary",
    }
