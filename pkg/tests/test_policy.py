import numpy as np
import pytest

from volaug import (
    ClipVolume,
    PredictionTrack,
    VolaugError,
    apply_record,
    ensemble,
    joint_policy,
    pseudo_label,
    rng_from_seed,
)


def make_batch(sizes, seed=0, k=5, h=2, w=8):
    rng = np.random.default_rng(seed)
    batch = []
    for i, n in enumerate(sizes):
        frames = rng.integers(0, 256, size=(n, h, w, 3), dtype=np.uint8)
        clip = ClipVolume(frames=frames, dtype="u8", id=f"b{i}")
        batch.append((clip, pseudo_label(n, i % k, k)))
    return batch


def test_zero_probs_identity():
    batch = make_batch([6, 8, 5])
    out, records = joint_policy(batch, (0, 0, 0), rng_from_seed(1))
    for (clip, labels), (oclip, olabels), recs in zip(batch, out, records):
        assert oclip is clip and olabels is labels
        assert [r.kind for r in recs] == ["none"]


def test_all_freeze():
    batch = make_batch([6, 8, 5])
    out, records = joint_policy(batch, (1, 0, 0), rng_from_seed(2))
    for (clip, _), (oclip, olabels), recs in zip(batch, out, records):
        assert [r.kind for r in recs] == ["freeze"]
        assert oclip.length == clip.length
        assert (olabels.row_mass() == 0).sum() >= 2


def test_batch_of_one_skips_blends():
    batch = make_batch([6])
    out, records = joint_policy(batch, (0, 1, 1), rng_from_seed(3))
    kinds = [r.kind for r in records[0]]
    assert kinds == ["none", "none"]
    notes = [r.params for r in records[0]]
    assert {n["skipped"] for n in notes} == {"mixup", "cutmix"}
    assert out[0][0] is batch[0][0]


def test_composition_order_and_replay():
    batch = make_batch([8, 8, 8], seed=4)
    out, records = joint_policy(batch, (1, 1, 1), rng_from_seed(7))
    sources = {c.id: (c, l) for c, l in batch}
    for i, recs in enumerate(records):
        kinds = [r.kind for r in recs if r.kind != "none"]
        assert kinds[0] == "freeze"
        assert set(kinds[1:]) <= {"mixup", "cutmix_window", "cutmix_view"}
        # replay the chain against original sources
        state = dict(sources)
        clip, labels = state[batch[i][0].id]
        for rec in recs:
            if rec.kind == "none":
                continue
            state[batch[i][0].id] = (clip, labels)
            clip, labels = apply_record(rec, state)
        assert np.array_equal(clip.frames, out[i][0].frames)
        assert np.array_equal(labels.weights, out[i][1].weights)


def test_policy_deterministic():
    batch = make_batch([8, 6, 7], seed=5)
    a_out, a_rec = joint_policy(batch, (0.5, 0.5, 0.5), rng_from_seed(11))
    b_out, b_rec = joint_policy(batch, (0.5, 0.5, 0.5), rng_from_seed(11))
    for (ca, la), (cb, lb) in zip(a_out, b_out):
        assert np.array_equal(ca.frames, cb.frames)
        assert np.array_equal(la.weights, lb.weights)
    assert [[r.kind for r in rs] for rs in a_rec] == [[r.kind for r in rs] for rs in b_rec]


def test_policy_application_rates():
    rng = rng_from_seed(123)
    batch = make_batch([6, 6], seed=6)
    applied = np.zeros(3)
    trials = 3000
    for _ in range(trials):
        _, records = joint_policy(batch, (0.5, 0.5, 0.5), rng)
        kinds = {r.kind for recs in records for r in recs}
        applied[0] += "freeze" in kinds
        applied[1] += "mixup" in kinds
        applied[2] += any(k.startswith("cutmix") for k in kinds)
    rates = applied / trials
    sigma = np.sqrt(0.25 / trials)
    assert np.all(np.abs(rates - 0.5) <= 3 * sigma + 1e-9), rates


def test_policy_rejects_bad_probs():
    with pytest.raises(VolaugError):
        joint_policy(make_batch([4]), (0.5, 1.5, 0.5), rng_from_seed(0))


def test_ensemble_mean():
    t1 = PredictionTrack(scores=np.asarray([[0.2, 0.8]]))
    t2 = PredictionTrack(scores=np.asarray([[0.4, 0.6]]))
    out = ensemble([t1, t2])
    assert np.allclose(out.scores, [[0.3, 0.7]], atol=1e-12)


def test_ensemble_identity_and_idempotence():
    t = PredictionTrack(scores=np.asarray([[0.1, 0.9], [0.3, 0.2]]))
    assert np.array_equal(ensemble([t]).scores, t.scores)
    many = ensemble([t, t, t, t])
    assert np.allclose(many.scores, t.scores)


def test_ensemble_permutation_invariant_and_bounded():
    rng = np.random.default_rng(9)
    tracks = [PredictionTrack(scores=rng.random((4, 3))) for _ in range(4)]
    a = ensemble(tracks)
    b = ensemble(tracks[::-1])
    assert np.allclose(a.scores, b.scores)
    assert a.scores.min() >= 0 and a.scores.max() <= 1


def test_ensemble_argmax_invariant_to_common_rescale():
    rng = np.random.default_rng(10)
    tracks = [PredictionTrack(scores=rng.random((6, 4))) for _ in range(3)]
    base = ensemble(tracks)
    scaled = ensemble(
        [PredictionTrack(scores=t.scores * 0.25) for t in tracks]
    )
    assert np.array_equal(
        np.argmax(base.scores, axis=1), np.argmax(scaled.scores, axis=1)
    )


def test_ensemble_shape_mismatch():
    t1 = PredictionTrack(scores=np.zeros((2, 3)))
    t2 = PredictionTrack(scores=np.zeros((3, 3)))
    with pytest.raises(VolaugError):
        ensemble([t1, t2])
    with pytest.raises(VolaugError):
        ensemble([])


def test_ensemble_geometric():
    t1 = PredictionTrack(scores=np.asarray([[0.25]]))
    t2 = PredictionTrack(scores=np.asarray([[1.0]]))
    out = ensemble([t1, t2], method="geometric")
    assert out.scores[0, 0] == 0.5
